"""
Technology-level parameter decision from library characterization data.
"""

import logging
from typing import Dict

from config.parameter_registry import get_spec
from data.models import ArrayGeometry, TechCharacterization, TechProfile
from model.energy import ArrayOp, array_op_energy

logger = logging.getLogger(__name__)

TECH_ARRAY_FACTOR = "Tech Array Factor"
TECH_LOGIC_FACTOR = "Tech Logic Factor"


def reference_array(char: TechCharacterization) -> ArrayGeometry:
    """Single-port SRAM with the characterized shape."""
    return ArrayGeometry(rows=char.sram_rows, width=char.sram_width)


def decide_tech_array_factor(char: TechCharacterization, tech: TechProfile) -> float:
    """
    Mean of the library/model ratios of SRAM read and write energy.

    Args:
        char: Measured SRAM macro energies
        tech: Model technology constants

    Returns:
        Tech Array Factor (> 0)
    """
    reference = reference_array(char)
    model_read = array_op_energy(reference, ArrayOp.READ, tech, 1.0)
    model_write = array_op_energy(reference, ArrayOp.WRITE, tech, 1.0)
    if model_read <= 0 or model_write <= 0:
        raise ValueError(f"Model reference array energy is not positive "
                         f"(read={model_read}, write={model_write})")
    factor = (char.sram_read_energy / model_read + char.sram_write_energy / model_write) / 2
    logger.debug(f"{char.node_name}: reference array read {model_read} pJ, write {model_write} pJ "
                 f"-> array factor {factor}")
    return factor


def decide_tech_logic_factor(char: TechCharacterization, tech: TechProfile) -> float:
    """
    Ratio of library to model worst-case DFF power, normalized to the
    model's reference frequency.

    Raises:
        ValueError: characterization frequency unknown
    """
    if char.dff_reference_freq_hz is None:
        raise ValueError(
            f"{char.node_name}: dff_reference_freq_hz missing, cannot normalize DFF power "
            f"to the model reference of {tech.reference_frequency_hz} Hz"
        )
    factor = (char.dff_worst_case_power / tech.dff_clock_toggle_power) * (
        tech.reference_frequency_hz / char.dff_reference_freq_hz
    )
    logger.debug(f"{char.node_name}: DFF {char.dff_worst_case_power} uW @ {char.dff_reference_freq_hz} Hz "
                 f"-> logic factor {factor}")
    return factor


def decide_tech_factors(char: TechCharacterization, tech: TechProfile) -> Dict[str, float]:
    """
    Both technology factors, validated against their ranges.

    Raises:
        ValueError: a decided factor falls outside its range
    """
    decided = {
        TECH_ARRAY_FACTOR: decide_tech_array_factor(char, tech),
        TECH_LOGIC_FACTOR: decide_tech_logic_factor(char, tech),
    }
    for name, value in decided.items():
        spec = get_spec(name)
        if not spec.contains(value):
            raise ValueError(
                f"{char.node_name}: decided {name} = {value} outside range {spec.describe_range()}"
            )
    logger.info(f"Technology factors for {char.node_name}: "
                f"array={decided[TECH_ARRAY_FACTOR]:.6g}, logic={decided[TECH_LOGIC_FACTOR]:.6g}")
    return decided
