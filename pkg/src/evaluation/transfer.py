"""
Cross-technology transfer: re-decide the technology factors for a new library
while the architecture and implementation values stay frozen.
"""

import logging

from calibration.tech_factors import decide_tech_factors
from config.parameter_registry import ParameterLevel, ParameterSet, Provenance
from data.models import TechCharacterization, TechProfile
from model.energy import DEFAULT_TECH_PROFILE

logger = logging.getLogger(__name__)


def transfer_tech(calibrated: ParameterSet, target_char: TechCharacterization,
                  tech: TechProfile = DEFAULT_TECH_PROFILE) -> ParameterSet:
    """
    Return calibrated with only Tech Array Factor and Tech Logic Factor
    recomputed from target_char.

    Raises:
        ValueError: implementation values were not calibrated, or the
            characterization yields out-of-range factors
    """
    if calibrated.provenance.get(ParameterLevel.IMPLEMENTATION) != Provenance.CALIBRATED:
        raise ValueError("transfer_tech needs a parameter set with calibrated implementation-level values")
    factors = decide_tech_factors(target_char, tech)
    transferred = calibrated.updated(factors, {ParameterLevel.TECHNOLOGY: Provenance.CALIBRATED})
    logger.info(f"Transferred parameters to {target_char.node_name}")
    return transferred
