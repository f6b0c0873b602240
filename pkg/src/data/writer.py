"""
Emitters for the text formats read by data.loader.

Floats are written with repr() so every value parses back bit-exactly.
"""

import logging
from dataclasses import fields
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional

from data.config_table import HARDWARE_KEYS
from data.loader import DESIGN_FILE, EVENTS_SUFFIX, LABELS_SUFFIX, TECH_CHAR_FILE
from data.models import (
    EVENT_COUNTER_FIELDS,
    ComponentId,
    EventCounts,
    HardwareConfig,
    TechCharacterization,
    TrainingSample,
)
from reports.csv_writer import write_text_atomic

logger = logging.getLogger(__name__)


def format_number(value: Any) -> str:
    if isinstance(value, bool):
        raise TypeError(f"Expected a number, got {value!r}")
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def _format_arch_value(value: Any) -> str:
    if isinstance(value, bool):
        return "Yes" if value else "No"
    return str(value)


def format_design_config(hw: HardwareConfig, arch_params: Optional[Dict[str, Any]] = None,
                         clock_frequency: Optional[float] = None) -> str:
    field_to_key = {field_name: key for key, field_name in HARDWARE_KEYS.items()}
    lines = ["[hardware]"]
    for item in fields(HardwareConfig):
        lines.append(f"{field_to_key[item.name]} = {getattr(hw, item.name)}")
    if arch_params:
        lines += ["", "[architecture]"]
        for name, value in arch_params.items():
            lines.append(f"{name} = {_format_arch_value(value)}")
    if clock_frequency is not None:
        lines += ["", "[clock]", f"clock_frequency = {format_number(clock_frequency)}"]
    return "\n".join(lines) + "\n"


def format_event_trace(events: EventCounts) -> str:
    lines = [
        f"cycles = {format_number(events.cycles)}",
        f"clock_frequency = {format_number(events.clock_frequency)}",
    ]
    for name in EVENT_COUNTER_FIELDS:
        lines.append(f"{name} = {format_number(getattr(events, name))}")
    return "\n".join(lines) + "\n"


def format_tech_characterization(char: TechCharacterization) -> str:
    lines = [
        f"node_name = {char.node_name}",
        f"sram_rows = {char.sram_rows}",
        f"sram_width = {char.sram_width}",
        f"sram_read_energy_pj = {format_number(char.sram_read_energy)}",
        f"sram_write_energy_pj = {format_number(char.sram_write_energy)}",
        f"dff_worst_case_power_uw = {format_number(char.dff_worst_case_power)}",
    ]
    if char.dff_reference_freq_hz is not None:
        lines.append(f"dff_reference_freq_hz = {format_number(char.dff_reference_freq_hz)}")
    return "\n".join(lines) + "\n"


def format_labels(component_labels: Dict[ComponentId, float], total: float) -> str:
    lines = [f"{component_id.value} = {format_number(component_labels[component_id])}"
             for component_id in ComponentId]
    lines.append(f"total = {format_number(total)}")
    return "\n".join(lines) + "\n"


class DatasetWriter:
    """Writes samples in the directory layout DatasetLoader reads."""

    def __init__(self):
        self.logger = logging.getLogger(__name__)

    def write(self, samples: Iterable[TrainingSample], output_dir: str,
              tech_char: Optional[TechCharacterization] = None) -> List[Path]:
        """
        Write a dataset directory.

        Args:
            samples: Samples to write; samples sharing a config_id must share hw and arch values
            output_dir: Dataset root, created when missing
            tech_char: Optional characterization stored as the dataset default

        Returns:
            Paths of all files written
        """
        root = Path(output_dir)
        written: List[Path] = []
        designs: Dict[str, str] = {}
        count = 0
        for sample in samples:
            design_text = format_design_config(sample.hw, sample.arch_params, sample.events.clock_frequency)
            previous = designs.get(sample.config_id)
            if previous is None:
                written.append(write_text_atomic(str(root / sample.config_id / DESIGN_FILE), design_text))
                designs[sample.config_id] = design_text
            elif previous != design_text:
                raise ValueError(f"Samples of {sample.config_id} disagree on the design config")
            config_dir = root / sample.config_id
            written.append(write_text_atomic(str(config_dir / f"{sample.workload}{EVENTS_SUFFIX}"),
                                             format_event_trace(sample.events)))
            written.append(write_text_atomic(str(config_dir / f"{sample.workload}{LABELS_SUFFIX}"),
                                             format_labels(sample.component_labels, sample.total_label)))
            count += 1
        if tech_char is not None:
            written.append(write_text_atomic(str(root / TECH_CHAR_FILE), format_tech_characterization(tech_char)))
        self.logger.info(f"Wrote {count} samples across {len(designs)} configurations to {root}")
        return written
