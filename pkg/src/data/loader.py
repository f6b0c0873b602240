"""
Parsers for design configs, event traces, technology characterizations and
label files, plus the dataset directory loader.

All files share one grammar: UTF-8 text, '#' starts a comment, blank lines
are ignored, 'key = value' pairs, optional '[section]' headers.
"""

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Tuple

from config.parameter_registry import ParameterLevel, ValueType, get_spec, specs_for
from data.config_table import HARDWARE_KEYS
from data.models import (
    EVENT_COUNTER_FIELDS,
    ComponentId,
    EventCounts,
    HardwareConfig,
    TechCharacterization,
    TrainingSample,
)

logger = logging.getLogger(__name__)

DEFAULT_CLOCK_HZ = 1000000000.0
DESIGN_FILE = "design.cfg"
EVENTS_SUFFIX = ".events"
LABELS_SUFFIX = ".labels"
TECH_CHAR_FILE = "tech_characterization.txt"


class ConfigParseError(ValueError):
    """Raised when an input file is malformed; the message names source, line and key."""


@dataclass(frozen=True)
class Entry:
    line_no: int
    section: Optional[str]
    key: str
    value: str


def iter_entries(text: str, source: str = "<input>") -> Iterator[Entry]:
    """Yield the key = value entries of a file in order."""
    section = None
    for line_no, raw_line in enumerate(text.splitlines(), start=1):
        content = raw_line.split("#", 1)[0].strip()
        if not content:
            continue
        if content.startswith("[") and content.endswith("]"):
            section = content[1:-1].strip()
            continue
        if "=" not in content:
            raise ConfigParseError(f"{source}:{line_no}: expected 'key = value', got '{content}'")
        key, _, value = content.partition("=")
        key, value = key.strip(), value.strip()
        if not key:
            raise ConfigParseError(f"{source}:{line_no}: missing key")
        yield Entry(line_no, section, key, value)


def _parse_number(entry: Entry, source: str) -> float:
    try:
        value = float(entry.value)
    except ValueError:
        raise ConfigParseError(f"{source}:{entry.line_no}: {entry.key} value '{entry.value}' is not a number") from None
    if not math.isfinite(value):
        raise ConfigParseError(f"{source}:{entry.line_no}: {entry.key} value '{entry.value}' is not finite")
    return value


def _parse_positive_int(entry: Entry, source: str) -> int:
    try:
        value = int(entry.value)
    except ValueError:
        raise ConfigParseError(
            f"{source}:{entry.line_no}: {entry.key} value '{entry.value}' is not an integer"
        ) from None
    if value <= 0:
        raise ConfigParseError(f"{source}:{entry.line_no}: {entry.key} must be a positive integer, got {value}")
    return value


def parse_arch_value(name: str, text: str, location: str = "<input>") -> Any:
    """Parse one architecture-level value: Yes/No for flags, a listed choice otherwise."""
    try:
        spec = get_spec(name)
    except ValueError:
        raise ConfigParseError(f"{location}: unknown architecture key {name}") from None
    if spec.level != ParameterLevel.ARCHITECTURE:
        raise ConfigParseError(f"{location}: {name} is not an architecture-level parameter")
    if spec.value_type == ValueType.BOOL:
        if text not in ("Yes", "No"):
            raise ConfigParseError(f"{location}: {name} must be Yes or No, got '{text}'")
        return text == "Yes"
    if text not in spec.choices:
        raise ConfigParseError(f"{location}: {name} value '{text}' not one of {spec.describe_range()}")
    return text


def parse_design_config(text: str, source: str = "<design>",
                        fill_defaults: bool = True) -> Tuple[HardwareConfig, Dict[str, Any], float]:
    """
    Parse a design config file.

    Sections: [hardware] with the configuration-table keys, optional
    [architecture] with architecture-level parameters, optional [clock]
    with clock_frequency (Hz, default 1 GHz).

    Args:
        text: File content
        source: Name used in error messages
        fill_defaults: Fill absent architecture values with their defaults

    Returns:
        (HardwareConfig, architecture values, clock frequency)
    """
    arch_specs = {spec.name: spec for spec in specs_for(ParameterLevel.ARCHITECTURE)}
    hardware: Dict[str, int] = {}
    hardware_lines: Dict[str, int] = {}
    arch_values: Dict[str, Any] = {}
    clock = None
    seen = set()

    for entry in iter_entries(text, source):
        location = f"{source}:{entry.line_no}"
        if (entry.section, entry.key) in seen:
            raise ConfigParseError(f"{location}: duplicate key {entry.key}")
        seen.add((entry.section, entry.key))
        if entry.section == "hardware":
            if entry.key not in HARDWARE_KEYS:
                raise ConfigParseError(f"{location}: unknown hardware key {entry.key}")
            hardware[HARDWARE_KEYS[entry.key]] = _parse_positive_int(entry, source)
            hardware_lines[entry.key] = entry.line_no
        elif entry.section == "architecture":
            if entry.key not in arch_specs:
                raise ConfigParseError(f"{location}: unknown architecture key {entry.key}")
            arch_values[entry.key] = parse_arch_value(entry.key, entry.value, location)
        elif entry.section == "clock":
            if entry.key != "clock_frequency":
                raise ConfigParseError(f"{location}: unknown clock key {entry.key}")
            clock = _parse_number(entry, source)
            if clock <= 0:
                raise ConfigParseError(f"{location}: clock_frequency must be positive, got {entry.value}")
        else:
            raise ConfigParseError(f"{location}: key {entry.key} outside a known section "
                                   f"([hardware], [architecture], [clock])")

    for key, field_name in HARDWARE_KEYS.items():
        if field_name not in hardware:
            raise ConfigParseError(f"{source}: missing mandatory hardware key {key}")
    if hardware["decode_width"] > hardware["fetch_width"]:
        raise ConfigParseError(
            f"{source}:{hardware_lines['DecodeWidth']}: DecodeWidth {hardware['decode_width']} "
            f"exceeds FetchWidth {hardware['fetch_width']}"
        )

    if fill_defaults:
        for name, spec in arch_specs.items():
            arch_values.setdefault(name, spec.default)
    if clock is None:
        logger.debug(f"{source}: no clock_frequency, using {DEFAULT_CLOCK_HZ} Hz")
        clock = DEFAULT_CLOCK_HZ
    return HardwareConfig(**hardware), arch_values, clock


def parse_event_trace(text: str, source: str = "<events>") -> EventCounts:
    """
    Parse an event trace. Missing counters default to 0 with a warning;
    cycles and clock_frequency are mandatory.
    """
    known = set(EVENT_COUNTER_FIELDS) | {"cycles", "clock_frequency"}
    values: Dict[str, float] = {}
    for entry in iter_entries(text, source):
        location = f"{source}:{entry.line_no}"
        if entry.key not in known:
            raise ConfigParseError(f"{location}: unknown event counter {entry.key}")
        if entry.key in values:
            raise ConfigParseError(f"{location}: duplicate event counter {entry.key}")
        value = _parse_number(entry, source)
        if value < 0:
            raise ConfigParseError(f"{location}: {entry.key} must be non-negative, got {entry.value}")
        if entry.key in ("cycles", "clock_frequency") and value == 0:
            raise ConfigParseError(f"{location}: {entry.key} must be positive")
        if entry.key != "clock_frequency" and value.is_integer() and "." not in entry.value:
            value = int(value)
        values[entry.key] = value

    for mandatory in ("cycles", "clock_frequency"):
        if mandatory not in values:
            raise ConfigParseError(f"{source}: missing mandatory key {mandatory}")
    missing = [name for name in EVENT_COUNTER_FIELDS if name not in values]
    if missing:
        logger.warning(f"{source}: counters missing, defaulting to 0: {', '.join(missing)}")
    return EventCounts(**values)


_TECH_KEYS = {
    "node_name": "node_name",
    "sram_rows": "sram_rows",
    "sram_width": "sram_width",
    "sram_read_energy_pj": "sram_read_energy",
    "sram_write_energy_pj": "sram_write_energy",
    "dff_worst_case_power_uw": "dff_worst_case_power",
    "dff_reference_freq_hz": "dff_reference_freq_hz",
}


def parse_tech_characterization(text: str, source: str = "<tech-char>") -> TechCharacterization:
    """Parse a technology characterization file; dff_reference_freq_hz is optional."""
    values: Dict[str, Any] = {}
    for entry in iter_entries(text, source):
        location = f"{source}:{entry.line_no}"
        if entry.key not in _TECH_KEYS:
            raise ConfigParseError(f"{location}: unknown characterization key {entry.key}")
        field_name = _TECH_KEYS[entry.key]
        if field_name in values:
            raise ConfigParseError(f"{location}: duplicate key {entry.key}")
        if field_name == "node_name":
            values[field_name] = entry.value
        elif field_name in ("sram_rows", "sram_width"):
            values[field_name] = _parse_positive_int(entry, source)
        else:
            value = _parse_number(entry, source)
            if value <= 0:
                raise ConfigParseError(f"{location}: {entry.key} must be positive, got {entry.value}")
            values[field_name] = value
    for key, field_name in _TECH_KEYS.items():
        if field_name not in values and key != "dff_reference_freq_hz":
            raise ConfigParseError(f"{source}: missing mandatory key {key}")
    return TechCharacterization(**values)


def parse_labels(text: str, source: str = "<labels>") -> Tuple[Dict[ComponentId, float], float]:
    """Parse a labels file: one watt value per component id plus 'total'."""
    labels: Dict[ComponentId, float] = {}
    total = None
    for entry in iter_entries(text, source):
        location = f"{source}:{entry.line_no}"
        value = _parse_number(entry, source)
        if value <= 0:
            raise ConfigParseError(f"{location}: label {entry.key} must be positive, got {entry.value}")
        if entry.key == "total":
            total = value
            continue
        try:
            component_id = ComponentId.parse(entry.key)
        except ValueError:
            raise ConfigParseError(f"{location}: unknown component {entry.key}") from None
        if component_id in labels:
            raise ConfigParseError(f"{location}: duplicate label {entry.key}")
        labels[component_id] = value
    missing = [component.value for component in ComponentId if component not in labels]
    if missing:
        raise ConfigParseError(f"{source}: missing component labels {', '.join(missing)}")
    if total is None:
        raise ConfigParseError(f"{source}: missing total")
    return labels, total


def read_text(path: Path) -> str:
    return Path(path).read_text(encoding="utf-8")


class DatasetLoader:
    """
    Loads a dataset directory:

        <dataset>/<config_id>/design.cfg
        <dataset>/<config_id>/<workload>.events
        <dataset>/<config_id>/<workload>.labels
    """

    def __init__(self, validator=None):
        self.validator = validator
        self.logger = logging.getLogger(__name__)

    def load(self, dataset_dir: str, config_ids: Optional[List[str]] = None) -> List[TrainingSample]:
        """
        Load every sample of the dataset, or only those of config_ids.

        Args:
            dataset_dir: Dataset root
            config_ids: Optional subset of configuration directories

        Returns:
            Samples ordered by configuration directory then workload name
        """
        root = Path(dataset_dir)
        if not root.is_dir():
            raise FileNotFoundError(f"Dataset directory not found: {dataset_dir}")
        config_dirs = sorted((path for path in root.iterdir() if (path / DESIGN_FILE).is_file()),
                             key=lambda path: _natural_key(path.name))
        if config_ids is not None:
            wanted = set(config_ids)
            config_dirs = [path for path in config_dirs if path.name in wanted]
            absent = wanted - {path.name for path in config_dirs}
            if absent:
                raise FileNotFoundError(f"Configurations not in {dataset_dir}: {', '.join(sorted(absent))}")

        samples = []
        for config_dir in config_dirs:
            samples.extend(self._load_config_dir(config_dir))
        if not samples:
            raise ValueError(f"No samples found in {dataset_dir}")
        self.logger.info(f"Loaded {len(samples)} samples from {len(config_dirs)} configurations in {dataset_dir}")
        if self.validator is not None:
            self.validator.validate_or_raise(samples)
        return samples

    def _load_config_dir(self, config_dir: Path) -> List[TrainingSample]:
        design_path = config_dir / DESIGN_FILE
        hw, arch_values, clock = parse_design_config(read_text(design_path), str(design_path))
        samples = []
        for events_path in sorted(config_dir.glob(f"*{EVENTS_SUFFIX}")):
            workload = events_path.name[:-len(EVENTS_SUFFIX)]
            labels_path = config_dir / f"{workload}{LABELS_SUFFIX}"
            if not labels_path.is_file():
                self.logger.warning(f"No labels for {events_path}, skipping")
                continue
            events = parse_event_trace(read_text(events_path), str(events_path))
            if events.clock_frequency != clock:
                self.logger.warning(f"{events_path}: clock {events.clock_frequency} Hz differs from "
                                    f"design clock {clock} Hz; using the trace clock")
            labels, total = parse_labels(read_text(labels_path), str(labels_path))
            samples.append(TrainingSample(config_id=config_dir.name, workload=workload, hw=hw,
                                          arch_params=dict(arch_values), events=events,
                                          component_labels=labels, total_label=total))
        return samples


def _natural_key(name: str) -> Tuple[str, int, str]:
    prefix = name.rstrip("0123456789")
    digits = name[len(prefix):]
    return (prefix, int(digits) if digits else -1, name)


def load_tech_characterization(path: str) -> TechCharacterization:
    return parse_tech_characterization(read_text(Path(path)), str(path))


def load_design_config(path: str, fill_defaults: bool = True) -> Tuple[HardwareConfig, Dict[str, Any], float]:
    return parse_design_config(read_text(Path(path)), str(path), fill_defaults)


def load_event_trace(path: str) -> EventCounts:
    return parse_event_trace(read_text(Path(path)), str(path))
