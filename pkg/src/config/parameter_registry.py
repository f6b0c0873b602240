"""
Registry of the 25 injected power-model parameters.

Holds identity, level, type, range and default of every parameter, plus
clamping, level resets and the parameter file format.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Mapping, Optional, Tuple

from data.models import ComponentId

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1
GLOBAL_COMPONENT = "Global"
TECH_FACTOR_FLOOR = 1e-6


class ParameterLevel(Enum):
    """Abstraction level a parameter belongs to."""
    ARCHITECTURE = "Architecture"
    IMPLEMENTATION = "Implementation"
    TECHNOLOGY = "Technology"


class ValueType(Enum):
    ENUM = "Enum"
    BOOL = "Bool"
    INT = "Int"
    FLOAT = "Float"


class Provenance(Enum):
    """Where the values of a level came from."""
    USER = "user-supplied"
    CALIBRATED = "calibrated"
    DEFAULT = "default"


class ParameterFileError(ValueError):
    """Raised when a parameter file is malformed or holds invalid values."""


@dataclass(frozen=True)
class ParameterSpec:
    """Definition of one injected parameter."""
    name: str
    level: ParameterLevel
    component: str
    value_type: ValueType
    default: Any
    low: Optional[float] = None
    high: Optional[float] = None
    choices: Tuple[str, ...] = ()
    low_exclusive: bool = False
    linear: bool = False
    description: str = ""

    @property
    def is_numeric(self) -> bool:
        return self.value_type in (ValueType.INT, ValueType.FLOAT)

    @property
    def range_width(self) -> float:
        if not self.is_numeric:
            raise ValueError(f"{self.name} has no numeric range")
        return self.high - self.low

    @property
    def component_id(self) -> Optional[ComponentId]:
        if self.component == GLOBAL_COMPONENT:
            return None
        return ComponentId.parse(self.component)

    def describe_range(self) -> str:
        if self.value_type == ValueType.BOOL:
            return "Yes/No"
        if self.value_type == ValueType.ENUM:
            return "/".join(self.choices)
        text = f"{_format_bound(self.low)}-{_format_bound(self.high)}"
        return f"({text}]" if self.low_exclusive else text

    def contains(self, value: Any) -> bool:
        """True when value is a valid, in-range value for this parameter."""
        if self.value_type == ValueType.BOOL:
            return isinstance(value, bool)
        if self.value_type == ValueType.ENUM:
            return value in self.choices
        if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
            return False
        lower_ok = value > self.low if self.low_exclusive else value >= self.low
        return lower_ok and value <= self.high

    def project(self, value: Any) -> Any:
        """Project a value onto the closed range; categorical values are only validated."""
        if not self.is_numeric:
            if not self.contains(value):
                raise ValueError(f"Invalid value {value!r} for {self.name} (expected {self.describe_range()})")
            return value
        if isinstance(value, bool) or not isinstance(value, (int, float)) or math.isnan(value):
            raise ValueError(f"Invalid value {value!r} for {self.name}")
        lower = max(self.low, TECH_FACTOR_FLOOR) if self.low_exclusive else self.low
        if value < lower:
            return _bound_like(value, lower)
        if value > self.high:
            return _bound_like(value, self.high)
        return value


def _bound_like(value: Any, bound: float) -> Any:
    if isinstance(value, int) and float(bound).is_integer():
        return int(bound)
    return float(bound)


def _format_bound(value: float) -> str:
    return str(int(value)) if float(value).is_integer() else repr(value)


def _impl(name: str, component: ComponentId, value_type: ValueType, low: float, high: float,
          default: Any, linear: bool, description: str) -> ParameterSpec:
    return ParameterSpec(name=name, level=ParameterLevel.IMPLEMENTATION, component=component.value,
                         value_type=value_type, default=default, low=low, high=high,
                         linear=linear, description=description)


LOW_LATENCY = "Low Latency"
LOW_POWER = "Low Power"
MULTI_BANKING = "Multi-Banking"
DUPLICATED_ARRAY = "Duplicated Array"

PARAMETER_SPECS: Tuple[ParameterSpec, ...] = (
    # Architecture level
    ParameterSpec("ICache Table Access Type", ParameterLevel.ARCHITECTURE, ComponentId.ICACHE.value,
                  ValueType.ENUM, LOW_POWER, choices=(LOW_LATENCY, LOW_POWER),
                  description="Read all way data arrays in parallel (Low Latency) or one after the tag check"),
    ParameterSpec("BP Table Access Type", ParameterLevel.ARCHITECTURE, ComponentId.BP.value,
                  ValueType.ENUM, LOW_POWER, choices=(LOW_LATENCY, LOW_POWER),
                  description="Read global and local predictor tables in parallel or selectively"),
    ParameterSpec("ICache Scalability", ParameterLevel.ARCHITECTURE, ComponentId.ICACHE.value,
                  ValueType.BOOL, False, description="ICache data width scales with FetchWidth"),
    ParameterSpec("BP Scalability", ParameterLevel.ARCHITECTURE, ComponentId.BP.value,
                  ValueType.BOOL, False, description="Predictor table sizes scale with FetchWidth"),
    ParameterSpec("DCache Multi-Port Design", ParameterLevel.ARCHITECTURE, ComponentId.DCACHE.value,
                  ValueType.ENUM, MULTI_BANKING, choices=(MULTI_BANKING, DUPLICATED_ARRAY),
                  description="How the data array provides one port per memory issue slot"),
    # Implementation level
    _impl("Global Info Factor", ComponentId.BP, ValueType.INT, 1, 64, 1, False,
          "Scale of the global table and chooser array size"),
    _impl("Local Info Factor", ComponentId.BP, ValueType.INT, 1, 64, 1, False,
          "Scale of the local table array size"),
    _impl("ICache MetaData Bit", ComponentId.ICACHE, ValueType.INT, 0, 64, 0, False,
          "Additional bits beyond the tag"),
    _impl("DCache MetaData Bit", ComponentId.DCACHE, ValueType.INT, 0, 64, 0, False,
          "Additional bits beyond the tag"),
    _impl("IFU Logic Factor", ComponentId.IFU, ValueType.FLOAT, 0, 2, 1.0, True,
          "Scale of general logic in the fetch unit"),
    _impl("RNU Logic Factor", ComponentId.RNU, ValueType.FLOAT, 0, 2, 1.0, True,
          "Scale of general logic in the rename unit"),
    _impl("LSU Logic Factor", ComponentId.LSU, ValueType.FLOAT, 0, 2, 1.0, True,
          "Scale of general logic in the load-store unit"),
    _impl("Other Logic Factor", ComponentId.OTHER_LOGIC, ValueType.FLOAT, 0, 2, 1.0, True,
          "Scale of the remaining pipeline logic"),
    _impl("Physical Regfile Width", ComponentId.REGFILE, ValueType.INT, 1, 16, 1, False,
          "Ratio between real and architectural register width"),
    _impl("Inst. Window Width", ComponentId.ISU, ValueType.INT, 0, 64, 0, False,
          "Status bits added to each issue window entry"),
    _impl("ROB Entry Width", ComponentId.ROB, ValueType.INT, 0, 64, 0, False,
          "Status bits added to each reorder buffer entry"),
    _impl("FPU Power Scale", ComponentId.FUPOOL, ValueType.FLOAT, 0, 16, 1.0, True,
          "Bias between target and default FPU design"),
    _impl("ALU Power Scale", ComponentId.FUPOOL, ValueType.FLOAT, 0, 16, 1.0, True,
          "Bias between target and default ALU design"),
    _impl("MUL Power Scale", ComponentId.FUPOOL, ValueType.FLOAT, 0, 16, 1.0, True,
          "Bias between target and default multiplier design"),
    _impl("ICache Access Coefficient", ComponentId.ICACHE, ValueType.FLOAT, 0, 32, 1.0, True,
          "Linear scale of ICache hits and misses"),
    _impl("ICache Access Bias", ComponentId.ICACHE, ValueType.FLOAT, 0, 32, 0.0, True,
          "Offset added to ICache hits and misses"),
    _impl("DCache Access Coefficient", ComponentId.DCACHE, ValueType.FLOAT, 0, 32, 1.0, True,
          "Linear scale of DCache hits and misses"),
    _impl("DCache Access Bias", ComponentId.DCACHE, ValueType.FLOAT, 0, 32, 0.0, True,
          "Offset added to DCache hits and misses"),
    # Technology level
    ParameterSpec("Tech Logic Factor", ParameterLevel.TECHNOLOGY, GLOBAL_COMPONENT, ValueType.FLOAT, 1.0,
                  low=0, high=64, low_exclusive=True, linear=True,
                  description="Ratio between library and model DFF power"),
    ParameterSpec("Tech Array Factor", ParameterLevel.TECHNOLOGY, GLOBAL_COMPONENT, ValueType.FLOAT, 1.0,
                  low=0, high=64, low_exclusive=True, linear=True,
                  description="Ratio between library and model SRAM energy"),
)

_SPECS_BY_NAME: Dict[str, ParameterSpec] = {spec.name: spec for spec in PARAMETER_SPECS}


def get_spec(name: str) -> ParameterSpec:
    """Get a parameter spec by name."""
    try:
        return _SPECS_BY_NAME[name]
    except KeyError:
        raise ValueError(f"Unknown parameter name: {name}") from None


def specs_for(level: Optional[ParameterLevel] = None,
              component: Optional[ComponentId] = None) -> List[ParameterSpec]:
    """Specs filtered by level and/or component, in registry order."""
    selected = []
    for spec in PARAMETER_SPECS:
        if level is not None and spec.level != level:
            continue
        if component is not None and spec.component != component.value:
            continue
        selected.append(spec)
    return selected


def parameter_names(level: Optional[ParameterLevel] = None) -> List[str]:
    return [spec.name for spec in specs_for(level)]


@dataclass
class ParameterSet:
    """Values of all 25 parameters plus per-level provenance."""
    values: Dict[str, Any]
    provenance: Dict[ParameterLevel, Provenance] = field(
        default_factory=lambda: {level: Provenance.DEFAULT for level in ParameterLevel}
    )

    def __getitem__(self, name: str) -> Any:
        return self.values[name]

    def get(self, name: str, default: Any = None) -> Any:
        return self.values.get(name, default)

    def copy(self) -> "ParameterSet":
        return ParameterSet(values=dict(self.values), provenance=dict(self.provenance))

    def updated(self, values: Mapping[str, Any],
                provenance: Optional[Mapping[ParameterLevel, Provenance]] = None) -> "ParameterSet":
        """Copy with some values (and provenance tags) replaced."""
        result = self.copy()
        for name, value in values.items():
            get_spec(name)
            result.values[name] = value
        if provenance:
            result.provenance.update(provenance)
        return result

    def level_values(self, level: ParameterLevel) -> Dict[str, Any]:
        return {spec.name: self.values[spec.name] for spec in specs_for(level)}


def default_parameter_set() -> ParameterSet:
    """All 25 parameters at their defaults with default provenance."""
    return ParameterSet(values={spec.name: spec.default for spec in PARAMETER_SPECS})


def clamp(parameter_set: ParameterSet) -> ParameterSet:
    """
    Project every numeric value onto its range and validate categorical ones.

    Args:
        parameter_set: Set with possibly out-of-range values

    Returns:
        A new, in-range ParameterSet (idempotent, never moves in-range values)
    """
    unknown = sorted(set(parameter_set.values) - set(_SPECS_BY_NAME))
    if unknown:
        raise ValueError(f"Unknown parameter name: {unknown[0]}")
    missing = [spec.name for spec in PARAMETER_SPECS if spec.name not in parameter_set.values]
    if missing:
        raise ValueError(f"Missing parameter: {missing[0]}")

    values = {}
    for spec in PARAMETER_SPECS:
        raw = parameter_set.values[spec.name]
        projected = spec.project(raw)
        if projected != raw:
            logger.debug(f"Clamped {spec.name} from {raw} to {projected}")
        values[spec.name] = projected
    return ParameterSet(values=values, provenance=dict(parameter_set.provenance))


def reset_level(parameter_set: ParameterSet, level: ParameterLevel) -> ParameterSet:
    """Return a copy with every parameter of one level at its default."""
    if not isinstance(level, ParameterLevel):
        raise ValueError(f"Invalid parameter level: {level!r}")
    result = parameter_set.copy()
    for spec in specs_for(level):
        result.values[spec.name] = spec.default
    result.provenance[level] = Provenance.DEFAULT
    return result


def _format_value(spec: ParameterSpec, value: Any) -> str:
    if spec.value_type == ValueType.BOOL:
        return "Yes" if value else "No"
    if spec.value_type == ValueType.ENUM:
        return str(value)
    if spec.value_type == ValueType.INT and float(value).is_integer():
        return str(int(value))
    return repr(float(value))


def serialize_parameter_set(parameter_set: ParameterSet) -> str:
    """Render a ParameterSet in the parameter file format."""
    lines = [
        "# Injected power-model parameters",
        f"format_version = {FORMAT_VERSION}",
    ]
    for level in ParameterLevel:
        lines.append(f"provenance[{level.value}] = {parameter_set.provenance[level].value}")
    lines.append("")
    for spec in PARAMETER_SPECS:
        value = _format_value(spec, parameter_set.values[spec.name])
        lines.append(f"{spec.name} = {value} # {spec.level.value}")
    return "\n".join(lines) + "\n"


def _parse_value(spec: ParameterSpec, text: str, line_no: int) -> Any:
    if spec.value_type == ValueType.BOOL:
        if text not in ("Yes", "No"):
            raise ParameterFileError(f"line {line_no}: {spec.name} must be Yes or No, got '{text}'")
        return text == "Yes"
    if spec.value_type == ValueType.ENUM:
        if text not in spec.choices:
            raise ParameterFileError(
                f"line {line_no}: {spec.name} value '{text}' not one of {spec.describe_range()}"
            )
        return text
    try:
        if spec.value_type == ValueType.INT:
            value = int(text)
        else:
            value = float(text)
    except ValueError:
        raise ParameterFileError(
            f"line {line_no}: {spec.name} value '{text}' is not a valid {spec.value_type.value.lower()}"
        ) from None
    if not spec.contains(value):
        raise ParameterFileError(
            f"line {line_no}: {spec.name} = {text} out of range {spec.describe_range()}"
        )
    return value


def parse_parameter_file(text: str) -> ParameterSet:
    """
    Parse the parameter file format.

    Out-of-range values are rejected, not clamped.

    Raises:
        ParameterFileError: on malformed lines, unknown, duplicate or missing entries
    """
    version = None
    values: Dict[str, Any] = {}
    provenance: Dict[ParameterLevel, Provenance] = {}
    levels = {level.value: level for level in ParameterLevel}
    tags = {tag.value: tag for tag in Provenance}

    for line_no, raw_line in enumerate(text.splitlines(), start=1):
        content, _, comment = raw_line.partition("#")
        content = content.strip()
        if not content:
            continue
        if "=" not in content:
            raise ParameterFileError(f"line {line_no}: expected 'name = value', got '{raw_line.strip()}'")
        key, _, value = (part.strip() for part in content.partition("="))

        if key == "format_version":
            if value != str(FORMAT_VERSION):
                raise ParameterFileError(f"line {line_no}: unsupported format_version {value}")
            version = FORMAT_VERSION
            continue
        if key.startswith("provenance[") and key.endswith("]"):
            level_name = key[len("provenance["):-1]
            if level_name not in levels or value not in tags:
                raise ParameterFileError(f"line {line_no}: invalid provenance entry '{content}'")
            provenance[levels[level_name]] = tags[value]
            continue

        if key not in _SPECS_BY_NAME:
            raise ParameterFileError(f"line {line_no}: unknown parameter '{key}'")
        if key in values:
            raise ParameterFileError(f"line {line_no}: duplicate parameter '{key}'")
        spec = _SPECS_BY_NAME[key]
        level_note = comment.strip()
        if level_note and level_note != spec.level.value:
            raise ParameterFileError(
                f"line {line_no}: {key} is a {spec.level.value} parameter, file says {level_note}"
            )
        values[key] = _parse_value(spec, value, line_no)

    if version is None:
        raise ParameterFileError("missing format_version header")
    for spec in PARAMETER_SPECS:
        if spec.name not in values:
            raise ParameterFileError(f"missing parameter '{spec.name}'")
    for level in ParameterLevel:
        provenance.setdefault(level, Provenance.DEFAULT)
    return ParameterSet(values=values, provenance=provenance)

