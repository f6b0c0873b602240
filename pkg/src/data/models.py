"""
Data models for the core power estimation system.
"""

import math
from dataclasses import dataclass, field, fields
from enum import Enum
from typing import Any, Dict, Iterator, List, Optional, Tuple, Union


class ComponentId(Enum):
    """Power-model component slots of an out-of-order core."""
    BP = "BP"
    IFU = "IFU"
    ICACHE = "ICache"
    RNU = "RNU"
    ROB = "ROB"
    ISU = "ISU"
    REGFILE = "Regfile"
    FUPOOL = "FUPool"
    LSU = "LSU"
    DCACHE = "DCache"
    OTHER_LOGIC = "OtherLogic"

    @classmethod
    def parse(cls, label: str) -> "ComponentId":
        """Look up a component by its label (case-insensitive)."""
        for component in cls:
            if component.value.lower() == str(label).strip().lower():
                return component
        raise ValueError(f"Unknown component id: {label}")


def _require_positive(owner: str, name: str, value: Any) -> None:
    if value is None or not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ValueError(f"{owner}.{name} must be numeric, got {value!r}")
    if not math.isfinite(value) or value <= 0:
        raise ValueError(f"{owner}.{name} must be strictly positive, got {value}")


@dataclass(frozen=True)
class HardwareConfig:
    """The 14 microarchitecture knobs of one core configuration."""
    fetch_width: int
    decode_width: int
    fetch_buffer_entry: int
    rob_entry: int
    int_phy_register: int
    fp_phy_register: int
    ldq_stq_entry: int
    branch_count: int
    mem_fp_issue_width: int
    int_issue_width: int
    dcache_icache_way: int
    dtlb_entry: int
    mshr_entry: int
    icache_fetch_bytes: int

    def __post_init__(self):
        for item in fields(self):
            value = getattr(self, item.name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise ValueError(f"HardwareConfig.{item.name} must be an integer, got {value!r}")
            if value <= 0:
                raise ValueError(f"HardwareConfig.{item.name} must be strictly positive, got {value}")
        if self.decode_width > self.fetch_width:
            raise ValueError(
                f"HardwareConfig.decode_width ({self.decode_width}) exceeds fetch_width ({self.fetch_width})"
            )

    def as_tuple(self) -> Tuple[int, ...]:
        return tuple(getattr(self, item.name) for item in fields(self))


EVENT_COUNTER_FIELDS: Tuple[str, ...] = (
    "bp_lookups", "bp_updates", "bp_mispredictions",
    "icache_hits", "icache_misses",
    "decoded_insts", "renamed_insts",
    "rob_reads", "rob_writes",
    "issue_window_reads", "issue_window_writes", "issue_window_wakeups",
    "int_regfile_reads", "int_regfile_writes", "fp_regfile_reads", "fp_regfile_writes",
    "int_alu_ops", "mul_ops", "fpu_ops",
    "loads", "stores",
    "dcache_hits", "dcache_misses",
)


@dataclass(frozen=True)
class EventCounts:
    """Per-workload architecture-level event counters."""
    cycles: float
    clock_frequency: float
    bp_lookups: float = 0
    bp_updates: float = 0
    bp_mispredictions: float = 0
    icache_hits: float = 0
    icache_misses: float = 0
    decoded_insts: float = 0
    renamed_insts: float = 0
    rob_reads: float = 0
    rob_writes: float = 0
    issue_window_reads: float = 0
    issue_window_writes: float = 0
    issue_window_wakeups: float = 0
    int_regfile_reads: float = 0
    int_regfile_writes: float = 0
    fp_regfile_reads: float = 0
    fp_regfile_writes: float = 0
    int_alu_ops: float = 0
    mul_ops: float = 0
    fpu_ops: float = 0
    loads: float = 0
    stores: float = 0
    dcache_hits: float = 0
    dcache_misses: float = 0

    def __post_init__(self):
        _require_positive("EventCounts", "cycles", self.cycles)
        _require_positive("EventCounts", "clock_frequency", self.clock_frequency)
        for name in EVENT_COUNTER_FIELDS:
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ValueError(f"EventCounts.{name} must be a finite number, got {value!r}")
            if value < 0:
                raise ValueError(f"EventCounts.{name} must be non-negative, got {value}")

    @property
    def execution_time(self) -> float:
        """Execution time in seconds."""
        return self.cycles / self.clock_frequency

    def counters(self) -> Dict[str, float]:
        return {name: getattr(self, name) for name in EVENT_COUNTER_FIELDS}


@dataclass(frozen=True)
class ArrayGeometry:
    """
    Geometry of one array structure.

    rows and width are real-valued so integer parameters can be relaxed
    during calibration. instances counts identical copies accessed one at
    a time (cache ways); they add leakage but not per-access energy.
    """
    rows: float
    width: float
    read_ports: int = 1
    write_ports: int = 1
    banks: int = 1
    duplicates: int = 1
    instances: int = 1

    def __post_init__(self):
        for item in fields(self):
            value = getattr(self, item.name)
            if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ValueError(f"ArrayGeometry.{item.name} must be a finite number, got {value!r}")
            if value < 1:
                raise ValueError(f"ArrayGeometry.{item.name} must be >= 1, got {value}")

    @property
    def rows_per_bank(self) -> float:
        return self.rows / self.banks

    @property
    def stored_bits(self) -> float:
        """Bits that leak: every duplicate and every instance holds a full copy of rows x width."""
        return self.rows * self.width * self.duplicates * self.instances


@dataclass(frozen=True)
class TechProfile:
    """Surrogate technology constants (pJ, µW)."""
    node_name: str
    e_bit_read: float
    e_bit_write: float
    p_leak_bit: float
    dff_clock_toggle_power: float
    dff_leak_power: float
    e_fu_alu: float
    e_fu_mul: float
    e_fu_fpu: float
    reference_frequency_hz: float = 1000000000.0

    def __post_init__(self):
        if not self.node_name:
            raise ValueError("TechProfile.node_name must not be empty")
        for item in fields(self):
            if item.name != "node_name":
                _require_positive("TechProfile", item.name, getattr(self, item.name))


@dataclass(frozen=True)
class ComponentPower:
    """Power of one component in watts."""
    component_id: ComponentId
    dynamic_power: float
    leakage_power: float

    @property
    def total_power(self) -> float:
        return self.dynamic_power + self.leakage_power


@dataclass(frozen=True)
class PowerReport:
    """Per-component and total core power."""
    components: Tuple[ComponentPower, ...]
    total_power: float
    execution_time: float

    @classmethod
    def from_components(cls, components: List[ComponentPower], execution_time: float) -> "PowerReport":
        total = sum(item.dynamic_power + item.leakage_power for item in components)
        return cls(components=tuple(components), total_power=total, execution_time=execution_time)

    def component(self, component_id: ComponentId) -> ComponentPower:
        for item in self.components:
            if item.component_id == component_id:
                return item
        raise KeyError(f"Component {component_id.value} not in report")

    def component_totals(self) -> Dict[ComponentId, float]:
        return {item.component_id: item.total_power for item in self.components}


@dataclass(frozen=True)
class StructureOps:
    """Operation counts of one structure; real-valued after event scaling."""
    read_ops: float = 0.0
    write_ops: float = 0.0
    fu_ops: float = 0.0

    def __post_init__(self):
        for name in ("read_ops", "write_ops", "fu_ops"):
            if getattr(self, name) < 0:
                raise ValueError(f"StructureOps.{name} must be non-negative")


@dataclass(frozen=True)
class OpCounts:
    """Operation counts per named structure of one component."""
    component_id: ComponentId
    structures: Dict[str, StructureOps] = field(default_factory=dict)

    def __getitem__(self, structure: str) -> StructureOps:
        return self.structures[structure]

    def __iter__(self) -> Iterator[str]:
        return iter(self.structures)

    def is_zero(self) -> bool:
        return all(
            ops.read_ops == 0 and ops.write_ops == 0 and ops.fu_ops == 0
            for ops in self.structures.values()
        )


@dataclass(frozen=True)
class TechCharacterization:
    """Measured library data used to decide the technology factors."""
    node_name: str
    sram_rows: int
    sram_width: int
    sram_read_energy: float
    sram_write_energy: float
    dff_worst_case_power: float
    dff_reference_freq_hz: Optional[float] = None

    def __post_init__(self):
        for name in ("sram_rows", "sram_width", "sram_read_energy",
                     "sram_write_energy", "dff_worst_case_power"):
            _require_positive("TechCharacterization", name, getattr(self, name))
        if self.dff_reference_freq_hz is not None:
            _require_positive("TechCharacterization", "dff_reference_freq_hz", self.dff_reference_freq_hz)

    @property
    def sram_shape(self) -> Tuple[int, int]:
        return (self.sram_rows, self.sram_width)


@dataclass
class TrainingSample:
    """One (configuration, workload) point with ground-truth power labels."""
    config_id: str
    workload: str
    hw: HardwareConfig
    arch_params: Dict[str, Any]
    events: EventCounts
    component_labels: Dict[ComponentId, float]
    total_label: float


@dataclass(frozen=True)
class CalibrationConfig:
    """Settings of the implementation-level gradient descent."""
    learning_rate: float = 0.5
    delta: Optional[Union[float, Dict[str, float]]] = None
    max_iterations: int = 500
    early_stop_patience: int = 20
    early_stop_rel_tol: float = 1e-6
    rng_seed: int = 0
    max_backtracks: int = 10
    max_workers: int = 1

    def __post_init__(self):
        _require_positive("CalibrationConfig", "learning_rate", self.learning_rate)
        _require_positive("CalibrationConfig", "early_stop_rel_tol", self.early_stop_rel_tol)
        for name in ("max_iterations", "early_stop_patience", "max_workers"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value <= 0:
                raise ValueError(f"CalibrationConfig.{name} must be a positive integer, got {value!r}")
        if isinstance(self.max_backtracks, bool) or not isinstance(self.max_backtracks, int) or self.max_backtracks < 0:
            raise ValueError("CalibrationConfig.max_backtracks must be a non-negative integer")
        if isinstance(self.rng_seed, bool) or not isinstance(self.rng_seed, int) or self.rng_seed < 0:
            raise ValueError("CalibrationConfig.rng_seed must be a non-negative integer")
        if isinstance(self.delta, dict):
            for name, value in self.delta.items():
                _require_positive("CalibrationConfig", f"delta[{name}]", value)
        elif self.delta is not None:
            _require_positive("CalibrationConfig", "delta", self.delta)


@dataclass(frozen=True)
class WorkloadProfile:
    """
    Event-rate template of a workload: rates per 1000 committed
    instructions plus an instruction count.
    """
    name: str
    instructions: int
    ilp: float
    branch_pki: float
    branch_miss_pki: float
    icache_miss_pki: float
    load_pki: float
    store_pki: float
    dcache_miss_pki: float
    int_alu_pki: float
    mul_pki: float
    fpu_pki: float

    def __post_init__(self):
        if not self.name:
            raise ValueError("WorkloadProfile.name must not be empty")
        _require_positive("WorkloadProfile", "instructions", self.instructions)
        _require_positive("WorkloadProfile", "ilp", self.ilp)
        for item in fields(self):
            if item.name.endswith("_pki"):
                value = getattr(self, item.name)
                if not isinstance(value, (int, float)) or value < 0:
                    raise ValueError(f"WorkloadProfile.{item.name} must be non-negative, got {value!r}")
        if self.branch_miss_pki > self.branch_pki:
            raise ValueError(f"WorkloadProfile {self.name}: branch_miss_pki exceeds branch_pki")
