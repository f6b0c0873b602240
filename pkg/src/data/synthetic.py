"""
Synthetic ground-truth oracle.

Builds event counts from workload profiles and labels them with the model
itself under a hidden parameter set, optionally with multiplicative
Gaussian noise. Everything is a pure function of the dataset spec.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from config.parameter_registry import (
    DUPLICATED_ARRAY,
    LOW_LATENCY,
    LOW_POWER,
    MULTI_BANKING,
    ParameterLevel,
    ParameterSet,
    Provenance,
    clamp,
    default_parameter_set,
)
from data.config_table import Family, family_configs
from data.models import (
    ArrayGeometry,
    ComponentId,
    EventCounts,
    HardwareConfig,
    TechCharacterization,
    TechProfile,
    TrainingSample,
    WorkloadProfile,
)
from data.workloads import default_workload_profiles
from model.energy import DEFAULT_TECH_PROFILE, ArrayOp, array_op_energy
from model.estimator import estimate_core
from model.event_mapping import EventMapping

logger = logging.getLogger(__name__)

DEFAULT_CLOCK_HZ = 1000000000.0
MISPREDICT_PENALTY_CYCLES = 8
ICACHE_MISS_PENALTY_CYCLES = 20
DCACHE_MISS_PENALTY_CYCLES = 40
REFERENCE_SHAPE = (256, 64)


@dataclass
class SyntheticDatasetSpec:
    """What to synthesize: family, hidden parameters, workloads and noise."""
    family: Family
    hidden_params: ParameterSet
    workload_profiles: List[WorkloadProfile] = field(default_factory=default_workload_profiles)
    noise_rel_stddev: float = 0.0
    rng_seed: int = 0

    def __post_init__(self):
        self.family = Family.parse(self.family.value if isinstance(self.family, Family) else self.family)
        if self.noise_rel_stddev < 0:
            raise ValueError(f"noise_rel_stddev must be non-negative, got {self.noise_rel_stddev}")
        if clamp(self.hidden_params).values != self.hidden_params.values:
            raise ValueError("hidden_params must be in range")
        if not self.workload_profiles:
            raise ValueError("At least one workload profile is required")


def synthesize_events(hw: HardwareConfig, profile: WorkloadProfile,
                      clock_frequency: float = DEFAULT_CLOCK_HZ) -> EventCounts:
    """
    Deterministic event counts of one workload on one configuration.

    Throughput follows the smaller of decode width and workload ILP, miss
    rates fall with associativity and wrong-path fetch grows with fetch width.
    """
    kilo = profile.instructions / 1000.0
    committed = float(profile.instructions)
    branches = profile.branch_pki * kilo
    mispredictions = profile.branch_miss_pki * kilo
    loads = profile.load_pki * kilo
    stores = profile.store_pki * kilo
    int_alu = profile.int_alu_pki * kilo
    mul = profile.mul_pki * kilo
    fpu = profile.fpu_pki * kilo

    associativity = (4.0 / hw.dcache_icache_way) ** 0.5
    icache_misses = profile.icache_miss_pki * kilo * associativity
    dcache_misses = profile.dcache_miss_pki * kilo * associativity

    decoded = committed + mispredictions * hw.fetch_width * 2
    icache_accesses = decoded / hw.icache_fetch_bytes
    dcache_accesses = loads + stores

    ipc = hw.decode_width * profile.ilp / (hw.decode_width + profile.ilp)
    cycles = (committed / ipc
              + mispredictions * MISPREDICT_PENALTY_CYCLES
              + icache_misses * ICACHE_MISS_PENALTY_CYCLES
              + dcache_misses * DCACHE_MISS_PENALTY_CYCLES / hw.mshr_entry ** 0.5)

    counts = {
        "bp_lookups": branches + mispredictions,
        "bp_updates": branches,
        "bp_mispredictions": mispredictions,
        "icache_hits": max(icache_accesses - icache_misses, 0.0),
        "icache_misses": icache_misses,
        "decoded_insts": decoded,
        "renamed_insts": decoded,
        "rob_reads": committed,
        "rob_writes": decoded,
        "issue_window_reads": committed,
        "issue_window_writes": decoded,
        "issue_window_wakeups": int_alu + mul + loads + fpu,
        "int_regfile_reads": 2 * (int_alu + mul) + loads + 2 * stores + branches,
        "int_regfile_writes": int_alu + mul + loads,
        "fp_regfile_reads": 2 * fpu,
        "fp_regfile_writes": fpu,
        "int_alu_ops": int_alu,
        "mul_ops": mul,
        "fpu_ops": fpu,
        "loads": loads,
        "stores": stores,
        "dcache_hits": max(dcache_accesses - dcache_misses, 0.0),
        "dcache_misses": dcache_misses,
    }
    return EventCounts(cycles=int(round(cycles)), clock_frequency=clock_frequency,
                       **{name: int(round(value)) for name, value in counts.items()})


def generate_synthetic_dataset(spec: SyntheticDatasetSpec, tech: TechProfile = DEFAULT_TECH_PROFILE,
                               configs: Optional[Sequence[Tuple[str, HardwareConfig]]] = None,
                               mapping: Optional[EventMapping] = None,
                               clock_frequency: float = DEFAULT_CLOCK_HZ) -> List[TrainingSample]:
    """
    Label every (configuration, workload) pair with the model under hidden_params.

    Args:
        spec: Dataset definition
        tech: Technology constants of the oracle
        configs: Configurations to use, the family's bundled table when omitted
        mapping: Event mapping tables
        clock_frequency: Clock of the synthesized traces

    Returns:
        Samples in configuration-then-workload order
    """
    rng = np.random.default_rng(spec.rng_seed)
    configs = list(configs) if configs is not None else family_configs(spec.family)
    arch_values = spec.hidden_params.level_values(ParameterLevel.ARCHITECTURE)
    samples = []
    for config_id, hw in configs:
        for profile in spec.workload_profiles:
            events = synthesize_events(hw, profile, clock_frequency)
            report = estimate_core(hw, events, spec.hidden_params, tech, mapping)
            labels = {}
            for component in report.components:
                power = component.dynamic_power + component.leakage_power
                if spec.noise_rel_stddev > 0:
                    power = power * max(1.0 + spec.noise_rel_stddev * rng.standard_normal(), 1e-3)
                labels[component.component_id] = power
            total = sum(labels[component_id] for component_id in ComponentId)
            samples.append(TrainingSample(config_id=config_id, workload=profile.name, hw=hw,
                                          arch_params=dict(arch_values), events=events,
                                          component_labels=labels, total_label=total))
    logger.info(f"Synthesized {len(samples)} samples for {spec.family.value} "
                f"(noise {spec.noise_rel_stddev:.3g}, seed {spec.rng_seed})")
    return samples


def sample_hidden_parameters(seed: int, levels: Sequence[ParameterLevel] = tuple(ParameterLevel)) -> ParameterSet:
    """
    Draw an in-range, non-trivial hidden parameter set.

    Values come from plausible sub-ranges; access biases stay at 0 since
    they are offsets on counts in the millions.
    """
    rng = np.random.default_rng(seed)
    values = {}
    if ParameterLevel.ARCHITECTURE in levels:
        values.update({
            "ICache Table Access Type": str(rng.choice([LOW_LATENCY, LOW_POWER])),
            "BP Table Access Type": str(rng.choice([LOW_LATENCY, LOW_POWER])),
            "ICache Scalability": bool(rng.integers(0, 2)),
            "BP Scalability": bool(rng.integers(0, 2)),
            "DCache Multi-Port Design": str(rng.choice([MULTI_BANKING, DUPLICATED_ARRAY])),
        })
    if ParameterLevel.IMPLEMENTATION in levels:
        values.update({
            "Global Info Factor": int(rng.integers(1, 5)),
            "Local Info Factor": int(rng.integers(1, 5)),
            "ICache MetaData Bit": int(rng.integers(0, 9)),
            "DCache MetaData Bit": int(rng.integers(0, 9)),
            "Physical Regfile Width": int(rng.integers(1, 3)),
            "Inst. Window Width": int(rng.integers(0, 17)),
            "ROB Entry Width": int(rng.integers(0, 17)),
        })
        for name in ("IFU Logic Factor", "RNU Logic Factor", "LSU Logic Factor", "Other Logic Factor"):
            values[name] = float(rng.uniform(0.6, 1.6))
        for name in ("FPU Power Scale", "ALU Power Scale", "MUL Power Scale"):
            values[name] = float(rng.uniform(0.5, 3.0))
        for name in ("ICache Access Coefficient", "DCache Access Coefficient"):
            values[name] = float(rng.uniform(0.7, 1.5))
    if ParameterLevel.TECHNOLOGY in levels:
        values["Tech Array Factor"] = float(rng.uniform(0.5, 2.5))
        values["Tech Logic Factor"] = float(rng.uniform(0.5, 2.5))

    provenance = {level: Provenance.USER for level in levels}
    return clamp(default_parameter_set().updated(values, provenance))


def characterization_for_factors(tech: TechProfile, array_factor: float, logic_factor: float,
                                 node_name: str = "synthetic") -> TechCharacterization:
    """A characterization from which the model decides the given factors."""
    reference_rows, reference_width = REFERENCE_SHAPE
    reference = ArrayGeometry(rows=reference_rows, width=reference_width)
    return TechCharacterization(
        node_name=node_name,
        sram_rows=reference_rows,
        sram_width=reference_width,
        sram_read_energy=array_op_energy(reference, ArrayOp.READ, tech) * array_factor,
        sram_write_energy=array_op_energy(reference, ArrayOp.WRITE, tech) * array_factor,
        dff_worst_case_power=tech.dff_clock_toggle_power * logic_factor,
        dff_reference_freq_hz=tech.reference_frequency_hz,
    )
