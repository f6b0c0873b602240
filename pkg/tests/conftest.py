"""
Shared fixtures for the test suite.
"""

import sys
from pathlib import Path

import pytest

# Add src directory to path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from config.parameter_registry import ParameterLevel, Provenance, default_parameter_set  # noqa: E402
from data.config_table import Family, family_configs  # noqa: E402
from data.models import EventCounts  # noqa: E402
from data.synthetic import SyntheticDatasetSpec, generate_synthetic_dataset, synthesize_events  # noqa: E402
from data.workloads import profile_by_name  # noqa: E402
from model.energy import DEFAULT_TECH_PROFILE  # noqa: E402

PROJECT_ROOT = Path(__file__).parent.parent
CONFIG_DIR = PROJECT_ROOT / "config"

# Integer and floating-point work, with and without FP ops
SMALL_WORKLOAD_SET = ("dhrystone", "multiply", "qsort", "spmv")


@pytest.fixture
def tech():
    return DEFAULT_TECH_PROFILE


@pytest.fixture
def boom_configs():
    return family_configs(Family.BOOM)


@pytest.fixture
def b1(boom_configs):
    return boom_configs[0][1]


@pytest.fixture
def qsort_events(b1):
    return synthesize_events(b1, profile_by_name("qsort"))


@pytest.fixture
def busy_events():
    """Hand-written trace with every counter non-zero."""
    return EventCounts(
        cycles=1000000, clock_frequency=1e9,
        bp_lookups=150000, bp_updates=140000, bp_mispredictions=9000,
        icache_hits=480000, icache_misses=1200,
        decoded_insts=900000, renamed_insts=880000,
        rob_reads=870000, rob_writes=880000,
        issue_window_reads=860000, issue_window_writes=880000, issue_window_wakeups=700000,
        int_regfile_reads=1500000, int_regfile_writes=700000,
        fp_regfile_reads=120000, fp_regfile_writes=60000,
        int_alu_ops=500000, mul_ops=30000, fpu_ops=60000,
        loads=250000, stores=100000,
        dcache_hits=340000, dcache_misses=10000,
    )


def make_samples(hidden, configs, workloads=SMALL_WORKLOAD_SET, tech=DEFAULT_TECH_PROFILE,
                 noise=0.0, seed=0):
    """Oracle-labelled samples of the given configurations."""
    family = Family.BOOM if configs[0][0].startswith("B") else Family.XIANGSHAN
    spec = SyntheticDatasetSpec(family=family, hidden_params=hidden,
                                workload_profiles=[profile_by_name(name) for name in workloads],
                                noise_rel_stddev=noise, rng_seed=seed)
    return generate_synthetic_dataset(spec, tech, configs=configs)


def hidden_with(values, levels=(ParameterLevel.IMPLEMENTATION,)):
    """Default parameters with some values replaced and the given levels tagged user-supplied."""
    return default_parameter_set().updated(values, {level: Provenance.USER for level in levels})
