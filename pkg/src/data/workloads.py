"""
Default workload profiles standing in for the riscv-tests benchmarks.
"""

from typing import List

from data.models import WorkloadProfile

DEFAULT_WORKLOAD_PROFILES = (
    WorkloadProfile(name="dhrystone", instructions=2000000, ilp=2.2, branch_pki=160.0, branch_miss_pki=4.0,
                    icache_miss_pki=1.5, load_pki=250.0, store_pki=140.0, dcache_miss_pki=1.0,
                    int_alu_pki=420.0, mul_pki=12.0, fpu_pki=0.0),
    WorkloadProfile(name="median", instructions=1200000, ilp=1.8, branch_pki=190.0, branch_miss_pki=22.0,
                    icache_miss_pki=0.4, load_pki=230.0, store_pki=60.0, dcache_miss_pki=6.0,
                    int_alu_pki=460.0, mul_pki=0.0, fpu_pki=0.0),
    WorkloadProfile(name="multiply", instructions=1500000, ilp=2.6, branch_pki=120.0, branch_miss_pki=9.0,
                    icache_miss_pki=0.2, load_pki=90.0, store_pki=40.0, dcache_miss_pki=0.5,
                    int_alu_pki=520.0, mul_pki=140.0, fpu_pki=0.0),
    WorkloadProfile(name="qsort", instructions=2500000, ilp=1.6, branch_pki=170.0, branch_miss_pki=18.0,
                    icache_miss_pki=0.6, load_pki=260.0, store_pki=120.0, dcache_miss_pki=9.0,
                    int_alu_pki=380.0, mul_pki=4.0, fpu_pki=0.0),
    WorkloadProfile(name="rsort", instructions=2200000, ilp=2.4, branch_pki=90.0, branch_miss_pki=3.0,
                    icache_miss_pki=0.3, load_pki=280.0, store_pki=200.0, dcache_miss_pki=14.0,
                    int_alu_pki=360.0, mul_pki=2.0, fpu_pki=0.0),
    WorkloadProfile(name="towers", instructions=1000000, ilp=2.0, branch_pki=140.0, branch_miss_pki=6.0,
                    icache_miss_pki=0.8, load_pki=300.0, store_pki=210.0, dcache_miss_pki=2.0,
                    int_alu_pki=330.0, mul_pki=1.0, fpu_pki=0.0),
    WorkloadProfile(name="spmv", instructions=3000000, ilp=1.4, branch_pki=80.0, branch_miss_pki=5.0,
                    icache_miss_pki=0.2, load_pki=330.0, store_pki=30.0, dcache_miss_pki=25.0,
                    int_alu_pki=250.0, mul_pki=20.0, fpu_pki=160.0),
    WorkloadProfile(name="vvadd", instructions=1800000, ilp=3.0, branch_pki=60.0, branch_miss_pki=1.0,
                    icache_miss_pki=0.1, load_pki=310.0, store_pki=150.0, dcache_miss_pki=18.0,
                    int_alu_pki=240.0, mul_pki=0.0, fpu_pki=150.0),
)


def default_workload_profiles() -> List[WorkloadProfile]:
    return list(DEFAULT_WORKLOAD_PROFILES)


def profile_by_name(name: str) -> WorkloadProfile:
    for profile in DEFAULT_WORKLOAD_PROFILES:
        if profile.name == name:
            return profile
    raise ValueError(f"Unknown workload profile: {name}")
