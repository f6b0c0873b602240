"""
Closed-form surrogate energy model for arrays, pipeline logic and functional units.

Energies are in pJ, powers in µW unless a name says otherwise.
"""

from enum import Enum

from data.models import ArrayGeometry, TechProfile

ROWS_PER_DECODE_STAGE = 1024.0
PICO = 1e-12
MICRO = 1e-6

DEFAULT_TECH_PROFILE = TechProfile(
    node_name="surrogate-45nm",
    e_bit_read=0.05,
    e_bit_write=0.06,
    p_leak_bit=0.002,
    dff_clock_toggle_power=2.0,
    dff_leak_power=0.05,
    e_fu_alu=5.0,
    e_fu_mul=15.0,
    e_fu_fpu=25.0,
    reference_frequency_hz=1000000000.0,
)


class ArrayOp(Enum):
    READ = "read"
    WRITE = "write"


def array_op_energy(geom: ArrayGeometry, op: ArrayOp, tech: TechProfile,
                    tech_array_factor: float = 1.0) -> float:
    """
    Energy of one read or write of an array.

    E = e_bit * width * (1 + rows_per_bank / 1024) * tech_array_factor.
    A write to a duplicated array writes every copy.

    Args:
        geom: Array geometry
        op: ArrayOp.READ or ArrayOp.WRITE
        tech: Technology constants
        tech_array_factor: Technology-level array ratio (> 0)

    Returns:
        Energy in pJ
    """
    if tech_array_factor <= 0:
        raise ValueError(f"tech_array_factor must be positive, got {tech_array_factor}")
    op = ArrayOp(op)
    e_bit = tech.e_bit_read if op == ArrayOp.READ else tech.e_bit_write
    energy = e_bit * geom.width * (1.0 + geom.rows_per_bank / ROWS_PER_DECODE_STAGE) * tech_array_factor
    if op == ArrayOp.WRITE:
        energy = energy * geom.duplicates
    return energy


def array_leakage_power(geom: ArrayGeometry, tech: TechProfile, tech_array_factor: float = 1.0) -> float:
    """Leakage of an array in watts; banking partitions rows and stores no extra bits."""
    return tech.p_leak_bit * geom.stored_bits * tech_array_factor * MICRO


def dff_energy_per_cycle(tech: TechProfile) -> float:
    """Energy (pJ) one DFF spends per cycle with its clock toggling, from the reference power."""
    return tech.dff_clock_toggle_power * 1e6 / tech.reference_frequency_hz


def logic_energy_per_cycle(dff_equiv: float, activity: float, tech: TechProfile,
                           tech_logic_factor: float = 1.0, logic_factor: float = 1.0) -> float:
    """
    Energy (pJ) of a block of pipeline logic per cycle.

    E = dff_equiv * (toggle power / reference frequency) * activity
        * tech_logic_factor * logic_factor
    """
    if dff_equiv < 0 or activity < 0 or tech_logic_factor < 0 or logic_factor < 0:
        raise ValueError("logic energy arguments must be non-negative")
    if activity > 1:
        raise ValueError(f"activity must lie in [0, 1], got {activity}")
    return dff_equiv * dff_energy_per_cycle(tech) * activity * tech_logic_factor * logic_factor


def logic_leakage_power(dff_equiv: float, tech: TechProfile, tech_logic_factor: float = 1.0,
                        logic_factor: float = 1.0) -> float:
    """Leakage of a logic block in watts."""
    return dff_equiv * tech.dff_leak_power * tech_logic_factor * logic_factor * MICRO
