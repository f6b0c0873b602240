"""
Step one of the model: hardware configuration to array geometries.

Implementation and architecture parameters that change circuit
instantiation are injected here. With params=None the base model is built
and no injection statement runs.
"""

import math
from typing import List, Optional, Tuple

from config.parameter_registry import DUPLICATED_ARRAY, ParameterSet
from data.models import ArrayGeometry, ComponentId, HardwareConfig

PHYSICAL_ADDRESS_BITS = 32
LINE_BYTES = 64
ICACHE_SETS = 64
DCACHE_SETS = 64
DATA_WORD_BITS = 64
SCALABILITY_BASE_FETCH_WIDTH = 4
MAX_GEOMETRY_DIMENSION = 2 ** 31

BP_GLOBAL_ROWS = 2048
BP_LOCAL_ROWS = 1024
BP_BTB_ROWS = 512
ARCH_REGISTERS = 64


class GeometryOverflowError(ValueError):
    """Raised when parameters blow an array up beyond any plausible size."""


def tag_bits(sets: int) -> int:
    """Tag width of a physically tagged cache with LINE_BYTES lines."""
    return PHYSICAL_ADDRESS_BITS - int(math.log2(sets)) - int(math.log2(LINE_BYTES))


def _index_bits(entries: float) -> int:
    return max(1, math.ceil(math.log2(entries)))


def _fetch_scale(hw: HardwareConfig) -> float:
    return hw.fetch_width / SCALABILITY_BASE_FETCH_WIDTH


def _bp_arrays(hw: HardwareConfig, params: Optional[ParameterSet]) -> List[Tuple[str, ArrayGeometry]]:
    global_rows = BP_GLOBAL_ROWS
    local_rows = BP_LOCAL_ROWS
    btb_rows = BP_BTB_ROWS
    if params is not None:
        global_rows = global_rows * params["Global Info Factor"]
        local_rows = local_rows * params["Local Info Factor"]
        if params["BP Scalability"]:
            scale = _fetch_scale(hw)
            global_rows = global_rows * scale
            local_rows = local_rows * scale
            btb_rows = btb_rows * scale
    return [
        ("global_table", ArrayGeometry(rows=global_rows, width=2)),
        ("chooser", ArrayGeometry(rows=global_rows, width=2)),
        ("local_table", ArrayGeometry(rows=local_rows, width=12)),
        ("btb", ArrayGeometry(rows=btb_rows, width=40)),
    ]


def _icache_arrays(hw: HardwareConfig, params: Optional[ParameterSet]) -> List[Tuple[str, ArrayGeometry]]:
    ways = hw.dcache_icache_way
    tag_width = tag_bits(ICACHE_SETS)
    data_width = 32 * hw.icache_fetch_bytes
    data_rows = ICACHE_SETS * LINE_BYTES * 8 / data_width
    if params is not None:
        tag_width = tag_width + params["ICache MetaData Bit"]
        if params["ICache Scalability"]:
            data_width = data_width * _fetch_scale(hw)
    return [
        ("tag", ArrayGeometry(rows=ICACHE_SETS, width=tag_width, instances=ways)),
        ("data", ArrayGeometry(rows=data_rows, width=data_width, instances=ways)),
    ]


def _dcache_arrays(hw: HardwareConfig, params: Optional[ParameterSet]) -> List[Tuple[str, ArrayGeometry]]:
    ways = hw.dcache_icache_way
    tag_width = tag_bits(DCACHE_SETS)
    data_rows = DCACHE_SETS * LINE_BYTES * 8 // DATA_WORD_BITS
    banks, duplicates = hw.mem_fp_issue_width, 1
    if params is not None:
        tag_width = tag_width + params["DCache MetaData Bit"]
        if params["DCache Multi-Port Design"] == DUPLICATED_ARRAY:
            banks, duplicates = 1, hw.mem_fp_issue_width
    return [
        ("tag", ArrayGeometry(rows=DCACHE_SETS, width=tag_width, instances=ways)),
        ("data", ArrayGeometry(rows=data_rows, width=DATA_WORD_BITS, read_ports=hw.mem_fp_issue_width,
                               banks=banks, duplicates=duplicates, instances=ways)),
        ("dtlb", ArrayGeometry(rows=hw.dtlb_entry, width=64)),
        ("mshr", ArrayGeometry(rows=hw.mshr_entry, width=96)),
    ]


def _ifu_arrays(hw: HardwareConfig, params: Optional[ParameterSet]) -> List[Tuple[str, ArrayGeometry]]:
    return [("fetch_buffer", ArrayGeometry(rows=hw.fetch_buffer_entry, width=40))]


def _rnu_arrays(hw: HardwareConfig, params: Optional[ParameterSet]) -> List[Tuple[str, ArrayGeometry]]:
    tag_width = _index_bits(max(hw.int_phy_register, hw.fp_phy_register))
    return [
        ("map_table", ArrayGeometry(rows=ARCH_REGISTERS, width=tag_width, read_ports=2 * hw.decode_width,
                                    write_ports=hw.decode_width)),
        ("free_list", ArrayGeometry(rows=hw.int_phy_register, width=_index_bits(hw.int_phy_register))),
        ("branch_checkpoints", ArrayGeometry(rows=hw.branch_count, width=ARCH_REGISTERS * tag_width // 2)),
    ]


def _rob_arrays(hw: HardwareConfig, params: Optional[ParameterSet]) -> List[Tuple[str, ArrayGeometry]]:
    width = 48
    if params is not None:
        width = width + params["ROB Entry Width"]
    return [("rob", ArrayGeometry(rows=hw.rob_entry, width=width, read_ports=hw.decode_width,
                                  write_ports=hw.decode_width))]


def _isu_arrays(hw: HardwareConfig, params: Optional[ParameterSet]) -> List[Tuple[str, ArrayGeometry]]:
    entries = 8 * (hw.int_issue_width + hw.mem_fp_issue_width)
    width = 64
    if params is not None:
        width = width + params["Inst. Window Width"]
    return [
        ("issue_window", ArrayGeometry(rows=entries, width=width)),
        ("wakeup_cam", ArrayGeometry(rows=entries, width=2 * _index_bits(hw.int_phy_register))),
    ]


def _regfile_arrays(hw: HardwareConfig, params: Optional[ParameterSet]) -> List[Tuple[str, ArrayGeometry]]:
    width = DATA_WORD_BITS
    if params is not None:
        width = width * params["Physical Regfile Width"]
    return [
        ("int_regfile", ArrayGeometry(rows=hw.int_phy_register, width=width,
                                      read_ports=2 * hw.int_issue_width, write_ports=hw.int_issue_width)),
        ("fp_regfile", ArrayGeometry(rows=hw.fp_phy_register, width=width,
                                     read_ports=2 * hw.mem_fp_issue_width, write_ports=hw.mem_fp_issue_width)),
    ]


def _lsu_arrays(hw: HardwareConfig, params: Optional[ParameterSet]) -> List[Tuple[str, ArrayGeometry]]:
    return [
        ("load_queue", ArrayGeometry(rows=hw.ldq_stq_entry, width=80)),
        ("store_queue", ArrayGeometry(rows=hw.ldq_stq_entry, width=144)),
    ]


def _no_arrays(hw: HardwareConfig, params: Optional[ParameterSet]) -> List[Tuple[str, ArrayGeometry]]:
    return []


_BUILDERS = {
    ComponentId.BP: _bp_arrays,
    ComponentId.IFU: _ifu_arrays,
    ComponentId.ICACHE: _icache_arrays,
    ComponentId.RNU: _rnu_arrays,
    ComponentId.ROB: _rob_arrays,
    ComponentId.ISU: _isu_arrays,
    ComponentId.REGFILE: _regfile_arrays,
    ComponentId.FUPOOL: _no_arrays,
    ComponentId.LSU: _lsu_arrays,
    ComponentId.DCACHE: _dcache_arrays,
    ComponentId.OTHER_LOGIC: _no_arrays,
}


def instantiate_geometries(component_id: ComponentId, hw: HardwareConfig,
                           params: Optional[ParameterSet] = None) -> List[Tuple[str, ArrayGeometry]]:
    """
    Arrays backing one component, with geometry-affecting parameters applied.

    Args:
        component_id: Component slot
        hw: Hardware configuration
        params: Validated parameter set, or None for the base model

    Returns:
        List of (structure_name, ArrayGeometry)

    Raises:
        ValueError: unknown component id
        GeometryOverflowError: rows or width beyond 2^31
    """
    try:
        builder = _BUILDERS[ComponentId(component_id)]
    except ValueError:
        raise ValueError(f"Unknown component id: {component_id!r}") from None
    arrays = builder(hw, params)
    for name, geom in arrays:
        if geom.rows > MAX_GEOMETRY_DIMENSION or geom.width > MAX_GEOMETRY_DIMENSION:
            raise GeometryOverflowError(
                f"{ComponentId(component_id).value}.{name} geometry {geom.rows}x{geom.width} "
                f"exceeds 2^31; check the injected parameters"
            )
    return arrays
