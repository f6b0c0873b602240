"""
The bundled table of 25 core configurations (B1-B15 and X1-X10), ordered
from small to large within each family.
"""

import hashlib
from dataclasses import fields
from enum import Enum
from typing import Dict, List, Tuple

from data.models import HardwareConfig

# Configuration-table key -> HardwareConfig field
HARDWARE_KEYS: Dict[str, str] = {
    "FetchWidth": "fetch_width",
    "DecodeWidth": "decode_width",
    "FetchBufferEntry": "fetch_buffer_entry",
    "RobEntry": "rob_entry",
    "IntPhyRegister": "int_phy_register",
    "FpPhyRegister": "fp_phy_register",
    "LDQ/STQEntry": "ldq_stq_entry",
    "BranchCount": "branch_count",
    "Mem/FpIssueWidth": "mem_fp_issue_width",
    "IntIssueWidth": "int_issue_width",
    "DCache/ICacheWay": "dcache_icache_way",
    "DTLBEntry": "dtlb_entry",
    "MSHREntry": "mshr_entry",
    "ICacheFetchBytes": "icache_fetch_bytes",
}


class Family(Enum):
    BOOM = "BOOM"
    XIANGSHAN = "XiangShan"

    @classmethod
    def parse(cls, label: str) -> "Family":
        for family in cls:
            if family.value.lower() == str(label).strip().lower():
                return family
        raise ValueError(f"Unknown configuration family: {label}")

    @property
    def prefix(self) -> str:
        return "B" if self == Family.BOOM else "X"


_BOOM_COLUMNS = {
    "FetchWidth":       (4, 4, 4, 4, 4, 8, 8, 8, 8, 8, 8, 8, 8, 8, 8),
    "DecodeWidth":      (1, 1, 1, 2, 2, 2, 3, 3, 3, 4, 4, 4, 5, 5, 5),
    "FetchBufferEntry": (5, 8, 16, 8, 16, 24, 18, 24, 30, 24, 32, 40, 30, 35, 40),
    "RobEntry":         (16, 32, 48, 64, 64, 80, 81, 96, 114, 112, 128, 136, 125, 130, 140),
    "IntPhyRegister":   (36, 53, 68, 64, 80, 88, 88, 110, 112, 108, 128, 136, 108, 128, 140),
    "FpPhyRegister":    (36, 48, 56, 56, 64, 72, 88, 96, 112, 108, 128, 136, 108, 128, 140),
    "LDQ/STQEntry":     (4, 8, 16, 12, 16, 20, 16, 24, 32, 24, 32, 36, 24, 32, 36),
    "BranchCount":      (6, 8, 10, 10, 12, 14, 14, 16, 16, 18, 20, 20, 18, 20, 20),
    "Mem/FpIssueWidth": (1, 1, 1, 1, 1, 1, 1, 1, 2, 1, 2, 2, 2, 2, 2),
    "IntIssueWidth":    (1, 1, 1, 1, 2, 2, 2, 3, 3, 4, 4, 4, 5, 5, 5),
    "DCache/ICacheWay": (2, 4, 8, 4, 4, 8, 8, 8, 8, 8, 8, 8, 8, 8, 8),
    "DTLBEntry":        (8, 8, 16, 8, 8, 16, 16, 16, 32, 32, 32, 32, 32, 32, 32),
    "MSHREntry":        (2, 2, 4, 2, 2, 4, 4, 4, 4, 4, 4, 8, 8, 8, 8),
    "ICacheFetchBytes": (2, 2, 2, 2, 2, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4),
}

_XIANGSHAN_COLUMNS = {
    "FetchWidth":       (4, 4, 4, 4, 4, 8, 8, 8, 8, 8),
    "DecodeWidth":      (2, 2, 2, 3, 3, 3, 4, 4, 4, 5),
    "FetchBufferEntry": (8, 16, 24, 16, 24, 24, 24, 32, 32, 24),
    "RobEntry":         (16, 32, 48, 64, 64, 80, 81, 96, 114, 112),
    "IntPhyRegister":   (36, 53, 68, 64, 80, 88, 88, 110, 112, 108),
    "FpPhyRegister":    (36, 53, 68, 64, 80, 88, 88, 110, 112, 108),
    "LDQ/STQEntry":     (16, 20, 24, 20, 24, 28, 24, 32, 40, 32),
    "BranchCount":      (7, 7, 7, 7, 7, 7, 7, 7, 7, 7),
    "Mem/FpIssueWidth": (2, 2, 2, 2, 2, 2, 2, 2, 2, 2),
    "IntIssueWidth":    (2, 2, 2, 2, 4, 4, 4, 6, 6, 6),
    "DCache/ICacheWay": (4, 4, 8, 4, 4, 8, 8, 8, 8, 8),
    "DTLBEntry":        (8, 8, 16, 8, 8, 16, 16, 16, 32, 32),
    "MSHREntry":        (2, 2, 4, 2, 2, 4, 4, 4, 4, 4),
    "ICacheFetchBytes": (2, 2, 2, 2, 2, 2, 2, 2, 2, 2),
}


def _build_family(family: Family, columns: Dict[str, Tuple[int, ...]]) -> Tuple[Tuple[str, HardwareConfig], ...]:
    count = len(next(iter(columns.values())))
    table = []
    for index in range(count):
        values = {HARDWARE_KEYS[key]: column[index] for key, column in columns.items()}
        table.append((f"{family.prefix}{index + 1}", HardwareConfig(**values)))
    return tuple(table)


_BUNDLED: Tuple[Tuple[str, HardwareConfig], ...] = (
    _build_family(Family.BOOM, _BOOM_COLUMNS) + _build_family(Family.XIANGSHAN, _XIANGSHAN_COLUMNS)
)


def bundled_config_table() -> List[Tuple[str, HardwareConfig]]:
    """All 25 (config_id, HardwareConfig) pairs: B1..B15 then X1..X10."""
    return list(_BUNDLED)


def family_configs(family: Family) -> List[Tuple[str, HardwareConfig]]:
    """Configurations of one family in scale order."""
    family = Family.parse(family.value if isinstance(family, Family) else family)
    return [(config_id, hw) for config_id, hw in _BUNDLED if config_id.startswith(family.prefix)]


def config_by_id(config_id: str) -> HardwareConfig:
    for known_id, hw in _BUNDLED:
        if known_id == config_id:
            return hw
    raise ValueError(f"Unknown configuration id: {config_id}")


def family_of(config_id: str) -> Family:
    for family in Family:
        if config_id.startswith(family.prefix):
            return family
    raise ValueError(f"Configuration id {config_id} belongs to no known family")


def canonical_table_text() -> str:
    """One line per configuration: id followed by the 14 values in field order."""
    names = [item.name for item in fields(HardwareConfig)]
    lines = []
    for config_id, hw in _BUNDLED:
        lines.append(",".join([config_id] + [str(getattr(hw, name)) for name in names]))
    return "\n".join(lines) + "\n"


def table_checksum() -> str:
    """SHA-256 of the canonical table text."""
    return hashlib.sha256(canonical_table_text().encode("utf-8")).hexdigest()
