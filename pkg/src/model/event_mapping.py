"""
Step two of the model: architecture events to per-structure operations.

The mapping tables are data. Each structure lists, per operation kind,
the events that cause it and a multiplier that is either a number or one
of the symbols resolved from the configuration and parameters.
"""

import logging
from typing import Any, Dict, List, Mapping, Optional, Tuple

from config.parameter_registry import LOW_LATENCY, ParameterSet
from data.models import EVENT_COUNTER_FIELDS, ComponentId, EventCounts, HardwareConfig, OpCounts, StructureOps

logger = logging.getLogger(__name__)

OP_KINDS = ("read", "write", "fu")

# Selective predictor reads under Low Power: one of global/local per lookup.
LOW_POWER_TABLE_SHARE = 0.5

MULTIPLIER_SYMBOLS = ("ways", "read_ways", "bp_global_share", "bp_local_share")

DERIVED_EVENTS = (
    "icache_eff_hits", "icache_eff_misses", "icache_eff_accesses",
    "dcache_eff_hits", "dcache_eff_misses", "dcache_eff_accesses",
)

Term = Tuple[str, Any]
EventMapping = Dict[ComponentId, Dict[str, Dict[str, Tuple[Term, ...]]]]

DEFAULT_EVENT_MAPPING: EventMapping = {
    ComponentId.BP: {
        "global_table": {"read": (("bp_lookups", "bp_global_share"),), "write": (("bp_updates", 1),)},
        "chooser": {"read": (("bp_lookups", 1),), "write": (("bp_updates", 1),)},
        "local_table": {"read": (("bp_lookups", "bp_local_share"),), "write": (("bp_updates", 1),)},
        "btb": {"read": (("bp_lookups", 1),), "write": (("bp_mispredictions", 1),)},
    },
    ComponentId.IFU: {
        "fetch_buffer": {"read": (("decoded_insts", 1),), "write": (("decoded_insts", 1),)},
    },
    ComponentId.ICACHE: {
        "tag": {"read": (("icache_eff_accesses", "ways"),), "write": (("icache_eff_misses", 1),)},
        "data": {"read": (("icache_eff_accesses", "read_ways"),), "write": (("icache_eff_misses", 1),)},
    },
    ComponentId.RNU: {
        "map_table": {"read": (("renamed_insts", 2),), "write": (("renamed_insts", 1),)},
        "free_list": {"read": (("renamed_insts", 1),), "write": (("renamed_insts", 1),)},
        "branch_checkpoints": {"read": (("bp_mispredictions", 1),), "write": (("bp_lookups", 1),)},
    },
    ComponentId.ROB: {
        "rob": {"read": (("rob_reads", 1),), "write": (("rob_writes", 1),)},
    },
    ComponentId.ISU: {
        "issue_window": {"read": (("issue_window_reads", 1),), "write": (("issue_window_writes", 1),)},
        "wakeup_cam": {"read": (("issue_window_wakeups", 1),), "write": (("issue_window_writes", 1),)},
    },
    ComponentId.REGFILE: {
        "int_regfile": {"read": (("int_regfile_reads", 1),), "write": (("int_regfile_writes", 1),)},
        "fp_regfile": {"read": (("fp_regfile_reads", 1),), "write": (("fp_regfile_writes", 1),)},
    },
    ComponentId.FUPOOL: {
        "alu": {"fu": (("int_alu_ops", 1),)},
        "mul": {"fu": (("mul_ops", 1),)},
        "fpu": {"fu": (("fpu_ops", 1),)},
    },
    ComponentId.LSU: {
        "load_queue": {"read": (("loads", 1),), "write": (("loads", 1),)},
        "store_queue": {"read": (("stores", 1),), "write": (("stores", 1),)},
    },
    ComponentId.DCACHE: {
        "tag": {"read": (("dcache_eff_accesses", "ways"),), "write": (("dcache_eff_misses", 1),)},
        "data": {"read": (("dcache_eff_accesses", 1),), "write": (("dcache_eff_misses", 1), ("stores", 1))},
        "dtlb": {"read": (("loads", 1), ("stores", 1))},
        "mshr": {"read": (("dcache_eff_misses", 1),), "write": (("dcache_eff_misses", 1),)},
    },
    ComponentId.OTHER_LOGIC: {},
}


def normalize_event_mapping(raw: Mapping[str, Any]) -> EventMapping:
    """
    Validate a mapping loaded from YAML and convert it to the in-code form.

    Raises:
        ValueError: unknown component, operation kind, event or multiplier symbol
    """
    known_events = set(EVENT_COUNTER_FIELDS) | set(DERIVED_EVENTS)
    mapping: EventMapping = {component: {} for component in ComponentId}
    for component_label, structures in (raw or {}).items():
        component = ComponentId.parse(component_label)
        for structure, ops in (structures or {}).items():
            entry = {}
            for kind, terms in (ops or {}).items():
                if kind not in OP_KINDS:
                    raise ValueError(f"{component.value}.{structure}: unknown operation kind '{kind}'")
                normalized: List[Term] = []
                for term in terms or ():
                    if not isinstance(term, (list, tuple)) or len(term) != 2:
                        raise ValueError(f"{component.value}.{structure}.{kind}: terms must be [event, multiplier]")
                    event, multiplier = term
                    if event not in known_events:
                        raise ValueError(f"{component.value}.{structure}.{kind}: unknown event '{event}'")
                    if isinstance(multiplier, str):
                        if multiplier not in MULTIPLIER_SYMBOLS:
                            raise ValueError(
                                f"{component.value}.{structure}.{kind}: unknown multiplier '{multiplier}'"
                            )
                    elif isinstance(multiplier, bool) or not isinstance(multiplier, (int, float)) or multiplier < 0:
                        raise ValueError(f"{component.value}.{structure}.{kind}: invalid multiplier {multiplier!r}")
                    normalized.append((event, multiplier))
                entry[kind] = tuple(normalized)
            mapping[component][structure] = entry
    return mapping


def effective_counts(hits: float, misses: float, coefficient: float, bias: float) -> Tuple[float, float]:
    """Scale hits and misses with one shared (coefficient, bias) pair."""
    return coefficient * hits + bias, coefficient * misses + bias


def _cache_counts(prefix: str, hits: float, misses: float,
                  params: Optional[ParameterSet]) -> Dict[str, float]:
    if params is not None:
        label = "ICache" if prefix == "icache" else "DCache"
        hits, misses = effective_counts(hits, misses, params[f"{label} Access Coefficient"],
                                        params[f"{label} Access Bias"])
        if hits < 0 or misses < 0:
            logger.warning(
                f"{label} effective counts negative after bias (hits={hits}, misses={misses}); clamped to 0"
            )
            hits, misses = max(hits, 0.0), max(misses, 0.0)
    return {
        f"{prefix}_eff_hits": hits,
        f"{prefix}_eff_misses": misses,
        f"{prefix}_eff_accesses": hits + misses,
    }


def _event_values(component_id: ComponentId, events: EventCounts,
                  params: Optional[ParameterSet]) -> Dict[str, float]:
    values = events.counters()
    if component_id == ComponentId.ICACHE:
        values.update(_cache_counts("icache", events.icache_hits, events.icache_misses, params))
    elif component_id == ComponentId.DCACHE:
        values.update(_cache_counts("dcache", events.dcache_hits, events.dcache_misses, params))
    return values


def _symbol_values(hw: HardwareConfig, params: Optional[ParameterSet]) -> Dict[str, float]:
    icache_low_latency = params is not None and params["ICache Table Access Type"] == LOW_LATENCY
    bp_low_latency = params is not None and params["BP Table Access Type"] == LOW_LATENCY
    table_share = 1 if bp_low_latency else LOW_POWER_TABLE_SHARE
    return {
        "ways": hw.dcache_icache_way,
        "read_ways": hw.dcache_icache_way if icache_low_latency else 1,
        "bp_global_share": table_share,
        "bp_local_share": table_share,
    }


def events_to_ops(component_id: ComponentId, events: EventCounts, params: Optional[ParameterSet],
                  hw: HardwareConfig, mapping: Optional[EventMapping] = None) -> OpCounts:
    """
    Transform events of one component into per-structure operation counts.

    For the caches, hits and misses are first scaled by the access
    coefficient and bias; each effective hit becomes a read, each effective
    miss a read and a write. Low Latency reads every way's data array.

    Args:
        component_id: Component slot
        events: Event counters of the workload
        params: Parameter set, or None for the base model
        hw: Hardware configuration (way counts feed the tables)
        mapping: Event mapping tables, DEFAULT_EVENT_MAPPING when omitted

    Returns:
        OpCounts keyed by structure name
    """
    component_id = ComponentId(component_id)
    tables = (mapping or DEFAULT_EVENT_MAPPING).get(component_id, {})
    values = _event_values(component_id, events, params)
    symbols = _symbol_values(hw, params)

    structures = {}
    for structure, ops in tables.items():
        totals = {}
        for kind in OP_KINDS:
            total = 0.0
            for event, multiplier in ops.get(kind, ()):
                factor = symbols[multiplier] if isinstance(multiplier, str) else multiplier
                total += values[event] * factor
            totals[kind] = total
        structures[structure] = StructureOps(read_ops=totals["read"], write_ops=totals["write"],
                                             fu_ops=totals["fu"])
    return OpCounts(component_id=component_id, structures=structures)
