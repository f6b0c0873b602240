"""
Analytical core power estimator.

Combines geometry instantiation, event-to-operation transformation and the
energy model into per-component and whole-core power. Every function is a
pure function of its arguments.
"""

from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

from config.parameter_registry import ParameterSet
from data.models import ComponentId, ComponentPower, EventCounts, HardwareConfig, PowerReport, TechProfile
from model.energy import (
    PICO,
    ArrayOp,
    array_leakage_power,
    array_op_energy,
    logic_energy_per_cycle,
    logic_leakage_power,
)
from model.event_mapping import EventMapping, events_to_ops
from model.geometry import instantiate_geometries


@dataclass(frozen=True)
class LogicBlock:
    """Pipeline logic of a component, sized in DFF equivalents."""
    dff_equiv: Callable[[HardwareConfig], float]
    activity: Callable[[HardwareConfig, EventCounts], float]
    logic_factor: Optional[str]


def _clip(value: float) -> float:
    return min(max(value, 0.0), 1.0)


def _no_activity(hw: HardwareConfig, events: EventCounts) -> float:
    return 0.0


LOGIC_BLOCKS: Dict[ComponentId, LogicBlock] = {
    ComponentId.IFU: LogicBlock(
        dff_equiv=lambda hw: 64 * hw.fetch_width * 8,
        activity=lambda hw, ev: _clip(ev.decoded_insts / (ev.cycles * hw.fetch_width)),
        logic_factor="IFU Logic Factor",
    ),
    ComponentId.RNU: LogicBlock(
        dff_equiv=lambda hw: 32 * hw.decode_width * 8,
        activity=lambda hw, ev: _clip(ev.renamed_insts / (ev.cycles * hw.decode_width)),
        logic_factor="RNU Logic Factor",
    ),
    ComponentId.LSU: LogicBlock(
        dff_equiv=lambda hw: 48 * hw.ldq_stq_entry,
        activity=lambda hw, ev: _clip((ev.loads + ev.stores) / (ev.cycles * hw.mem_fp_issue_width)),
        logic_factor="LSU Logic Factor",
    ),
    ComponentId.OTHER_LOGIC: LogicBlock(
        dff_equiv=lambda hw: 256 * hw.decode_width * 8,
        activity=lambda hw, ev: _clip(ev.decoded_insts / (ev.cycles * hw.decode_width)),
        logic_factor="Other Logic Factor",
    ),
    # Pipeline latches of the execution units: leakage only, switching is in the FU energies.
    ComponentId.FUPOOL: LogicBlock(
        dff_equiv=lambda hw: 256 * (hw.int_issue_width + hw.mem_fp_issue_width),
        activity=_no_activity,
        logic_factor=None,
    ),
}

FU_ENERGY = {
    "alu": ("e_fu_alu", "ALU Power Scale"),
    "mul": ("e_fu_mul", "MUL Power Scale"),
    "fpu": ("e_fu_fpu", "FPU Power Scale"),
}


def _tech_factors(params: Optional[ParameterSet]):
    if params is None:
        return 1.0, 1.0
    return params["Tech Array Factor"], params["Tech Logic Factor"]


def estimate_component(component_id: ComponentId, hw: HardwareConfig, events: EventCounts,
                       params: Optional[ParameterSet], tech: TechProfile,
                       mapping: Optional[EventMapping] = None) -> ComponentPower:
    """
    Dynamic and leakage power of one component.

    Args:
        component_id: Component slot
        hw: Hardware configuration
        events: Workload event counters
        params: In-range parameter set, or None for the base model
        tech: Technology constants
        mapping: Event mapping tables (defaults built in)

    Returns:
        ComponentPower in watts
    """
    component_id = ComponentId(component_id)
    tech_array_factor, tech_logic_factor = _tech_factors(params)
    geometries = dict(instantiate_geometries(component_id, hw, params))
    ops = events_to_ops(component_id, events, params, hw, mapping)

    dynamic_energy = 0.0
    leakage_power = 0.0
    for geom in geometries.values():
        leakage_power += array_leakage_power(geom, tech, tech_array_factor)

    for structure in ops:
        counts = ops[structure]
        if structure in FU_ENERGY:
            energy_field, scale_name = FU_ENERGY[structure]
            energy = getattr(tech, energy_field) * tech_logic_factor
            if params is not None:
                energy = energy * params[scale_name]
            dynamic_energy += counts.fu_ops * energy
            continue
        if structure not in geometries:
            raise ValueError(f"{component_id.value}: event mapping names unknown structure '{structure}'")
        geom = geometries[structure]
        if counts.read_ops:
            dynamic_energy += counts.read_ops * array_op_energy(geom, ArrayOp.READ, tech, tech_array_factor)
        if counts.write_ops:
            dynamic_energy += counts.write_ops * array_op_energy(geom, ArrayOp.WRITE, tech, tech_array_factor)

    block = LOGIC_BLOCKS.get(component_id)
    if block is not None:
        logic_factor = 1.0
        if params is not None and block.logic_factor is not None:
            logic_factor = params[block.logic_factor]
        dff_equiv = block.dff_equiv(hw)
        per_cycle = logic_energy_per_cycle(dff_equiv, block.activity(hw, events), tech,
                                           tech_logic_factor, logic_factor)
        dynamic_energy += per_cycle * events.cycles
        leakage_power += logic_leakage_power(dff_equiv, tech, tech_logic_factor, logic_factor)

    dynamic_power = dynamic_energy * PICO / events.execution_time
    return ComponentPower(component_id=component_id, dynamic_power=dynamic_power,
                          leakage_power=leakage_power)


def estimate_core(hw: HardwareConfig, events: EventCounts, params: Optional[ParameterSet],
                  tech: TechProfile, mapping: Optional[EventMapping] = None) -> PowerReport:
    """Run estimate_component for all 11 component slots and sum them."""
    components = [
        estimate_component(component_id, hw, events, params, tech, mapping)
        for component_id in ComponentId
    ]
    return PowerReport.from_components(components, events.execution_time)


def estimate_base(hw: HardwareConfig, events: EventCounts, tech: TechProfile,
                  mapping: Optional[EventMapping] = None) -> PowerReport:
    """The uninjected base model."""
    return estimate_core(hw, events, None, tech, mapping)


def components_without_leakage(report: PowerReport) -> List[ComponentId]:
    """Components whose leakage vanished, e.g. OtherLogic under an Other Logic Factor of 0."""
    return [item.component_id for item in report.components if item.leakage_power <= 0]
