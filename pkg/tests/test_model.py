"""
Tests for the analytical model: geometry, energy, event mapping and estimation.
"""

import dataclasses

import pytest

from config.parameter_registry import DUPLICATED_ARRAY, LOW_LATENCY, default_parameter_set
from data.config_table import bundled_config_table
from data.models import ArrayGeometry, ComponentId, EventCounts
from data.synthetic import synthesize_events
from data.workloads import default_workload_profiles
from model.energy import (
    ArrayOp,
    array_leakage_power,
    array_op_energy,
    logic_energy_per_cycle,
)
from model.estimator import components_without_leakage, estimate_base, estimate_component, estimate_core
from model.event_mapping import effective_counts, events_to_ops, normalize_event_mapping
from model.geometry import GeometryOverflowError, instantiate_geometries

from conftest import hidden_with


def geometry_of(component_id, hw, params, name):
    return dict(instantiate_geometries(component_id, hw, params))[name]


class TestGeometry:
    def test_icache_tag_width_includes_metadata(self, boom_configs):
        hw = boom_configs[1][1]
        assert hw.dcache_icache_way == 4
        tag = geometry_of(ComponentId.ICACHE, hw, hidden_with({"ICache MetaData Bit": 4}), "tag")
        assert tag.width == 24
        assert tag.instances == 4

    def test_default_bp_matches_base(self, b1):
        assert instantiate_geometries(ComponentId.BP, b1, default_parameter_set()) == \
            instantiate_geometries(ComponentId.BP, b1, None)

    def test_dcache_duplicated_array(self, boom_configs):
        hw = boom_configs[8][1]
        assert hw.mem_fp_issue_width == 2
        params = hidden_with({"DCache Multi-Port Design": DUPLICATED_ARRAY})
        data = geometry_of(ComponentId.DCACHE, hw, params, "data")
        assert data.duplicates == 2
        assert data.banks == 1

    def test_dcache_multi_banking(self, boom_configs):
        hw = boom_configs[8][1]
        data = geometry_of(ComponentId.DCACHE, hw, default_parameter_set(), "data")
        assert data.banks == 2
        assert data.duplicates == 1

    def test_info_factors_scale_bp_rows(self, b1):
        base = dict(instantiate_geometries(ComponentId.BP, b1, None))
        scaled = dict(instantiate_geometries(ComponentId.BP, b1,
                                             hidden_with({"Global Info Factor": 3, "Local Info Factor": 2})))
        assert scaled["global_table"].rows == 3 * base["global_table"].rows
        assert scaled["chooser"].rows == 3 * base["chooser"].rows
        assert scaled["local_table"].rows == 2 * base["local_table"].rows
        assert scaled["btb"].rows == base["btb"].rows

    def test_regfile_width_ratio(self, b1):
        params = hidden_with({"Physical Regfile Width": 2})
        assert geometry_of(ComponentId.REGFILE, b1, params, "int_regfile").width == 128

    def test_status_bits_extend_entries(self, b1):
        params = hidden_with({"ROB Entry Width": 5, "Inst. Window Width": 3})
        assert geometry_of(ComponentId.ROB, b1, params, "rob").width == 48 + 5
        assert geometry_of(ComponentId.ISU, b1, params, "issue_window").width == 64 + 3

    def test_scalability_follows_fetch_width(self, boom_configs):
        hw = boom_configs[5][1]
        assert hw.fetch_width == 8
        params = hidden_with({"ICache Scalability": True, "BP Scalability": True})
        base_data = geometry_of(ComponentId.ICACHE, hw, None, "data")
        assert geometry_of(ComponentId.ICACHE, hw, params, "data").width == 2 * base_data.width
        assert geometry_of(ComponentId.BP, hw, params, "btb").rows == 2 * 512

    def test_unknown_component(self, b1):
        with pytest.raises(ValueError, match="Unknown component"):
            instantiate_geometries("L2", b1, None)

    def test_overflow(self, b1):
        params = hidden_with({"Global Info Factor": 64, "BP Scalability": True})
        huge = dataclasses.replace(b1, fetch_width=2 ** 26, decode_width=1)
        with pytest.raises(GeometryOverflowError, match="2\\^31"):
            instantiate_geometries(ComponentId.BP, huge, params)


class TestEnergy:
    def test_reference_read_energy(self, tech):
        geom = ArrayGeometry(rows=256, width=64)
        assert array_op_energy(geom, ArrayOp.READ, tech) == pytest.approx(4.0, rel=1e-15)

    def test_tech_array_factor_is_linear(self, tech):
        geom = ArrayGeometry(rows=256, width=64)
        assert array_op_energy(geom, ArrayOp.READ, tech, 2.0) == 2 * array_op_energy(geom, ArrayOp.READ, tech)

    def test_duplicated_write(self, tech):
        tech = dataclasses.replace(tech, e_bit_write=0.05)
        single = array_op_energy(ArrayGeometry(rows=256, width=64), ArrayOp.WRITE, tech)
        double = array_op_energy(ArrayGeometry(rows=256, width=64, duplicates=2), ArrayOp.WRITE, tech)
        assert double == pytest.approx(8.0, rel=1e-15)
        assert double == 2 * single

    def test_duplicated_read_not_multiplied(self, tech):
        single = array_op_energy(ArrayGeometry(rows=256, width=64), ArrayOp.READ, tech)
        assert array_op_energy(ArrayGeometry(rows=256, width=64, duplicates=2), ArrayOp.READ, tech) == single

    def test_banking_shortens_rows(self, tech):
        banked = ArrayGeometry(rows=512, width=64, banks=2)
        assert array_op_energy(banked, ArrayOp.READ, tech) == \
            array_op_energy(ArrayGeometry(rows=256, width=64), ArrayOp.READ, tech)

    def test_leakage_counts_duplicates_and_instances_not_banks(self, tech):
        base = array_leakage_power(ArrayGeometry(rows=64, width=32), tech)
        assert array_leakage_power(ArrayGeometry(rows=64, width=32, banks=4), tech) == base
        assert array_leakage_power(ArrayGeometry(rows=64, width=32, duplicates=2, instances=3), tech) == \
            pytest.approx(6 * base)

    def test_non_positive_factor(self, tech):
        with pytest.raises(ValueError):
            array_op_energy(ArrayGeometry(rows=1, width=1), ArrayOp.READ, tech, 0.0)

    def test_logic_energy(self, tech):
        tech = dataclasses.replace(tech, dff_clock_toggle_power=1.0, reference_frequency_hz=1e9)
        assert logic_energy_per_cycle(1000, 0.0, tech) == 0.0
        assert logic_energy_per_cycle(1000, 1.0, tech) == pytest.approx(1.0, rel=1e-15)
        assert logic_energy_per_cycle(1000, 1.0, tech, logic_factor=2.0) == \
            2 * logic_energy_per_cycle(1000, 1.0, tech)

    def test_logic_activity_range(self, tech):
        with pytest.raises(ValueError):
            logic_energy_per_cycle(10, 1.5, tech)

    def test_invalid_geometry(self):
        with pytest.raises(ValueError):
            ArrayGeometry(rows=0, width=8)


class TestEventMapping:
    def make_events(self, hits, misses):
        return EventCounts(cycles=1000, clock_frequency=1e9, icache_hits=hits, icache_misses=misses)

    def test_icache_hits_and_misses(self, b1):
        ops = events_to_ops(ComponentId.ICACHE, self.make_events(100, 10), default_parameter_set(), b1)
        assert ops["data"].read_ops == 110
        assert ops["data"].write_ops == 10
        assert ops["tag"].read_ops == 110 * b1.dcache_icache_way

    def test_icache_scaled_counts(self, b1):
        params = hidden_with({"ICache Access Coefficient": 2.0, "ICache Access Bias": 5.0})
        ops = events_to_ops(ComponentId.ICACHE, self.make_events(100, 10), params, b1)
        assert ops["data"].read_ops == 230
        assert ops["data"].write_ops == 25

    def test_low_latency_reads_every_way(self, b1):
        params = hidden_with({"ICache Table Access Type": LOW_LATENCY})
        ops = events_to_ops(ComponentId.ICACHE, self.make_events(100, 10), params, b1)
        assert ops["data"].read_ops == 110 * b1.dcache_icache_way

    def test_zero_events(self, b1):
        events = EventCounts(cycles=1000, clock_frequency=1e9)
        for component_id in ComponentId:
            assert events_to_ops(component_id, events, default_parameter_set(), b1).is_zero()

    def test_effective_counts(self):
        assert effective_counts(100, 10, 2.0, 5.0) == (205.0, 25.0)

    def test_zero_coefficient_silences_cache(self, b1):
        params = hidden_with({"DCache Access Coefficient": 0.0})
        events = EventCounts(cycles=1000, clock_frequency=1e9, dcache_hits=10, dcache_misses=1)
        ops = events_to_ops(ComponentId.DCACHE, events, params, b1)
        assert ops["data"].read_ops == 0

    def test_normalize_rejects_unknown_event(self):
        with pytest.raises(ValueError, match="unknown event"):
            normalize_event_mapping({"ROB": {"rob": {"read": [["rob_peeks", 1]]}}})

    def test_normalize_rejects_unknown_symbol(self):
        with pytest.raises(ValueError, match="unknown multiplier"):
            normalize_event_mapping({"ROB": {"rob": {"read": [["rob_reads", "banks"]]}}})


class TestEstimator:
    def test_default_identity_on_all_configs_and_workloads(self, tech):
        defaults = default_parameter_set()
        for _, hw in bundled_config_table():
            for profile in default_workload_profiles():
                events = synthesize_events(hw, profile)
                assert estimate_core(hw, events, defaults, tech) == estimate_base(hw, events, tech)

    def test_total_is_sum_of_components(self, b1, qsort_events, tech):
        report = estimate_core(b1, qsort_events, default_parameter_set(), tech)
        assert report.total_power == sum(item.dynamic_power + item.leakage_power for item in report.components)
        assert len(report.components) == 11

    def test_default_parameters_leave_leakage_everywhere(self, b1, qsort_events, tech):
        assert components_without_leakage(estimate_core(b1, qsort_events, default_parameter_set(), tech)) == []

    def test_zero_other_logic_factor_removes_other_logic_leakage(self, b1, qsort_events, tech):
        report = estimate_core(b1, qsort_events, hidden_with({"Other Logic Factor": 0.0}), tech)
        assert components_without_leakage(report) == [ComponentId.OTHER_LOGIC]

    def test_deterministic(self, b1, qsort_events, tech):
        params = hidden_with({"FPU Power Scale": 2.5, "ICache MetaData Bit": 3})
        assert estimate_core(b1, qsort_events, params, tech) == estimate_core(b1, qsort_events, params, tech)

    def test_no_activity(self, b1, tech):
        events = EventCounts(cycles=1000, clock_frequency=1e9)
        for component_id in ComponentId:
            power = estimate_component(component_id, b1, events, default_parameter_set(), tech)
            assert power.dynamic_power == 0
            assert power.leakage_power > 0

    def test_alu_scale_doubles_fu_energy(self, b1, tech):
        events = EventCounts(cycles=1000, clock_frequency=1e9, int_alu_ops=800)
        one = estimate_component(ComponentId.FUPOOL, b1, events, default_parameter_set(), tech)
        two = estimate_component(ComponentId.FUPOOL, b1, events, hidden_with({"ALU Power Scale": 2.0}), tech)
        assert two.dynamic_power == pytest.approx(2 * one.dynamic_power, rel=1e-12)
        assert two.leakage_power == one.leakage_power

    def test_icache_dynamic_power_by_hand(self, b1, tech):
        events = EventCounts(cycles=1000, clock_frequency=1e9, icache_hits=100, icache_misses=10)
        arrays = dict(instantiate_geometries(ComponentId.ICACHE, b1, None))
        expected_pj = 0.0
        for name, reads in (("tag", 110 * b1.dcache_icache_way), ("data", 110)):
            expected_pj += reads * array_op_energy(arrays[name], ArrayOp.READ, tech)
            expected_pj += 10 * array_op_energy(arrays[name], ArrayOp.WRITE, tech)
        power = estimate_component(ComponentId.ICACHE, b1, events, None, tech)
        assert power.dynamic_power == pytest.approx(expected_pj * 1e-12 / 1e-6, rel=1e-12)

    def test_doubling_cycles_halves_dynamic_power(self, b1, qsort_events, tech):
        # Logic activity may clip at 1, so only array and FU components are compared
        slower = dataclasses.replace(qsort_events, cycles=2 * qsort_events.cycles)
        params = default_parameter_set()
        fast = estimate_core(b1, qsort_events, params, tech)
        slow = estimate_core(b1, slower, params, tech)
        for a, b in zip(fast.components, slow.components):
            if a.component_id in (ComponentId.IFU, ComponentId.RNU, ComponentId.LSU, ComponentId.OTHER_LOGIC):
                continue
            assert b.dynamic_power == pytest.approx(a.dynamic_power / 2, rel=1e-12)

    def test_tech_factors_scale_power(self, b1, qsort_events, tech):
        base = estimate_component(ComponentId.ROB, b1, qsort_events, default_parameter_set(), tech)
        scaled = estimate_component(ComponentId.ROB, b1, qsort_events, hidden_with({"Tech Array Factor": 2.0}), tech)
        assert scaled.dynamic_power == pytest.approx(2 * base.dynamic_power, rel=1e-12)
        assert scaled.leakage_power == pytest.approx(2 * base.leakage_power, rel=1e-12)
