"""
Property-based tests for clamping, scenario splits, the estimator and the
finite-difference slopes.
"""

import pytest
from hypothesis import given, settings, strategies as st

from calibration.gradient_descent import finite_diff_gradient
from config.parameter_registry import (
    LOW_LATENCY,
    LOW_POWER,
    PARAMETER_SPECS,
    ValueType,
    clamp,
    default_parameter_set,
)
from data.config_table import Family, bundled_config_table, family_configs
from data.models import ComponentId
from data.synthetic import synthesize_events
from data.workloads import default_workload_profiles, profile_by_name
from evaluation.scenarios import ScenarioKind, balance_indices, split_scenario
from model.energy import DEFAULT_TECH_PROFILE
from model.estimator import estimate_component, estimate_core
from utils.calculations import mape

NUMERIC_SPECS = [spec for spec in PARAMETER_SPECS if spec.is_numeric]
LINEAR_SPECS = [spec for spec in NUMERIC_SPECS if spec.linear]
COMPONENT_SPECS = [spec for spec in NUMERIC_SPECS if spec.component_id is not None]

HW = family_configs(Family.BOOM)[0][1]
EVENTS = synthesize_events(HW, profile_by_name("spmv"))
DEFAULTS = default_parameter_set()

finite_floats = st.floats(allow_nan=False, allow_infinity=False, min_value=-1e12, max_value=1e12)


def in_range(spec):
    if spec.value_type == ValueType.INT:
        return st.integers(min_value=int(spec.low), max_value=int(spec.high))
    return st.floats(min_value=spec.low, max_value=spec.high, exclude_min=spec.low_exclusive)


@st.composite
def spec_and_value(draw, specs):
    spec = draw(st.sampled_from(specs))
    return spec, draw(in_range(spec))


def power_of(spec):
    """Predict closure on the narrowest power that a parameter affects."""
    component_id = spec.component_id
    if component_id is None:
        return lambda params: estimate_core(HW, EVENTS, params, DEFAULT_TECH_PROFILE).total_power
    return lambda params: estimate_component(component_id, HW, EVENTS, params, DEFAULT_TECH_PROFILE).total_power


class TestClampProperties:
    @settings(max_examples=1000)
    @given(st.sampled_from(NUMERIC_SPECS), finite_floats)
    def test_projection_lands_in_range_and_is_idempotent(self, spec, raw):
        value = int(raw) if spec.value_type == ValueType.INT else raw
        projected = spec.project(value)
        assert spec.contains(projected)
        assert spec.project(projected) == projected
        if spec.contains(value):
            assert projected == value

    @settings(max_examples=1000)
    @given(st.dictionaries(st.sampled_from(NUMERIC_SPECS), finite_floats, max_size=6))
    def test_clamp_is_idempotent_on_parameter_sets(self, raw_values):
        params = DEFAULTS.updated({spec.name: value for spec, value in raw_values.items()})
        once = clamp(params)
        assert clamp(once).values == once.values
        assert all(spec.contains(once[spec.name]) for spec in PARAMETER_SPECS)


class TestScenarioProperties:
    @settings(max_examples=1000)
    @given(st.integers(min_value=4, max_value=10000))
    def test_balance_indices_spread_over_the_family(self, count):
        first, middle, last = balance_indices(count)
        assert first == 0
        assert last == count - 1
        assert first < middle < last

    @settings(max_examples=1000)
    @given(st.sampled_from(list(Family)), st.sampled_from(list(ScenarioKind)))
    def test_split_partitions_the_family(self, family, kind):
        scenario = split_scenario(family, kind)
        family_ids = [config_id for config_id, _ in family_configs(family)]
        assert len(scenario.train_config_ids) == 3
        assert not set(scenario.train_config_ids) & set(scenario.test_config_ids)
        assert sorted(scenario.train_config_ids + scenario.test_config_ids) == sorted(family_ids)


class TestEstimatorProperties:
    @settings(max_examples=1000, deadline=None)
    @given(spec_and_value(COMPONENT_SPECS))
    def test_implementation_parameter_only_moves_its_component(self, drawn):
        spec, value = drawn
        params = DEFAULTS.updated({spec.name: value})
        for component_id in ComponentId:
            if component_id == spec.component_id:
                continue
            moved = estimate_component(component_id, HW, EVENTS, params, DEFAULT_TECH_PROFILE)
            base = estimate_component(component_id, HW, EVENTS, DEFAULTS, DEFAULT_TECH_PROFILE)
            assert moved.total_power == base.total_power, component_id

    @settings(max_examples=1000, deadline=None)
    @given(st.floats(min_value=0.0, max_value=32.0))
    def test_dcache_power_is_affine_in_access_coefficient(self, coefficient):
        def dcache(c):
            params = DEFAULTS.updated({"DCache Access Coefficient": c})
            return estimate_component(ComponentId.DCACHE, HW, EVENTS, params, DEFAULT_TECH_PROFILE).total_power

        at_zero = dcache(0.0)
        slope = dcache(1.0) - at_zero
        assert dcache(coefficient) == pytest.approx(at_zero + coefficient * slope, rel=1e-9)

    @settings(max_examples=1000, deadline=None)
    @given(st.sampled_from(bundled_config_table()), st.sampled_from(default_workload_profiles()),
           st.sampled_from(["ICache Table Access Type", "BP Table Access Type"]))
    def test_low_latency_never_cheaper_than_low_power(self, entry, profile, access_type):
        _, hw = entry
        events = synthesize_events(hw, profile)
        component_id = ComponentId.ICACHE if access_type.startswith("ICache") else ComponentId.BP
        fast = estimate_component(component_id, hw, events, DEFAULTS.updated({access_type: LOW_LATENCY}),
                                  DEFAULT_TECH_PROFILE)
        frugal = estimate_component(component_id, hw, events, DEFAULTS.updated({access_type: LOW_POWER}),
                                    DEFAULT_TECH_PROFILE)
        assert fast.total_power >= frugal.total_power


class TestMetricProperties:
    positive = st.floats(min_value=1e-3, max_value=1e3)

    @settings(max_examples=1000)
    @given(st.lists(positive, min_size=1, max_size=50))
    def test_perfect_prediction_has_zero_error(self, labels):
        assert mape(labels, labels) == 0.0

    @settings(max_examples=1000)
    @given(st.lists(st.tuples(positive, positive), min_size=1, max_size=50), st.floats(min_value=1e-3, max_value=1e3))
    def test_error_is_scale_invariant(self, pairs, scale):
        predictions = [p for p, _ in pairs]
        labels = [label for _, label in pairs]
        scaled = mape([p * scale for p in predictions], [label * scale for label in labels])
        assert scaled == pytest.approx(mape(predictions, labels), rel=1e-9, abs=1e-9)


class TestLinearSlopeProperties:
    @settings(max_examples=1000, deadline=None)
    @given(st.data())
    def test_slope_of_linear_parameter_is_position_independent(self, data):
        spec = data.draw(st.sampled_from(LINEAR_SPECS))
        first = data.draw(in_range(spec))
        second = data.draw(in_range(spec))
        predict = power_of(spec)
        delta = 0.1 * spec.range_width

        slope_first = finite_diff_gradient(predict, DEFAULTS.updated({spec.name: first}), spec.name, delta)
        slope_second = finite_diff_gradient(predict, DEFAULTS.updated({spec.name: second}), spec.name, delta)
        assert slope_first == pytest.approx(slope_second, rel=1e-9, abs=1e-20)
