"""
Tests for per-component calibration and the three-level parameter decision.
"""

import logging

import pytest

from calibration.calibrator import ParameterDecider, calibrate_all, calibrate_component
from config.parameter_registry import (
    LOW_LATENCY,
    ParameterLevel,
    Provenance,
    default_parameter_set,
)
from data.models import CalibrationConfig, ComponentId, EventCounts, TrainingSample
from data.synthetic import characterization_for_factors
from model.estimator import estimate_component

from conftest import hidden_with, make_samples


def fpu_only_samples(configs, tech, fpu_scale):
    """Samples whose FUPool activity is floating point only."""
    hidden = hidden_with({"FPU Power Scale": fpu_scale})
    samples = []
    for index, (config_id, hw) in enumerate(configs):
        events = EventCounts(cycles=1000000, clock_frequency=1e9, fpu_ops=100000 * (index + 1))
        power = estimate_component(ComponentId.FUPOOL, hw, events, hidden, tech)
        samples.append(TrainingSample(config_id=config_id, workload="fp", hw=hw, arch_params={},
                                      events=events, component_labels={ComponentId.FUPOOL: power.total_power},
                                      total_label=power.total_power))
    return samples


class TestCalibrateComponent:
    def test_recovers_fpu_scale(self, boom_configs, tech):
        samples = fpu_only_samples(boom_configs[:3], tech, 2.5)
        result = calibrate_component(ComponentId.FUPOOL, samples, CalibrationConfig(), tech=tech)
        assert result.values["FPU Power Scale"] == pytest.approx(2.5, rel=1e-6)
        assert result.values["ALU Power Scale"] == 1.0
        assert result.values["MUL Power Scale"] == 1.0
        assert result.final_loss <= result.initial_loss

    def test_never_worse_than_start(self, boom_configs, tech):
        hidden = hidden_with({"ROB Entry Width": 7})
        samples = make_samples(hidden, boom_configs[:2])
        result = calibrate_component(ComponentId.ROB, samples, CalibrationConfig(max_iterations=20), tech=tech)
        assert result.final_loss <= result.initial_loss
        assert isinstance(result.values["ROB Entry Width"], int)

    def test_recovers_rob_status_bits(self, boom_configs, tech):
        samples = make_samples(hidden_with({"ROB Entry Width": 7}), boom_configs[:3])
        result = calibrate_component(ComponentId.ROB, samples, CalibrationConfig(), tech=tech)
        assert result.values["ROB Entry Width"] == 7
        assert result.final_loss == pytest.approx(0.0, abs=1e-12)

    def test_needs_samples(self):
        with pytest.raises(ValueError, match="at least one"):
            calibrate_component(ComponentId.ROB, [], CalibrationConfig())

    def test_rejects_non_positive_label(self, boom_configs, tech):
        samples = fpu_only_samples(boom_configs[:1], tech, 1.0)
        samples[0].component_labels[ComponentId.FUPOOL] = 0.0
        with pytest.raises(ValueError, match="label must be positive"):
            calibrate_component(ComponentId.FUPOOL, samples, CalibrationConfig())


class TestParameterDecider:
    def test_default_labels_are_a_fixed_point(self, boom_configs, tech):
        samples = make_samples(default_parameter_set(), boom_configs[:2])
        decided = ParameterDecider(tech).decide(samples, None, characterization_for_factors(tech, 1.0, 1.0),
                                                CalibrationConfig(max_iterations=10))
        assert decided.parameters.values == default_parameter_set().values
        for calibration in decided.calibrations.values():
            assert calibration.final_loss == 0.0

    def test_provenance(self, boom_configs, tech):
        samples = make_samples(default_parameter_set(), boom_configs[:1])
        decided = ParameterDecider(tech).decide(samples, {"BP Table Access Type": LOW_LATENCY},
                                                characterization_for_factors(tech, 2.0, 0.5),
                                                CalibrationConfig(max_iterations=2))
        params = decided.parameters
        assert params["BP Table Access Type"] == LOW_LATENCY
        assert params["Tech Array Factor"] == pytest.approx(2.0)
        assert params["Tech Logic Factor"] == pytest.approx(0.5)
        assert params.provenance == {
            ParameterLevel.ARCHITECTURE: Provenance.USER,
            ParameterLevel.TECHNOLOGY: Provenance.CALIBRATED,
            ParameterLevel.IMPLEMENTATION: Provenance.CALIBRATED,
        }

    def test_pinned_levels_stay_default(self, boom_configs, tech):
        samples = make_samples(hidden_with({"ROB Entry Width": 7}), boom_configs[:1])
        decided = ParameterDecider(tech).decide(
            samples, {"ICache Scalability": True}, characterization_for_factors(tech, 2.0, 2.0),
            CalibrationConfig(), pinned_levels=frozenset(ParameterLevel))
        assert decided.parameters.values == default_parameter_set().values
        assert decided.calibrations == {}

    def test_missing_characterization_keeps_tech_defaults(self, boom_configs, tech):
        samples = make_samples(default_parameter_set(), boom_configs[:1])
        decided = ParameterDecider(tech).decide(samples, None, None, CalibrationConfig(),
                                                pinned_levels=frozenset({ParameterLevel.IMPLEMENTATION}))
        assert decided.parameters["Tech Array Factor"] == 1.0
        assert decided.parameters.provenance[ParameterLevel.TECHNOLOGY] == Provenance.DEFAULT

    def test_rejects_non_architecture_values(self, boom_configs, tech):
        samples = make_samples(default_parameter_set(), boom_configs[:1])
        with pytest.raises(ValueError, match="Not an architecture-level parameter: FPU Power Scale"):
            ParameterDecider(tech).decide(samples, {"FPU Power Scale": 2.0}, None, CalibrationConfig())

    def test_needs_samples(self, tech):
        with pytest.raises(ValueError, match="at least one"):
            ParameterDecider(tech).decide([], None, None, CalibrationConfig())

    def test_time_budget_warning(self, boom_configs, tech, caplog):
        samples = make_samples(default_parameter_set(), boom_configs[:1])
        with caplog.at_level(logging.WARNING):
            ParameterDecider(tech, time_budget_seconds=0.0).decide(
                samples, None, None, CalibrationConfig(), pinned_levels=frozenset({ParameterLevel.IMPLEMENTATION}))
        assert "budget" in caplog.text

    def test_parallel_matches_serial(self, boom_configs, tech):
        samples = make_samples(hidden_with({"ROB Entry Width": 3, "IFU Logic Factor": 1.25}), boom_configs[:2])
        serial = calibrate_all(samples, None, None, CalibrationConfig(max_iterations=15), tech)
        parallel = calibrate_all(samples, None, None, CalibrationConfig(max_iterations=15, max_workers=4), tech)
        assert serial.values == parallel.values
