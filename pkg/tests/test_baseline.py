"""
Tests for the scaled analytical baseline.
"""

import pytest

from calibration.baseline import ScaledBaseline, fit_scaling_baseline
from data.models import ComponentId, TrainingSample
from model.estimator import estimate_base


def labelled(hw, events, tech, ratio, config_id="B1"):
    base = estimate_base(hw, events, tech).total_power
    return TrainingSample(config_id=config_id, workload="qsort", hw=hw, arch_params={}, events=events,
                          component_labels={component_id: 1.0 for component_id in ComponentId},
                          total_label=base * ratio)


def test_factor_is_mean_ratio(b1, qsort_events, tech):
    samples = [labelled(b1, qsort_events, tech, 1.0), labelled(b1, qsort_events, tech, 3.0)]
    assert fit_scaling_baseline(samples, tech) == pytest.approx(2.0)


def test_predict_scales_base(b1, qsort_events, tech):
    baseline = ScaledBaseline.fit([labelled(b1, qsort_events, tech, 2.0)], tech)
    assert baseline.factor == pytest.approx(2.0)
    assert baseline.predict(b1, qsort_events, tech) == \
        pytest.approx(2.0 * estimate_base(b1, qsort_events, tech).total_power)


def test_unit_factor_is_base_model(b1, qsort_events, tech):
    assert ScaledBaseline().predict(b1, qsort_events, tech) == estimate_base(b1, qsort_events, tech).total_power


def test_needs_samples(tech):
    with pytest.raises(ValueError, match="at least one"):
        fit_scaling_baseline([], tech)
