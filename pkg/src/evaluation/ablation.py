"""
Ablation runner and baseline evaluation on scenario test splits.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, FrozenSet, List, Mapping, Optional, Sequence

from calibration.baseline import fit_scaling_baseline
from calibration.calibrator import ComponentCalibration, ParameterDecider
from config.parameter_registry import ParameterLevel, ParameterSet
from data.models import CalibrationConfig, ComponentId, TechCharacterization, TechProfile, TrainingSample
from evaluation.metrics import Metrics, PointPrediction, component_metrics, metrics_for_points
from evaluation.scenarios import Scenario
from model.energy import DEFAULT_TECH_PROFILE
from model.estimator import estimate_base, estimate_core
from model.event_mapping import EventMapping

logger = logging.getLogger(__name__)

CALIBRATED_METHOD = "analytical-calibrated"


class AblationVariant(Enum):
    FULL = "full"
    WO_ARCH = "wo-arch"
    WO_IMPL = "wo-impl"
    WO_TECH = "wo-tech"

    @classmethod
    def parse(cls, label: str) -> "AblationVariant":
        normalized = str(label).strip().lower().replace("/", "")
        for variant in cls:
            if variant.value == normalized:
                return variant
        raise ValueError(f"Unknown ablation variant: {label}")

    @property
    def pinned_levels(self) -> FrozenSet[ParameterLevel]:
        return {
            AblationVariant.FULL: frozenset(),
            AblationVariant.WO_ARCH: frozenset({ParameterLevel.ARCHITECTURE}),
            AblationVariant.WO_IMPL: frozenset({ParameterLevel.IMPLEMENTATION}),
            AblationVariant.WO_TECH: frozenset({ParameterLevel.TECHNOLOGY}),
        }[self]


class BaselineMethod(Enum):
    BASE = "analytical-base"
    SCALED = "analytical-scaled"


@dataclass
class EvaluationOutcome:
    """Metrics of one method on a scenario's test split, with the points behind them."""
    method: str
    metrics: Metrics
    points: List[PointPrediction]
    component_metrics: Dict[ComponentId, Metrics] = field(default_factory=dict)
    parameters: Optional[ParameterSet] = None
    calibrations: Dict[ComponentId, ComponentCalibration] = field(default_factory=dict)


def _point(sample: TrainingSample, components: Dict[ComponentId, float], total: float) -> PointPrediction:
    return PointPrediction(
        config_id=sample.config_id,
        workload=sample.workload,
        prediction_w=total,
        label_w=sample.total_label,
        component_predictions=components,
        component_labels=dict(sample.component_labels),
    )


def evaluate_parameter_set(params: ParameterSet, samples: Sequence[TrainingSample],
                           tech: TechProfile = DEFAULT_TECH_PROFILE,
                           mapping: Optional[EventMapping] = None) -> List[PointPrediction]:
    """Predict every sample with the injected model."""
    points = []
    for sample in samples:
        report = estimate_core(sample.hw, sample.events, params, tech, mapping)
        points.append(_point(sample, report.component_totals(), report.total_power))
    return points


def _require_splits(scenario: Scenario, samples: Sequence[TrainingSample]):
    train, test = scenario.split_samples(samples)
    if not train:
        raise ValueError(f"No training samples for {scenario.family.value} {scenario.kind.value}")
    if not test:
        raise ValueError(f"No test samples for {scenario.family.value} {scenario.kind.value}")
    return train, test


def _outcome(method: str, points: List[PointPrediction], **extra: Any) -> EvaluationOutcome:
    return EvaluationOutcome(method=method, metrics=metrics_for_points(points), points=points,
                             component_metrics=component_metrics(points), **extra)


def run_variant(variant: AblationVariant, scenario: Scenario, samples: Sequence[TrainingSample],
                config: CalibrationConfig, tech: TechProfile = DEFAULT_TECH_PROFILE,
                tech_char: Optional[TechCharacterization] = None,
                arch_params: Optional[Mapping[str, Any]] = None,
                mapping: Optional[EventMapping] = None) -> EvaluationOutcome:
    """
    Calibrate on the training split with the variant's level pinned to
    defaults and evaluate on the test split.

    Args:
        variant: Ablation variant
        scenario: Train/test split
        samples: Samples covering the scenario's family
        config: Descent settings
        tech: Technology constants of the model
        tech_char: Library characterization for the technology factors
        arch_params: User architecture values; taken from the samples when None
        mapping: Event mapping tables

    Returns:
        EvaluationOutcome of the calibrated model
    """
    variant = AblationVariant.parse(variant.value if isinstance(variant, AblationVariant) else variant)
    train, test = _require_splits(scenario, samples)
    logger.info(f"Running {variant.value} on {scenario.family.value} {scenario.kind.value}: "
                f"{len(train)} training and {len(test)} test samples")
    decision = ParameterDecider(tech, mapping).decide(train, arch_params, tech_char, config,
                                                      pinned_levels=variant.pinned_levels)
    points = evaluate_parameter_set(decision.parameters, test, tech, mapping)
    outcome = _outcome(CALIBRATED_METHOD, points, parameters=decision.parameters,
                       calibrations=decision.calibrations)
    logger.info(f"{scenario.family.value} {scenario.kind.value} {variant.value}: "
                f"MAPE {outcome.metrics.mape:.3f}% R {outcome.metrics.pearson_r:.4f}")
    return outcome


def run_ablation(variant: AblationVariant, scenario: Scenario, samples: Sequence[TrainingSample],
                 config: CalibrationConfig, tech: TechProfile = DEFAULT_TECH_PROFILE,
                 tech_char: Optional[TechCharacterization] = None,
                 arch_params: Optional[Mapping[str, Any]] = None,
                 mapping: Optional[EventMapping] = None) -> Metrics:
    """Test-split metrics of the calibrated model under an ablation variant."""
    return run_variant(variant, scenario, samples, config, tech, tech_char, arch_params, mapping).metrics


def evaluate_baseline(method: BaselineMethod, scenario: Scenario, samples: Sequence[TrainingSample],
                      tech: TechProfile = DEFAULT_TECH_PROFILE,
                      mapping: Optional[EventMapping] = None) -> EvaluationOutcome:
    """
    Evaluate an analytical baseline on the test split.

    The base model uses no training data; the scaled model fits its factor
    on the training split.
    """
    method = BaselineMethod(method.value if isinstance(method, BaselineMethod) else method)
    train, test = _require_splits(scenario, samples)
    factor = fit_scaling_baseline(train, tech, mapping) if method == BaselineMethod.SCALED else 1.0

    points = []
    for sample in test:
        report = estimate_base(sample.hw, sample.events, tech, mapping)
        components = {component_id: power * factor for component_id, power in report.component_totals().items()}
        points.append(_point(sample, components, report.total_power * factor))
    outcome = _outcome(method.value, points)
    logger.info(f"{scenario.family.value} {scenario.kind.value} {method.value}: "
                f"MAPE {outcome.metrics.mape:.3f}% R {outcome.metrics.pearson_r:.4f}")
    return outcome
