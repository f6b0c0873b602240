"""
Parameter decision in the order Architecture -> Technology -> Implementation.

Implementation-level parameters are decided per component by gradient
descent on the mean squared error against component power labels.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from calibration.gradient_descent import (
    ProjectedGradientDescent,
    finite_diff_gradient,
    repair_integer_coordinates,
    resolve_delta,
    round_integer_coordinates,
)
from calibration.tech_factors import decide_tech_factors
from config.parameter_registry import (
    ParameterLevel,
    ParameterSet,
    Provenance,
    ValueType,
    clamp,
    default_parameter_set,
    specs_for,
)
from data.models import CalibrationConfig, ComponentId, TechCharacterization, TechProfile, TrainingSample
from model.energy import DEFAULT_TECH_PROFILE
from model.estimator import components_without_leakage, estimate_component, estimate_core
from model.event_mapping import EventMapping

logger = logging.getLogger(__name__)

MILLI = 1e3
ANCHOR_CACHE_SIZE = 8


@dataclass
class ComponentCalibration:
    """Decided implementation-level values of one component plus the loss trace."""
    component_id: ComponentId
    values: Dict[str, Any]
    initial_loss: float
    final_loss: float
    loss_history: List[float] = field(default_factory=list)
    iterations: int = 0


@dataclass
class _Anchor:
    x: np.ndarray
    predictions: np.ndarray
    slopes: Optional[np.ndarray] = None


class ComponentObjective:
    """
    Mean squared error (mW^2) of one component's power over the samples.

    Predictions for linear parameters reuse slopes computed once per
    sample at each distinct setting of the non-linear parameters.
    """

    def __init__(self, component_id: ComponentId, samples: Sequence[TrainingSample],
                 base_params: ParameterSet, names: List[str], deltas: np.ndarray,
                 linear_mask: np.ndarray, tech: TechProfile, mapping: Optional[EventMapping]):
        self.component_id = component_id
        self.samples = list(samples)
        self.base_params = base_params
        self.names = names
        self.deltas = deltas
        self.linear_mask = linear_mask
        self.nonlinear_index = np.flatnonzero(~linear_mask)
        self.linear_index = np.flatnonzero(linear_mask)
        self.tech = tech
        self.mapping = mapping
        self.labels = np.array([sample.component_labels[component_id] for sample in self.samples]) * MILLI
        self._anchors: Dict[Tuple[float, ...], _Anchor] = {}

    def parameter_set(self, x: np.ndarray) -> ParameterSet:
        return self.base_params.updated({name: float(value) for name, value in zip(self.names, x)})

    def _predict_sample(self, sample: TrainingSample, params: ParameterSet) -> float:
        power = estimate_component(self.component_id, sample.hw, sample.events, params, self.tech, self.mapping)
        return (power.dynamic_power + power.leakage_power) * MILLI

    def model_predictions(self, x: np.ndarray) -> np.ndarray:
        """Predictions (mW) evaluated through the full model."""
        params = self.parameter_set(x)
        return np.array([self._predict_sample(sample, params) for sample in self.samples])

    def _anchor(self, x: np.ndarray) -> _Anchor:
        key = tuple(x[self.nonlinear_index])
        anchor = self._anchors.get(key)
        if anchor is None:
            if len(self._anchors) >= ANCHOR_CACHE_SIZE:
                self._anchors.pop(next(iter(self._anchors)))
            anchor = _Anchor(x=x.copy(), predictions=self.model_predictions(x))
            self._anchors[key] = anchor
        return anchor

    def _slopes(self, anchor: _Anchor) -> np.ndarray:
        if anchor.slopes is None:
            params = self.parameter_set(anchor.x)
            slopes = np.zeros((len(self.samples), len(self.linear_index)))
            for row, sample in enumerate(self.samples):
                def predict(candidate: ParameterSet, sample=sample) -> float:
                    return self._predict_sample(sample, candidate)
                for column, index in enumerate(self.linear_index):
                    slopes[row, column] = finite_diff_gradient(predict, params, self.names[index],
                                                               self.deltas[index])
            anchor.slopes = slopes
        return anchor.slopes

    def predictions(self, x: np.ndarray) -> np.ndarray:
        anchor = self._anchor(x)
        shift = x[self.linear_index] - anchor.x[self.linear_index]
        if not np.any(shift):
            return anchor.predictions
        return anchor.predictions + self._slopes(anchor) @ shift

    def loss(self, x: np.ndarray) -> float:
        residual = self.predictions(x) - self.labels
        return float(np.mean(residual ** 2))

    def model_loss(self, x: np.ndarray) -> float:
        residual = self.model_predictions(x) - self.labels
        return float(np.mean(residual ** 2))

    def gradient(self, x: np.ndarray) -> Tuple[float, np.ndarray]:
        predictions = self.predictions(x)
        residual = predictions - self.labels
        partials = np.zeros((len(self.samples), len(self.names)))
        if len(self.linear_index):
            partials[:, self.linear_index] = self._slopes(self._anchor(x))
        if len(self.nonlinear_index):
            params = self.parameter_set(x)
            for row, sample in enumerate(self.samples):
                def predict(candidate: ParameterSet, sample=sample) -> float:
                    return self._predict_sample(sample, candidate)
                for index in self.nonlinear_index:
                    partials[row, index] = finite_diff_gradient(predict, params, self.names[index],
                                                                self.deltas[index])
        grad = np.mean(2.0 * residual[:, None] * partials, axis=0)
        return float(np.mean(residual ** 2)), grad


def _typed_value(value: float, value_type: ValueType) -> Any:
    return int(round(value)) if value_type == ValueType.INT else float(value)


def calibrate_component(component_id: ComponentId, samples: Sequence[TrainingSample],
                        config: CalibrationConfig, base_params: Optional[ParameterSet] = None,
                        tech: TechProfile = DEFAULT_TECH_PROFILE,
                        mapping: Optional[EventMapping] = None) -> ComponentCalibration:
    """
    Decide the implementation-level parameters of one component.

    Architecture and technology values in base_params are frozen. The
    returned values never give a higher loss than the starting point.

    Args:
        component_id: Component to calibrate
        samples: Training samples with component labels
        config: Descent settings
        base_params: Starting point (defaults when omitted)
        tech: Technology constants
        mapping: Event mapping tables

    Returns:
        ComponentCalibration holding the decided values and loss trace
    """
    component_id = ComponentId(component_id)
    if not samples:
        raise ValueError("calibrate_component needs at least one training sample")
    for sample in samples:
        label = sample.component_labels.get(component_id)
        if label is None or label <= 0:
            raise ValueError(
                f"{sample.config_id}/{sample.workload}: {component_id.value} label must be positive, got {label}"
            )

    base_params = clamp(base_params or default_parameter_set())
    specs = specs_for(ParameterLevel.IMPLEMENTATION, component_id)
    if not specs:
        return ComponentCalibration(component_id, {}, 0.0, 0.0)

    names = [spec.name for spec in specs]
    lower = np.array([spec.low for spec in specs], dtype=float)
    upper = np.array([spec.high for spec in specs], dtype=float)
    deltas = np.array([resolve_delta(spec, config) for spec in specs])
    linear_mask = np.array([spec.linear for spec in specs])
    integer_mask = np.array([spec.value_type == ValueType.INT for spec in specs])
    x0 = np.array([float(base_params[name]) for name in names])

    objective = ComponentObjective(component_id, samples, base_params, names, deltas,
                                   linear_mask, tech, mapping)
    descent = ProjectedGradientDescent(lower, upper, config, label=component_id.value)
    logger.info(f"Calibrating {component_id.value}: {', '.join(names)} over {len(samples)} samples")
    result = descent.run(x0, objective)

    initial_loss = objective.model_loss(x0)
    best_x = result.best_x
    final_loss = objective.model_loss(best_x)
    if integer_mask.any():
        rounded = round_integer_coordinates(best_x, integer_mask, lower, upper)
        best_x, final_loss = repair_integer_coordinates(rounded, integer_mask, lower, upper,
                                                        objective.model_loss)
    if final_loss > initial_loss:
        logger.info(f"{component_id.value}: decided values do not beat the starting point, keeping it")
        best_x, final_loss = x0, initial_loss

    values = {spec.name: _typed_value(value, spec.value_type) for spec, value in zip(specs, best_x)}
    logger.info(f"{component_id.value}: loss {initial_loss:.6g} -> {final_loss:.6g} mW^2 "
                f"after {result.iterations} iterations")
    return ComponentCalibration(component_id=component_id, values=values, initial_loss=initial_loss,
                                final_loss=final_loss, loss_history=list(result.loss_history),
                                iterations=result.iterations)


def _shared_arch_params(samples: Sequence[TrainingSample]) -> Dict[str, Any]:
    first = dict(samples[0].arch_params)
    for sample in samples[1:]:
        if dict(sample.arch_params) != first:
            logger.warning(f"Architecture parameters of {sample.config_id} differ from "
                           f"{samples[0].config_id}; using those of {samples[0].config_id}")
            break
    return first


@dataclass
class DecisionResult:
    """Assembled parameter set and per-component calibration traces."""
    parameters: ParameterSet
    calibrations: Dict[ComponentId, ComponentCalibration]
    elapsed_seconds: float


class ParameterDecider:
    """Runs the three-level parameter decision."""

    def __init__(self, tech: TechProfile = DEFAULT_TECH_PROFILE, mapping: Optional[EventMapping] = None,
                 time_budget_seconds: Optional[float] = None):
        self.tech = tech
        self.mapping = mapping
        self.time_budget_seconds = time_budget_seconds
        self.logger = logging.getLogger(__name__)

    def decide(self, samples: Sequence[TrainingSample], arch_params: Optional[Mapping[str, Any]],
               tech_char: Optional[TechCharacterization], config: CalibrationConfig,
               pinned_levels: FrozenSet[ParameterLevel] = frozenset()) -> DecisionResult:
        """
        Decide all parameters; pinned levels stay at their defaults.

        Args:
            samples: Training samples
            arch_params: User architecture values; taken from the samples when None
            tech_char: Library characterization; technology factors stay at defaults when None
            config: Descent settings
            pinned_levels: Levels excluded from decision (ablation)

        Returns:
            DecisionResult
        """
        if not samples:
            raise ValueError("Parameter decision needs at least one training sample")
        start = time.perf_counter()
        params = default_parameter_set()

        if ParameterLevel.ARCHITECTURE not in pinned_levels:
            user_values = dict(arch_params) if arch_params is not None else _shared_arch_params(samples)
            arch_names = {spec.name for spec in specs_for(ParameterLevel.ARCHITECTURE)}
            foreign = sorted(set(user_values) - arch_names)
            if foreign:
                raise ValueError(f"Not an architecture-level parameter: {foreign[0]}")
            if user_values:
                params = params.updated(user_values, {ParameterLevel.ARCHITECTURE: Provenance.USER})
        if ParameterLevel.TECHNOLOGY not in pinned_levels and tech_char is not None:
            params = params.updated(decide_tech_factors(tech_char, self.tech),
                                    {ParameterLevel.TECHNOLOGY: Provenance.CALIBRATED})
        params = clamp(params)

        calibrations: Dict[ComponentId, ComponentCalibration] = {}
        if ParameterLevel.IMPLEMENTATION not in pinned_levels:
            calibrations = self._calibrate_components(samples, params, config)
            impl_values = {}
            for component_id in ComponentId:
                impl_values.update(calibrations[component_id].values)
            params = clamp(params.updated(impl_values, {ParameterLevel.IMPLEMENTATION: Provenance.CALIBRATED}))

        leakless = components_without_leakage(estimate_core(samples[0].hw, samples[0].events, params,
                                                            self.tech, self.mapping))
        if leakless:
            self.logger.warning("Decided parameters leave no leakage in "
                                f"{', '.join(c.value for c in leakless)}")

        elapsed = time.perf_counter() - start
        if self.time_budget_seconds is not None and elapsed > self.time_budget_seconds:
            self.logger.warning(f"Parameter decision took {elapsed:.1f}s, above the "
                                f"{self.time_budget_seconds:.0f}s budget")
        return DecisionResult(parameters=params, calibrations=calibrations, elapsed_seconds=elapsed)

    def _calibrate_components(self, samples: Sequence[TrainingSample], params: ParameterSet,
                              config: CalibrationConfig) -> Dict[ComponentId, ComponentCalibration]:
        components = list(ComponentId)
        if config.max_workers > 1:
            with ThreadPoolExecutor(max_workers=config.max_workers) as executor:
                futures = {
                    component_id: executor.submit(calibrate_component, component_id, samples, config,
                                                  params, self.tech, self.mapping)
                    for component_id in components
                }
                return {component_id: future.result() for component_id, future in futures.items()}
        return {
            component_id: calibrate_component(component_id, samples, config, params, self.tech, self.mapping)
            for component_id in components
        }


def calibrate_all(samples: Sequence[TrainingSample], arch_params: Optional[Mapping[str, Any]],
                  tech_char: Optional[TechCharacterization], config: CalibrationConfig,
                  tech: TechProfile = DEFAULT_TECH_PROFILE,
                  mapping: Optional[EventMapping] = None) -> ParameterSet:
    """Decide architecture, then technology, then every component's implementation values."""
    return ParameterDecider(tech, mapping).decide(samples, arch_params, tech_char, config).parameters
