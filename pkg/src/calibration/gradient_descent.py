"""
Finite-difference gradients and the projected gradient descent loop used
to decide implementation-level parameters.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, List, Mapping, Optional, Protocol, Tuple

import numpy as np

from config.parameter_registry import ParameterSet, ParameterSpec, get_spec
from data.models import CalibrationConfig

logger = logging.getLogger(__name__)

DIVERGENCE_RATIO = 1e6
MIN_DELTA = 1e-6
RELATIVE_DELTA = 1e-3


class CalibrationDivergenceError(RuntimeError):
    """Raised when the descent loss blows up relative to its starting point."""


def default_delta(spec: ParameterSpec) -> float:
    """Finite-difference step of a parameter: 1e-3 of its range width, at least 1e-6."""
    return max(RELATIVE_DELTA * spec.range_width, MIN_DELTA)


def resolve_delta(spec: ParameterSpec, config: CalibrationConfig) -> float:
    """Step for one parameter from the config (scalar, per-parameter map or default rule)."""
    if isinstance(config.delta, Mapping):
        delta = config.delta.get(spec.name, default_delta(spec))
    elif config.delta is not None:
        delta = float(config.delta)
    else:
        delta = default_delta(spec)
    if delta >= spec.range_width:
        raise ValueError(f"delta {delta} is not smaller than the range width of {spec.name} ({spec.range_width})")
    return delta


def finite_diff_gradient(predict: Callable[[ParameterSet], float], parameter_set: ParameterSet,
                         param_name: str, delta: float) -> float:
    """
    Slope of predict with respect to one numeric parameter.

    Uses the forward difference (predict(p + delta) - predict(p)) / delta,
    or the backward difference when p + delta leaves the range.

    Args:
        predict: Closure mapping a ParameterSet to power in watts
        parameter_set: Point to differentiate at
        param_name: Numeric parameter to perturb
        delta: Step size (> 0)

    Returns:
        Slope in watts per unit of the parameter
    """
    if delta == 0:
        raise ValueError("delta must be non-zero")
    if delta < 0:
        raise ValueError(f"delta must be positive, got {delta}")
    spec = get_spec(param_name)
    if not spec.is_numeric:
        raise ValueError(f"{param_name} is not a numeric parameter")

    value = parameter_set[param_name]
    base = predict(parameter_set)
    if value + delta <= spec.high:
        shifted = predict(parameter_set.updated({param_name: value + delta}))
        return (shifted - base) / delta
    shifted = predict(parameter_set.updated({param_name: value - delta}))
    return (base - shifted) / delta


class DescentObjective(Protocol):
    """Loss oracle used by ProjectedGradientDescent."""

    def loss(self, x: np.ndarray) -> float:
        ...

    def gradient(self, x: np.ndarray) -> Tuple[float, np.ndarray]:
        """Loss and its gradient at x."""
        ...


@dataclass
class DescentResult:
    """Best point found by a descent run and its loss trace."""
    best_x: np.ndarray
    best_loss: float
    initial_loss: float
    loss_history: List[float] = field(default_factory=list)
    iterations: int = 0
    stopped_early: bool = False


class ProjectedGradientDescent:
    """
    Gradient descent with clamping after every step.

    Coordinates descend in units of their range width, so the step of
    coordinate i is lr * width_i^2 * gradient_i, taken on the loss relative
    to its starting value. A step that raises the loss is halved up to
    max_backtracks times; each iteration starts from twice the last scale
    tried, capped at 1. With max_backtracks = 0 every full step is taken.
    """

    def __init__(self, lower: np.ndarray, upper: np.ndarray, config: CalibrationConfig,
                 label: str = "descent"):
        self.lower = np.asarray(lower, dtype=float)
        self.upper = np.asarray(upper, dtype=float)
        self.width_squared = (self.upper - self.lower) ** 2
        self.config = config
        self.label = label
        self.logger = logging.getLogger(__name__)

    def project(self, x: np.ndarray) -> np.ndarray:
        return np.clip(x, self.lower, self.upper)

    def step(self, grad: np.ndarray, reference_loss: float) -> np.ndarray:
        """Full step for a gradient of a loss whose starting value was reference_loss."""
        return self.config.learning_rate * self.width_squared * np.asarray(grad, dtype=float) / reference_loss

    def run(self, x0: np.ndarray, objective: DescentObjective) -> DescentResult:
        config = self.config
        x = self.project(np.asarray(x0, dtype=float))
        initial_loss = objective.loss(x)
        result = DescentResult(best_x=x.copy(), best_loss=initial_loss, initial_loss=initial_loss,
                               loss_history=[initial_loss])
        if initial_loss == 0.0:
            self.logger.debug(f"{self.label}: already optimal")
            return result
        if not math.isfinite(initial_loss):
            raise CalibrationDivergenceError(f"{self.label}: initial loss is not finite")

        stalled = 0
        scale = 0.5
        for iteration in range(1, config.max_iterations + 1):
            loss, grad = objective.gradient(x)
            step = self.step(grad, initial_loss)

            candidate, candidate_loss = x, loss
            scale = min(1.0, 2.0 * scale) if config.max_backtracks > 0 else 1.0
            for attempt in range(config.max_backtracks + 1):
                if attempt:
                    scale *= 0.5
                trial = self.project(x - scale * step)
                trial_loss = objective.loss(trial)
                if config.max_backtracks == 0 or trial_loss <= loss:
                    candidate, candidate_loss = trial, trial_loss
                    break

            if not math.isfinite(candidate_loss) or candidate_loss > DIVERGENCE_RATIO * initial_loss:
                raise CalibrationDivergenceError(
                    f"{self.label}: loss {candidate_loss:.6g} exceeds {DIVERGENCE_RATIO:.0e} x "
                    f"initial loss {initial_loss:.6g} at iteration {iteration}"
                )

            x = candidate
            result.loss_history.append(candidate_loss)
            result.iterations = iteration
            if candidate_loss < result.best_loss:
                result.best_x, result.best_loss = x.copy(), candidate_loss

            if candidate_loss == 0.0:
                result.stopped_early = True
                break
            improvement = (loss - candidate_loss) / loss if loss > 0 else 0.0
            stalled = stalled + 1 if improvement < config.early_stop_rel_tol else 0
            if stalled >= config.early_stop_patience:
                result.stopped_early = True
                break
            if iteration % 50 == 0:
                self.logger.debug(f"{self.label}: iteration {iteration}, loss {candidate_loss:.6g}")

        self.logger.debug(f"{self.label}: {result.iterations} iterations, "
                          f"loss {result.initial_loss:.6g} -> {result.best_loss:.6g}")
        return result


def round_integer_coordinates(x: np.ndarray, integer_mask: np.ndarray, lower: np.ndarray,
                              upper: np.ndarray) -> np.ndarray:
    """Round the integer coordinates half-up and re-clamp."""
    rounded = np.where(integer_mask, np.floor(x + 0.5), x)
    return np.clip(rounded, lower, upper)


def repair_integer_coordinates(x: np.ndarray, integer_mask: np.ndarray, lower: np.ndarray,
                               upper: np.ndarray, loss: Callable[[np.ndarray], float],
                               current_loss: Optional[float] = None) -> Tuple[np.ndarray, float]:
    """Try +/-1 on each integer coordinate in turn, keeping any move that lowers the loss."""
    best = x.copy()
    best_loss = loss(best) if current_loss is None else current_loss
    for index in np.flatnonzero(integer_mask):
        for offset in (-1.0, 1.0):
            trial = best.copy()
            trial[index] += offset
            if trial[index] < lower[index] or trial[index] > upper[index]:
                continue
            trial_loss = loss(trial)
            if trial_loss < best_loss:
                best, best_loss = trial, trial_loss
    return best, best_loss
