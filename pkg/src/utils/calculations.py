"""
Mathematical and statistical calculation utilities.
"""

from typing import Sequence

import numpy as np
from scipy import stats


def _as_pair(predictions: Sequence[float], labels: Sequence[float]):
    preds = np.asarray(predictions, dtype=float)
    labs = np.asarray(labels, dtype=float)
    if preds.ndim != 1 or labs.ndim != 1:
        raise ValueError("predictions and labels must be one-dimensional")
    if len(preds) != len(labs):
        raise ValueError(f"Length mismatch: {len(preds)} predictions vs {len(labs)} labels")
    return preds, labs


def relative_errors(predictions: Sequence[float], labels: Sequence[float]) -> np.ndarray:
    """
    Signed relative error of each prediction.

    Args:
        predictions: Predicted values
        labels: Ground-truth values (all > 0)

    Returns:
        (prediction - label) / label per point
    """
    preds, labs = _as_pair(predictions, labels)
    if len(labs) == 0:
        raise ValueError("At least one point is required")
    if np.any(labs <= 0):
        raise ValueError("All labels must be positive")
    return (preds - labs) / labs


def mape(predictions: Sequence[float], labels: Sequence[float]) -> float:
    """
    Mean absolute percentage error.

    Args:
        predictions: Predicted values
        labels: Ground-truth values (all > 0)

    Returns:
        100 * mean(|prediction - label| / label)
    """
    return float(100.0 * np.mean(np.abs(relative_errors(predictions, labels))))


def pearson_r(predictions: Sequence[float], labels: Sequence[float]) -> float:
    """
    Pearson product-moment correlation coefficient.

    Raises:
        ValueError: fewer than two points, or zero variance in either vector
    """
    preds, labs = _as_pair(predictions, labels)
    if len(preds) < 2:
        raise ValueError("Pearson R needs at least two points")
    if np.ptp(preds) == 0 or np.ptp(labs) == 0:
        raise ValueError("Pearson R is undefined for a vector with zero variance")
    r, _ = stats.pearsonr(preds, labs)
    return float(np.clip(r, -1.0, 1.0))
