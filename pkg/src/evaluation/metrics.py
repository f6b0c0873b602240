"""
Accuracy metrics over (configuration, workload) points.
"""

from dataclasses import dataclass
from typing import Dict, List, Sequence

from data.models import ComponentId
from utils.calculations import mape, pearson_r


@dataclass(frozen=True)
class Metrics:
    """MAPE (percent) and Pearson R over n_points."""
    mape: float
    pearson_r: float
    n_points: int


@dataclass(frozen=True)
class PointPrediction:
    """Prediction and label of one (configuration, workload) point."""
    config_id: str
    workload: str
    prediction_w: float
    label_w: float
    component_predictions: Dict[ComponentId, float]
    component_labels: Dict[ComponentId, float]


def compute_metrics(predictions: Sequence[float], labels: Sequence[float]) -> Metrics:
    """MAPE and Pearson R of total-power predictions."""
    return Metrics(mape=mape(predictions, labels), pearson_r=pearson_r(predictions, labels),
                   n_points=len(labels))


def metrics_for_points(points: Sequence[PointPrediction]) -> Metrics:
    return compute_metrics([point.prediction_w for point in points], [point.label_w for point in points])


def component_metrics(points: Sequence[PointPrediction]) -> Dict[ComponentId, Metrics]:
    """Per-component metrics for diagnostics; components without labels or variance are skipped."""
    result = {}
    for component_id in ComponentId:
        preds: List[float] = []
        labels: List[float] = []
        for point in points:
            if component_id in point.component_labels and component_id in point.component_predictions:
                preds.append(point.component_predictions[component_id])
                labels.append(point.component_labels[component_id])
        if len(labels) < 2:
            continue
        try:
            result[component_id] = compute_metrics(preds, labels)
        except ValueError:
            continue
    return result
