"""
Atomic writers for CSV reports and text files.

Every file is written to a temporary sibling first and then renamed over the
target, so readers never observe a partially written file.
"""

import logging
import os
import tempfile
from pathlib import Path
from typing import Iterable, List, Optional

import pandas as pd

from data.models import ComponentId, PowerReport
from evaluation.metrics import Metrics, PointPrediction

logger = logging.getLogger(__name__)

METRICS_COLUMNS = ["family", "scenario", "variant", "method", "mape", "pearson_r", "n_points"]
POINT_COLUMNS = ["config_id", "workload", "prediction_w", "label_w"]
COMPONENT_METRICS_COLUMNS = ["family", "scenario", "variant", "method", "component", "mape", "pearson_r", "n_points"]
POWER_REPORT_COLUMNS = ["component", "dynamic_w", "leakage_w", "total_w"]


def write_text_atomic(path: str, text: str) -> Path:
    """Write text to path via a temporary file in the same directory."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{target.name}.", suffix=".tmp", dir=str(target.parent))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp_name, target)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
    logger.debug(f"Wrote {target}")
    return target


def write_frame_atomic(path: str, frame: pd.DataFrame) -> Path:
    """Write a DataFrame as CSV (no index, repr-precision floats)."""
    return write_text_atomic(path, frame.to_csv(index=False, lineterminator="\n"))


def metrics_row(family: str, scenario: str, variant: str, method: str, metrics: Metrics) -> dict:
    return {
        "family": family,
        "scenario": scenario,
        "variant": variant,
        "method": method,
        "mape": metrics.mape,
        "pearson_r": metrics.pearson_r,
        "n_points": metrics.n_points,
    }


def metrics_frame(rows: Iterable[dict]) -> pd.DataFrame:
    return pd.DataFrame(list(rows), columns=METRICS_COLUMNS)


def points_frame(points: Iterable[PointPrediction], extra: Optional[dict] = None) -> pd.DataFrame:
    """Per-point frame; extra columns (family, scenario, ...) are prepended when given."""
    extra = extra or {}
    rows: List[dict] = []
    for point in points:
        row = dict(extra)
        row.update({
            "config_id": point.config_id,
            "workload": point.workload,
            "prediction_w": point.prediction_w,
            "label_w": point.label_w,
        })
        rows.append(row)
    return pd.DataFrame(rows, columns=list(extra) + POINT_COLUMNS)


def power_report_frame(report: PowerReport) -> pd.DataFrame:
    rows = [
        {
            "component": item.component_id.value,
            "dynamic_w": item.dynamic_power,
            "leakage_w": item.leakage_power,
            "total_w": item.dynamic_power + item.leakage_power,
        }
        for item in report.components
    ]
    rows.append({
        "component": "total",
        "dynamic_w": sum(item.dynamic_power for item in report.components),
        "leakage_w": sum(item.leakage_power for item in report.components),
        "total_w": report.total_power,
    })
    return pd.DataFrame(rows, columns=POWER_REPORT_COLUMNS)


def write_power_report_csv(path: str, report: PowerReport) -> Path:
    return write_frame_atomic(path, power_report_frame(report))


def component_metrics_rows(family: str, scenario: str, variant: str, method: str,
                           per_component: dict) -> List[dict]:
    rows = []
    for component_id in ComponentId:
        if component_id not in per_component:
            continue
        metrics = per_component[component_id]
        rows.append({
            "family": family,
            "scenario": scenario,
            "variant": variant,
            "method": method,
            "component": component_id.value,
            "mape": metrics.mape,
            "pearson_r": metrics.pearson_r,
            "n_points": metrics.n_points,
        })
    return rows
