"""
Tests for the evaluation workbook.
"""

import pandas as pd

from reports.excel_generator import ExcelGenerator


def frames():
    metrics = pd.DataFrame({
        "family": ["BOOM", "BOOM"],
        "scenario": ["balance", "balance"],
        "variant": ["full", "-"],
        "method": ["analytical-calibrated", "analytical-base"],
        "mape": [0.05, 0.31],
        "pearson_r": [0.98, 0.74],
        "n_points": [12, 12],
    })
    component_metrics = pd.DataFrame({
        "family": ["BOOM"], "component": ["ROB"], "mape": [0.08], "pearson_r": [0.95],
    })
    points = pd.DataFrame({
        "config_id": ["B1", "B2"], "workload": ["qsort", "spmv"],
        "prediction_w": [0.41, 0.52], "label_w": [0.40, 0.55],
    })
    return metrics, component_metrics, points


class TestExcelGenerator:
    def test_rerun_writes_identical_bytes(self, tmp_path):
        first = ExcelGenerator().generate_report(*frames(), str(tmp_path / "a" / "eval.xlsx"))
        second = ExcelGenerator().generate_report(*frames(), str(tmp_path / "b" / "eval.xlsx"))
        assert (tmp_path / "a" / "eval.xlsx").read_bytes() == (tmp_path / "b" / "eval.xlsx").read_bytes()
        assert first.endswith("eval.xlsx") and second.endswith("eval.xlsx")

    def test_no_temporary_files_left_behind(self, tmp_path):
        ExcelGenerator().generate_report(*frames(), str(tmp_path / "eval.xlsx"))
        assert [p.name for p in tmp_path.iterdir()] == ["eval.xlsx"]
