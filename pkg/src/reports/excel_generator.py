"""
Excel workbook summarising an evaluation grid.
"""

import logging
import os
import tempfile
from datetime import datetime
from pathlib import Path

import pandas as pd

from reports.formatter import ExcelFormatter

SUMMARY_SHEET = 'Summary'
METRICS_SHEET = 'Metrics'
COMPONENT_SHEET = 'Component Metrics'
POINTS_SHEET = 'Points'

# Fixed document timestamp so reruns write identical bytes
CREATED = datetime(2000, 1, 1)


class ExcelGenerator:
    """Excel report generator for evaluation results."""

    def __init__(self):
        self.logger = logging.getLogger(__name__)
        self.formatter = ExcelFormatter()

    def generate_report(self, metrics: pd.DataFrame, component_metrics: pd.DataFrame,
                        points: pd.DataFrame, output_file: str) -> str:
        """
        Write the evaluation workbook.

        Args:
            metrics: One row per (family, scenario, variant, method)
            component_metrics: Per-component diagnostics
            points: Per-point predictions and labels
            output_file: Target .xlsx path

        Returns:
            Path of the written workbook
        """
        target = Path(output_file)
        target.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp_name = tempfile.mkstemp(prefix=f".{target.name}.", suffix=".xlsx", dir=str(target.parent))
        os.close(fd)
        try:
            with pd.ExcelWriter(tmp_name, engine='xlsxwriter') as writer:
                workbook = writer.book
                workbook.set_properties({'created': CREATED})
                self.formatter.add_formats(workbook)
                self._write_summary(writer, metrics)
                self._write_sheet(writer, METRICS_SHEET, metrics, metrics_sheet=True)
                self._write_sheet(writer, COMPONENT_SHEET, component_metrics, metrics_sheet=True)
                self._write_sheet(writer, POINTS_SHEET, points)
            os.replace(tmp_name, target)
        except BaseException:
            if os.path.exists(tmp_name):
                os.unlink(tmp_name)
            raise
        self.logger.info(f"Evaluation workbook written to {target}")
        return str(target)

    def _write_summary(self, writer: pd.ExcelWriter, metrics: pd.DataFrame) -> None:
        """MAPE pivot: rows (family, scenario), one column per variant/method."""
        if metrics.empty:
            pd.DataFrame({'message': ['No results']}).to_excel(writer, sheet_name=SUMMARY_SHEET, index=False)
            return
        labelled = metrics.assign(column=metrics['variant'].where(metrics['variant'] != '-', metrics['method']))
        pivot = labelled.pivot_table(index=['family', 'scenario'], columns='column', values='mape',
                                     aggfunc='first', sort=False).reset_index()
        pivot.columns.name = None
        pivot.to_excel(writer, sheet_name=SUMMARY_SHEET, index=False)

        worksheet = writer.sheets[SUMMARY_SHEET]
        self.formatter.write_header(worksheet, pivot)
        self.formatter.adjust_column_widths(worksheet, pivot)
        if len(pivot) > 0 and len(pivot.columns) > 2:
            for col in range(2, len(pivot.columns)):
                self.formatter.add_color_scale(worksheet, 1, len(pivot), col)
        worksheet.freeze_panes(1, 2)

    def _write_sheet(self, writer: pd.ExcelWriter, sheet_name: str, df: pd.DataFrame,
                     metrics_sheet: bool = False) -> None:
        df.to_excel(writer, sheet_name=sheet_name, index=False)
        worksheet = writer.sheets[sheet_name]
        self.formatter.write_header(worksheet, df)
        self.formatter.adjust_column_widths(worksheet, df)
        if metrics_sheet:
            self.formatter.apply_metrics_formatting(worksheet, df)
        elif 'prediction_w' in df.columns:
            self.formatter.apply_points_formatting(worksheet, df)
        worksheet.freeze_panes(1, 0)
