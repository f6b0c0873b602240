"""
Formatting utilities: console tables and Excel styling.
"""

import pandas as pd
import xlsxwriter

from data.models import PowerReport

# MAPE bands (percent) for colouring evaluation results
MAPE_GOOD = 5.0
MAPE_FAIR = 10.0

MILLIWATT = 1e3


def format_power_report(report: PowerReport, title: str = "") -> str:
    """Per-component power table in mW, followed by the core total."""
    rows = [
        {
            "Component": item.component_id.value,
            "Dynamic (mW)": item.dynamic_power * MILLIWATT,
            "Leakage (mW)": item.leakage_power * MILLIWATT,
            "Total (mW)": (item.dynamic_power + item.leakage_power) * MILLIWATT,
        }
        for item in report.components
    ]
    rows.append({
        "Component": "Core",
        "Dynamic (mW)": sum(item.dynamic_power for item in report.components) * MILLIWATT,
        "Leakage (mW)": sum(item.leakage_power for item in report.components) * MILLIWATT,
        "Total (mW)": report.total_power * MILLIWATT,
    })
    table = pd.DataFrame(rows).to_string(index=False, float_format=lambda value: f"{value:.4f}")
    header = f"{title}\n" if title else ""
    return f"{header}{table}\nExecution time: {report.execution_time:.6g} s\n"


def format_metrics_table(frame: pd.DataFrame) -> str:
    """Metrics rows as a console table."""
    if frame.empty:
        return "No results\n"
    shown = frame.copy()
    shown["mape"] = shown["mape"].map(lambda value: f"{value:.3f}%")
    shown["pearson_r"] = shown["pearson_r"].map(lambda value: f"{value:.4f}")
    return shown.to_string(index=False) + "\n"


class ExcelFormatter:
    """Excel formatting utilities for evaluation workbooks."""

    def __init__(self):
        self.formats = {}

    def add_formats(self, workbook: xlsxwriter.Workbook) -> None:
        """Add standard formats to workbook."""
        self.formats = {
            'header': workbook.add_format({
                'bold': True,
                'bg_color': '#4472c4',
                'font_color': 'white',
                'align': 'center',
                'valign': 'vcenter',
                'border': 1
            }),
            'good': workbook.add_format({
                'bg_color': '#e6ffe6',
                'num_format': '0.000',
                'border': 1
            }),
            'fair': workbook.add_format({
                'bg_color': '#FFFF00',
                'num_format': '0.000',
                'border': 1
            }),
            'poor': workbook.add_format({
                'bg_color': '#ffe6e6',
                'num_format': '0.000',
                'border': 1
            }),
            'normal': workbook.add_format({
                'border': 1
            }),
            'correlation': workbook.add_format({
                'num_format': '0.0000',
                'border': 1
            }),
            'watts': workbook.add_format({
                'num_format': '0.000000',
                'border': 1
            }),
        }

    def mape_format(self, mape: float):
        if mape < MAPE_GOOD:
            return self.formats['good']
        if mape < MAPE_FAIR:
            return self.formats['fair']
        return self.formats['poor']

    def write_header(self, worksheet: xlsxwriter.worksheet.Worksheet, df: pd.DataFrame) -> None:
        for col_num, column in enumerate(df.columns):
            worksheet.write(0, col_num, column, self.formats['header'])

    def apply_metrics_formatting(self, worksheet: xlsxwriter.worksheet.Worksheet,
                                 df: pd.DataFrame, start_row: int = 1) -> None:
        """Colour MAPE cells by band and format correlation cells."""
        if len(df) == 0:
            return
        mape_col = df.columns.get_loc('mape')
        r_col = df.columns.get_loc('pearson_r')
        for i, (_, row) in enumerate(df.iterrows()):
            row_num = start_row + i
            worksheet.write_number(row_num, mape_col, float(row['mape']), self.mape_format(float(row['mape'])))
            worksheet.write_number(row_num, r_col, float(row['pearson_r']), self.formats['correlation'])

    def apply_points_formatting(self, worksheet: xlsxwriter.worksheet.Worksheet,
                                df: pd.DataFrame, start_row: int = 1) -> None:
        """Watt precision on prediction and label columns."""
        if len(df) == 0:
            return
        for column in ('prediction_w', 'label_w'):
            col = df.columns.get_loc(column)
            worksheet.set_column(col, col, 14, self.formats['watts'])

    def adjust_column_widths(self, worksheet: xlsxwriter.worksheet.Worksheet,
                             df: pd.DataFrame) -> None:
        """Adjust column widths based on content."""
        for i, column in enumerate(df.columns):
            max_length = len(str(column))
            for value in df.iloc[:, i]:
                if pd.notna(value):
                    max_length = max(max_length, len(str(value)))
            worksheet.set_column(i, i, min(max_length + 2, 50))

    def add_color_scale(self, worksheet: xlsxwriter.worksheet.Worksheet,
                        start_row: int, end_row: int, col: int) -> None:
        """Green-to-red scale, low values green."""
        worksheet.conditional_format(
            start_row, col, end_row, col,
            {
                'type': '3_color_scale',
                'min_color': '#63be7b',
                'mid_color': '#ffeb84',
                'max_color': '#f87c7c'
            }
        )
