"""Reports: CSV files, console tables and Excel workbooks."""
