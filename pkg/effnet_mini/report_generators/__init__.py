from .base_generator import ReportGenerator
from .chart_generator import ChartGenerator
from .console_generator import ConsoleReportGenerator
from .csv_generator import CsvReportGenerator

__all__ = ["ReportGenerator", "ConsoleReportGenerator", "CsvReportGenerator", "ChartGenerator"]
