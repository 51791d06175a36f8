from abc import ABC, abstractmethod
from typing import List, Optional

from effnet_mini.models.reports import AblationReport, ComparisonRow, EvaluationRow

UNDEFINED = "—"


def percent(value: Optional[float]) -> str:
    """Metric in [0, 1] as a percentage with two decimals, or the undefined marker"""
    return UNDEFINED if value is None else f"{100.0 * value:.2f}"


class ReportGenerator(ABC):
    """Base class for metric report generators"""

    @abstractmethod
    def generate_evaluation_report(self, rows: List[EvaluationRow]) -> str:
        """One line per evaluated split"""
        pass

    @abstractmethod
    def generate_comparison_report(self, rows: List[ComparisonRow]) -> str:
        """Training and test metrics per model"""
        pass

    @abstractmethod
    def generate_ablation_report(self, report: AblationReport) -> str:
        """Flag columns with ACC and AUC per grid row"""
        pass
