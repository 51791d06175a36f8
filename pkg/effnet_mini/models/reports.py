from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from effnet_mini.models.configs import ModelConfig
from effnet_mini.models.metric_report import MetricReport

FLAG_NAMES = ("rcc", "rds", "ff", "attention")


@dataclass
class EvaluationRow:
    """One machine-readable evaluation record for a data split"""

    split: str
    flags: Dict[str, bool]
    report: MetricReport
    positive_fraction: float

    def to_record(self) -> Dict[str, Any]:
        record: Dict[str, Any] = {"split": self.split}
        record.update({name: self.flags[name] for name in FLAG_NAMES})
        record["pos_fraction"] = self.positive_fraction
        metrics = self.report.to_dict()
        for key in ("acc", "auc", "sen", "spe", "f", "n", "threshold"):
            record[key] = metrics[key]
        return record


@dataclass
class ComparisonRow:
    """A training/test summary line for one model, laid out like a method comparison table"""

    name: str
    test: MetricReport
    train: Optional[MetricReport] = None


@dataclass
class AblationRow:
    """Validation result of one configuration from an ablation grid"""

    index: int
    config: ModelConfig
    report: MetricReport
    parameter_count: int
    final_train_loss: Optional[float] = None

    @property
    def flags(self) -> Dict[str, bool]:
        return self.config.flags

    def to_record(self) -> Dict[str, Any]:
        record: Dict[str, Any] = {"row": self.index}
        record.update(self.flags)
        record.update(
            {
                "acc": self.report.acc,
                "auc": self.report.auc,
                "sen": self.report.sen,
                "spe": self.report.spe,
                "f": self.report.f,
                "n": self.report.n,
                "threshold": self.report.threshold,
                "parameters": self.parameter_count,
            }
        )
        return record


@dataclass
class AblationReport:
    """Rows of an ablation run, in grid order"""

    rows: List[AblationRow] = field(default_factory=list)
    seed: int = 0
    epochs: int = 0
    dataset_digest: str = ""
    positive_fraction: Optional[float] = None

    def __len__(self) -> int:
        return len(self.rows)
