from dataclasses import dataclass
from typing import Any, Dict, Optional

from effnet_mini.exceptions import UsageError


@dataclass(frozen=True)
class ConfusionCounts:
    """True/false positive/negative tallies at one threshold"""

    tp: int
    tn: int
    fp: int
    fn: int

    def __post_init__(self):
        for name in ("tp", "tn", "fp", "fn"):
            if getattr(self, name) < 0:
                raise UsageError(f"Confusion count {name} must be non-negative, got {getattr(self, name)}")

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn

    @property
    def positives(self) -> int:
        return self.tp + self.fn

    @property
    def negatives(self) -> int:
        return self.tn + self.fp


@dataclass(frozen=True)
class MetricReport:
    """ACC, AUC, SEN, SPE and F-measure; None marks a metric whose denominator is zero"""

    acc: Optional[float]
    auc: Optional[float]
    sen: Optional[float]
    spe: Optional[float]
    f: Optional[float]
    counts: ConfusionCounts
    threshold: float

    @property
    def n(self) -> int:
        return self.counts.total

    def to_dict(self) -> Dict[str, Any]:
        return {
            "acc": self.acc,
            "auc": self.auc,
            "sen": self.sen,
            "spe": self.spe,
            "f": self.f,
            "n": self.n,
            "threshold": self.threshold,
            "tp": self.counts.tp,
            "tn": self.counts.tn,
            "fp": self.counts.fp,
            "fn": self.counts.fn,
        }

    def __str__(self):
        def fmt(value: Optional[float]) -> str:
            return "—" if value is None else f"{value:.4f}"

        return (
            f"ACC {fmt(self.acc)} | AUC {fmt(self.auc)} | SEN {fmt(self.sen)} | SPE {fmt(self.spe)} | "
            f"F {fmt(self.f)} (n={self.n}, threshold={self.threshold})"
        )
