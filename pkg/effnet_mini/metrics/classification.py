"""Binary classification metrics: confusion tallies, ACC/SEN/SPE/F and rank-based AUC"""

import logging
from typing import Optional, Sequence

import numpy as np
from scipy.stats import rankdata

from effnet_mini.exceptions import DataError, UsageError
from effnet_mini.models.metric_report import ConfusionCounts, MetricReport

logger = logging.getLogger(__name__)

DEFAULT_THRESHOLD = 0.5


def _validate(scores: Sequence[float], labels: Sequence[int]):
    scores = np.asarray(scores, dtype=np.float64).reshape(-1)
    labels = np.asarray(labels).reshape(-1)
    if scores.size == 0:
        raise UsageError("Metrics need at least one (score, label) pair")
    if scores.size != labels.size:
        raise UsageError(f"Got {scores.size} scores but {labels.size} labels")
    invalid = ~np.isin(labels, (0, 1))
    if np.any(invalid):
        position = int(np.argmax(invalid))
        raise DataError(f"Label at position {position} is {labels[position]}, expected 0 or 1")
    return scores, labels.astype(np.int64)


def confusion(scores: Sequence[float], labels: Sequence[int], threshold: float = DEFAULT_THRESHOLD) -> ConfusionCounts:
    """Tally predictions where score >= threshold counts as positive"""
    scores, labels = _validate(scores, labels)
    predicted = scores >= threshold
    actual = labels == 1
    return ConfusionCounts(
        tp=int(np.sum(predicted & actual)),
        tn=int(np.sum(~predicted & ~actual)),
        fp=int(np.sum(predicted & ~actual)),
        fn=int(np.sum(~predicted & actual)),
    )


def _ratio(numerator: int, denominator: int) -> Optional[float]:
    return None if denominator == 0 else numerator / denominator


def report(counts: ConfusionCounts, auc: Optional[float], threshold: float = DEFAULT_THRESHOLD) -> MetricReport:
    """Accuracy, sensitivity, specificity and F-measure from counts; zero denominators give None"""
    return MetricReport(
        acc=_ratio(counts.tp + counts.tn, counts.total),
        auc=auc,
        sen=_ratio(counts.tp, counts.tp + counts.fn),
        spe=_ratio(counts.tn, counts.tn + counts.fp),
        f=_ratio(2 * counts.tp, 2 * counts.tp + counts.fn + counts.fp),
        counts=counts,
        threshold=threshold,
    )


def auc(scores: Sequence[float], labels: Sequence[int]) -> Optional[float]:
    """Probability a random positive outscores a random negative, ties counting one half.

    Computed from average ranks (Mann-Whitney U). Returns None when only one class is present.
    """
    scores, labels = _validate(scores, labels)
    n_pos = int(labels.sum())
    n_neg = labels.size - n_pos
    if n_pos == 0 or n_neg == 0:
        logger.warning(f"AUC is undefined with {n_pos} positive and {n_neg} negative samples")
        return None
    ranks = rankdata(scores, method="average")
    rank_sum = float(ranks[labels == 1].sum())
    return (rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def evaluate_scores(
    scores: Sequence[float], labels: Sequence[int], threshold: float = DEFAULT_THRESHOLD
) -> MetricReport:
    """Full metric report for one set of scores"""
    return report(confusion(scores, labels, threshold), auc(scores, labels), threshold)
