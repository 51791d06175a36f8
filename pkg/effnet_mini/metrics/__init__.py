from effnet_mini.metrics.classification import DEFAULT_THRESHOLD, auc, confusion, evaluate_scores, report

__all__ = ["DEFAULT_THRESHOLD", "auc", "confusion", "evaluate_scores", "report"]
