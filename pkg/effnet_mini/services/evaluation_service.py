import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List

import numpy as np

from effnet_mini.augment import AugmentPipeline
from effnet_mini.exceptions import UsageError
from effnet_mini.metrics import DEFAULT_THRESHOLD, evaluate_scores
from effnet_mini.models.configs import AugmentConfig, ModelConfig
from effnet_mini.models.dataset import Dataset
from effnet_mini.models.metric_report import MetricReport
from effnet_mini.network import EffNetMini, load_checkpoint, restore_model
from effnet_mini.tensor import no_grad, sigmoid

DEFAULT_EVAL_BATCH = 64


@dataclass
class EvaluationResult:
    """Metrics plus the per-patch scores they were computed from"""

    report: MetricReport
    scores: np.ndarray
    labels: np.ndarray
    source_ids: List[str]
    config: ModelConfig
    positive_fraction: float


def predict_scores(
    model: EffNetMini, pipeline: AugmentPipeline, dataset: Dataset, batch_size: int = DEFAULT_EVAL_BATCH
) -> np.ndarray:
    """Sigmoid probabilities for every patch, without augmentation or graph recording"""
    if len(dataset) == 0:
        raise UsageError("Cannot score an empty dataset")
    scores = []
    with no_grad():
        for start in range(0, len(dataset), batch_size):
            indices = range(start, min(start + batch_size, len(dataset)))
            logits = model(pipeline.batch(dataset.patches, indices, epoch=0, train=False))
            scores.append(sigmoid(logits).data.reshape(-1))
    return np.concatenate(scores)


class EvaluationService:
    """Service for scoring datasets with trained checkpoints"""

    def __init__(self, batch_size: int = DEFAULT_EVAL_BATCH):
        self.batch_size = batch_size
        self.logger = logging.getLogger("effnet_mini.services.EvaluationService")

    def evaluate_model(
        self, model: EffNetMini, pipeline: AugmentPipeline, dataset: Dataset, threshold: float = DEFAULT_THRESHOLD
    ) -> EvaluationResult:
        scores = predict_scores(model, pipeline, dataset, self.batch_size)
        labels = dataset.labels
        report = evaluate_scores(scores, labels, threshold)
        return EvaluationResult(
            report=report,
            scores=scores,
            labels=labels,
            source_ids=[p.source_id for p in dataset.patches],
            config=model.config,
            positive_fraction=dataset.positive_fraction,
        )

    def evaluate(
        self, checkpoint_path: Path, dataset: Dataset, threshold: float = DEFAULT_THRESHOLD
    ) -> EvaluationResult:
        """Load a checkpoint (refusing digest mismatches) and report its metrics on dataset"""
        checkpoint = load_checkpoint(checkpoint_path)
        model = restore_model(checkpoint)
        mean, std = checkpoint.normalization
        pipeline = AugmentPipeline(AugmentConfig(channel_mean=mean, channel_std=std), rcc=False)
        self.logger.info(f"Evaluating {checkpoint_path} on {dataset}")
        result = self.evaluate_model(model, pipeline, dataset, threshold)
        self.logger.info(f"Evaluation: {result.report}")
        return result


def evaluate(checkpoint_path: Path, dataset: Dataset, threshold: float = DEFAULT_THRESHOLD) -> MetricReport:
    return EvaluationService().evaluate(checkpoint_path, dataset, threshold).report
