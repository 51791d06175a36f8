import dataclasses
import logging
import time
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional

import numpy as np

from effnet_mini.augment import AugmentPipeline, channel_stats
from effnet_mini.exceptions import CheckpointError, NumericalError, UsageError
from effnet_mini.metrics import auc, confusion, report
from effnet_mini.models.configs import TrainConfig
from effnet_mini.models.dataset import Dataset
from effnet_mini.models.run_record import EpochRecord, RunRecord
from effnet_mini.network import (
    Checkpoint,
    EffNetMini,
    TrainingState,
    build_model,
    count_parameters,
    load_checkpoint,
    load_parameters,
    save_checkpoint,
)
from effnet_mini.nn import Adam
from effnet_mini.services.evaluation_service import EvaluationService
from effnet_mini.tensor import Tensor, binary_cross_entropy_with_logits, sigmoid
from effnet_mini.utils.rng import derive_seed, substream

CHECKPOINT_NAME = "checkpoint.efnm"
RUN_RECORD_NAME = "run_record.json"
# Tag mixed into the run seed for the per-epoch shuffle stream.
SHUFFLE_STREAM = 4


def lr_at(epoch: int, cfg: TrainConfig) -> float:
    """Base rate divided by the decay factor once for every milestone already reached"""
    if not 0 <= epoch < cfg.epochs:
        raise UsageError(f"epoch {epoch} is outside [0, {cfg.epochs})")
    passed = sum(1 for milestone in cfg.milestones if epoch >= milestone)
    return cfg.base_lr / cfg.lr_decay_factor**passed


@dataclass
class TrainingResult:
    record: RunRecord
    model: EffNetMini
    checkpoint_path: Path
    pipeline: AugmentPipeline


class TrainingService:
    """Service for training EffNet-mini with Adam and the milestone learning-rate schedule"""

    def __init__(self, output_dir: Path, chart_generator=None):
        self.output_dir = Path(output_dir)
        self.chart_generator = chart_generator
        self.evaluation_service = EvaluationService()
        self.logger = logging.getLogger("effnet_mini.services.TrainingService")

    def train(
        self, cfg: TrainConfig, train_ds: Dataset, val_ds: Dataset, resume: Optional[Path] = None
    ) -> TrainingResult:
        """Train from cfg.seed; every epoch ends with validation, a checkpoint and the run record"""
        if len(train_ds) == 0 or len(val_ds) == 0:
            raise UsageError(f"Training needs nonempty datasets, got {len(train_ds)} train / {len(val_ds)} validation")
        self.output_dir.mkdir(parents=True, exist_ok=True)
        started = time.perf_counter()

        checkpoint = load_checkpoint(Path(resume)) if resume is not None else None
        if checkpoint is None:
            mean, std = channel_stats(train_ds.patches)
        else:
            mean, std = checkpoint.normalization
        augment = dataclasses.replace(cfg.augment, channel_mean=mean, channel_std=std)
        pipeline = AugmentPipeline(augment, rcc=cfg.model.rcc)
        model = build_model(cfg.model)
        optimizer = Adam(model.parameters(), beta1=cfg.beta1, beta2=cfg.beta2, eps=cfg.adam_eps)

        record = RunRecord(
            config=cfg.to_dict(),
            seed=cfg.seed,
            dataset_digest=train_ds.manifest_digest,
            parameter_count=count_parameters(model),
        )
        start_epoch = 0
        if checkpoint is not None:
            start_epoch = self._resume(Path(resume), checkpoint, model, optimizer, record, cfg)

        checkpoint_path = self.output_dir / CHECKPOINT_NAME
        labels = train_ds.labels
        self.logger.info(
            f"Training {cfg.model.flags} for {cfg.epochs} epochs on {len(train_ds)} patches "
            f"({record.parameter_count} parameters, milestones {cfg.milestones})"
        )
        for epoch in range(start_epoch, cfg.epochs):
            lr = lr_at(epoch, cfg)
            order = substream(derive_seed(cfg.seed, SHUFFLE_STREAM), epoch).permutation(len(train_ds))
            epoch_loss = 0.0
            epoch_scores: List[np.ndarray] = []
            for start in range(0, len(order), cfg.batch_size):
                indices = order[start : start + cfg.batch_size]
                loss, scores = self._step(model, optimizer, pipeline, train_ds, labels, indices, epoch, lr)
                epoch_loss += loss * len(indices)
                epoch_scores.append(scores)
                self.logger.debug(f"epoch {epoch} step {optimizer.step_count}: loss {loss:.5f}")

            train_scores = np.concatenate(epoch_scores)
            train_labels = labels[order]
            train_report = report(confusion(train_scores, train_labels), auc(train_scores, train_labels))
            val_report = self.evaluation_service.evaluate_model(model, pipeline, val_ds).report
            epoch_record = EpochRecord(
                epoch=epoch,
                lr=lr,
                train_loss=epoch_loss / len(order),
                train_acc=train_report.acc,
                train_auc=train_report.auc,
                val_acc=val_report.acc,
                val_auc=val_report.auc,
            )
            record.epochs.append(epoch_record)
            self.logger.info(
                f"Epoch {epoch + 1}/{cfg.epochs} lr {lr:g} loss {epoch_record.train_loss:.4f} "
                f"val ACC {val_report.acc} AUC {val_report.auc}"
            )

            state = TrainingState(
                epoch=epoch + 1,
                step=optimizer.step_count,
                first_moments=optimizer.first_moments,
                second_moments=optimizer.second_moments,
            )
            save_checkpoint(checkpoint_path, model, normalization=(mean, std), state=state)
            record.checkpoint_path = str(checkpoint_path)

        if record.checkpoint_path is None:
            state = TrainingState(
                epoch=start_epoch,
                step=optimizer.step_count,
                first_moments=optimizer.first_moments,
                second_moments=optimizer.second_moments,
            )
            save_checkpoint(checkpoint_path, model, normalization=(mean, std), state=state)
            record.checkpoint_path = str(checkpoint_path)

        record.wall_time_s = time.perf_counter() - started
        record.save(self.output_dir / RUN_RECORD_NAME)
        self.logger.info(f"Saved run record to {self.output_dir / RUN_RECORD_NAME}")
        if self.chart_generator is not None:
            self.chart_generator.training_curves(record, self.output_dir / "training_curves.png")
        return TrainingResult(record=record, model=model, checkpoint_path=checkpoint_path, pipeline=pipeline)

    def _step(
        self,
        model: EffNetMini,
        optimizer: Adam,
        pipeline: AugmentPipeline,
        dataset: Dataset,
        labels: np.ndarray,
        indices: np.ndarray,
        epoch: int,
        lr: float,
    ):
        step = optimizer.step_count + 1
        try:
            batch = pipeline.batch(dataset.patches, indices, epoch, train=True)
            targets = Tensor(labels[indices].reshape(-1, 1).astype(np.float64))
            logits = model(batch)
            loss = binary_cross_entropy_with_logits(logits, targets)
            scores = sigmoid(logits.detach()).data.reshape(-1)
            optimizer.zero_grad()
            loss.backward()
        except NumericalError as e:
            self.logger.error(f"Training diverged at epoch {epoch} step {step}")
            raise NumericalError(f"Training diverged at epoch {epoch} step {step}: {e}") from e
        for name, parameter in model.named_parameters():
            if parameter.grad is not None and not np.all(np.isfinite(parameter.grad)):
                self.logger.error(f"Training diverged at epoch {epoch} step {step}")
                raise NumericalError(f"Training diverged at epoch {epoch} step {step}: non-finite gradient for {name}")
        optimizer.step(lr)
        return loss.item(), scores

    def _resume(
        self,
        path: Path,
        checkpoint: Checkpoint,
        model: EffNetMini,
        optimizer: Adam,
        record: RunRecord,
        cfg: TrainConfig,
    ) -> int:
        """Restore weights and optimizer state; normalization comes from the checkpoint, not the new data"""
        if checkpoint.state is None:
            raise CheckpointError(f"Checkpoint {path} holds no training state to resume from")
        load_parameters(model, checkpoint)
        optimizer.load_state_dict(
            {
                "step_count": checkpoint.state.step,
                "first_moments": checkpoint.state.first_moments,
                "second_moments": checkpoint.state.second_moments,
            }
        )
        start_epoch = checkpoint.state.epoch
        if start_epoch > cfg.epochs:
            raise UsageError(f"Checkpoint {path} is at epoch {start_epoch}, past the configured {cfg.epochs} epochs")
        previous = path.parent / RUN_RECORD_NAME
        if previous.is_file():
            previous_record = RunRecord.load(previous)
            if previous_record.dataset_digest != record.dataset_digest:
                self.logger.warning(
                    f"Resuming on dataset {record.dataset_digest[:12]} but {path} was trained on "
                    f"{previous_record.dataset_digest[:12]}"
                )
            record.epochs.extend(previous_record.epochs[:start_epoch])
        self.logger.info(f"Resuming from {path} at epoch {start_epoch} (step {checkpoint.state.step})")
        return start_epoch
