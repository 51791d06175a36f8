"""Data models for effnet-mini"""

from effnet_mini.models.configs import (
    DEFAULT_STAGES,
    DEFAULT_TAPS,
    AugmentConfig,
    BlockSpec,
    ModelConfig,
    PaddingMode,
    StageSpec,
    SynthSpec,
    TrainConfig,
)
from effnet_mini.models.dataset import SYNTHETIC_ROOT, Dataset
from effnet_mini.models.image_patch import CENTER_SIDE, PATCH_SIDE, ImagePatch
from effnet_mini.models.metric_report import ConfusionCounts, MetricReport
from effnet_mini.models.reports import AblationReport, AblationRow, ComparisonRow, EvaluationRow
from effnet_mini.models.run_record import EpochRecord, RunRecord

__all__ = [
    "AblationReport",
    "AblationRow",
    "AugmentConfig",
    "BlockSpec",
    "CENTER_SIDE",
    "ComparisonRow",
    "ConfusionCounts",
    "DEFAULT_STAGES",
    "DEFAULT_TAPS",
    "Dataset",
    "EpochRecord",
    "EvaluationRow",
    "ImagePatch",
    "MetricReport",
    "ModelConfig",
    "PATCH_SIDE",
    "PaddingMode",
    "RunRecord",
    "SYNTHETIC_ROOT",
    "StageSpec",
    "SynthSpec",
    "TrainConfig",
]
