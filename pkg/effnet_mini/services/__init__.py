from effnet_mini.services.ablation_service import STANDARD_GRID, AblationService, grid_configs, load_grid
from effnet_mini.services.dataset_service import DatasetService, generate_synthetic, load_dataset, split_dataset
from effnet_mini.services.evaluation_service import EvaluationResult, EvaluationService, evaluate, predict_scores
from effnet_mini.services.gradcheck_service import GradcheckOutcome, GradcheckService
from effnet_mini.services.training_service import TrainingResult, TrainingService, lr_at

__all__ = [
    "AblationService",
    "DatasetService",
    "EvaluationService",
    "GradcheckService",
    "TrainingService",
    "EvaluationResult",
    "GradcheckOutcome",
    "TrainingResult",
    "STANDARD_GRID",
    "evaluate",
    "generate_synthetic",
    "grid_configs",
    "load_dataset",
    "load_grid",
    "lr_at",
    "predict_scores",
    "split_dataset",
]
