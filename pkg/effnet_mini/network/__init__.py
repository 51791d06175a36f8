from effnet_mini.network.checkpoint import (
    Checkpoint,
    TrainingState,
    file_digest,
    load_checkpoint,
    load_parameters,
    restore_model,
    save_checkpoint,
)
from effnet_mini.network.effnet_mini import (
    EffNetMini,
    build_model,
    count_parameters,
    feature_shapes,
    forward,
    parameter_table,
)

__all__ = [
    "Checkpoint",
    "EffNetMini",
    "TrainingState",
    "build_model",
    "count_parameters",
    "feature_shapes",
    "file_digest",
    "forward",
    "load_checkpoint",
    "load_parameters",
    "parameter_table",
    "restore_model",
    "save_checkpoint",
]
