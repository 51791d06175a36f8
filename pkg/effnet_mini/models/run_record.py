import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

from effnet_mini.exceptions import CheckpointError


@dataclass
class EpochRecord:
    """Loss and metrics logged at the end of one epoch"""

    epoch: int
    lr: float
    train_loss: float
    train_acc: Optional[float]
    train_auc: Optional[float]
    val_acc: Optional[float]
    val_auc: Optional[float]


@dataclass
class RunRecord:
    """Everything needed to account for one training run"""

    config: Dict[str, Any]
    seed: int
    dataset_digest: str
    parameter_count: int
    epochs: List[EpochRecord] = field(default_factory=list)
    wall_time_s: float = 0.0
    checkpoint_path: Optional[str] = None

    @property
    def final_epoch(self) -> Optional[EpochRecord]:
        return self.epochs[-1] if self.epochs else None

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunRecord":
        values = dict(data)
        values["epochs"] = [EpochRecord(**epoch) for epoch in values.get("epochs", [])]
        return cls(**values)

    def save(self, path: Path) -> None:
        path = Path(path)
        try:
            path.write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True), encoding="utf-8")
        except OSError as e:
            raise CheckpointError(f"Could not write run record {path}: {e}") from e

    @classmethod
    def load(cls, path: Path) -> "RunRecord":
        path = Path(path)
        try:
            return cls.from_dict(json.loads(path.read_text(encoding="utf-8")))
        except OSError as e:
            raise CheckpointError(f"Could not read run record {path}: {e}") from e
        except (ValueError, TypeError) as e:
            raise CheckpointError(f"Run record {path} is malformed: {e}") from e
