import dataclasses
import logging
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import List, Sequence, Tuple

import pandas as pd

from effnet_mini.exceptions import ConfigurationError, DataError
from effnet_mini.models.configs import ModelConfig, TrainConfig
from effnet_mini.models.dataset import Dataset
from effnet_mini.models.reports import FLAG_NAMES, AblationReport, AblationRow
from effnet_mini.services.evaluation_service import EvaluationService
from effnet_mini.services.training_service import TrainingService

FlagTuple = Tuple[bool, bool, bool, bool]

# (rcc, rds, ff, attention) rows of the standard ablation grid, in report order.
STANDARD_GRID: List[FlagTuple] = [
    (False, False, False, False),
    (True, False, False, False),
    (False, True, False, False),
    (False, False, True, False),
    (False, False, True, True),
    (True, True, False, False),
    (True, True, True, False),
    (True, True, True, True),
    (True, False, True, False),
    (True, False, True, True),
]

_TRUE_MARKS = {"1", "true", "yes", "y", "x", "✓", "√"}
_FALSE_MARKS = {"0", "false", "no", "n", "", "-", "nan"}


def _parse_flag(value, row: int, column: str) -> bool:
    text = str(value).strip().lower()
    if text in _TRUE_MARKS:
        return True
    if text in _FALSE_MARKS:
        return False
    raise ConfigurationError(f"Grid row {row}: {column} value {value!r} is not a flag")


def load_grid(path: Path) -> List[FlagTuple]:
    """Read a CSV grid with rcc, rds, ff and attention columns (1/0, true/false or check marks)"""
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False)
    except FileNotFoundError as e:
        raise DataError(f"Grid file not found: {path}") from e
    missing = [name for name in FLAG_NAMES if name not in frame.columns]
    if missing:
        raise ConfigurationError(f"Grid file {path} is missing columns {missing}")
    grid = []
    for row_number, row in enumerate(frame.itertuples(index=False), start=1):
        values = row._asdict()
        grid.append(tuple(_parse_flag(values[name], row_number, name) for name in FLAG_NAMES))
    if not grid:
        raise ConfigurationError(f"Grid file {path} has no rows")
    return grid


def grid_configs(base: TrainConfig, grid: Sequence[FlagTuple]) -> List[TrainConfig]:
    """One TrainConfig per grid row; every row is validated before any is returned"""
    configs = []
    for index, flags in enumerate(grid, start=1):
        try:
            model = base.model.with_flags(**dict(zip(FLAG_NAMES, flags)))
        except ConfigurationError as e:
            raise ConfigurationError(f"Grid row {index} {dict(zip(FLAG_NAMES, flags))} is invalid: {e}") from e
        configs.append(dataclasses.replace(base, model=model))
    return configs


def _train_row(
    index: int, cfg: TrainConfig, train_ds: Dataset, val_ds: Dataset, output_dir: Path
) -> AblationRow:
    result = TrainingService(output_dir).train(cfg, train_ds, val_ds)
    val = EvaluationService().evaluate_model(result.model, result.pipeline, val_ds)
    final = result.record.final_epoch
    return AblationRow(
        index=index,
        config=cfg.model,
        report=val.report,
        parameter_count=result.record.parameter_count,
        final_train_loss=final.train_loss if final else None,
    )


class AblationService:
    """Service for training one model per flag combination on a shared split"""

    def __init__(self, output_dir: Path, workers: int = 1):
        self.output_dir = Path(output_dir)
        self.workers = max(1, workers)
        self.logger = logging.getLogger("effnet_mini.services.AblationService")

    def ablate(
        self, base: TrainConfig, grid: Sequence[FlagTuple], train_ds: Dataset, val_ds: Dataset
    ) -> AblationReport:
        configs = grid_configs(base, grid)
        self.logger.info(f"Running {len(configs)} ablation rows with {self.workers} worker(s)")
        row_dirs = [self.output_dir / f"row_{index:02d}" for index in range(1, len(configs) + 1)]

        if self.workers == 1:
            rows = [
                _train_row(index, cfg, train_ds, val_ds, row_dir)
                for index, (cfg, row_dir) in enumerate(zip(configs, row_dirs), start=1)
            ]
        else:
            with ProcessPoolExecutor(max_workers=self.workers) as executor:
                futures = [
                    executor.submit(_train_row, index, cfg, train_ds, val_ds, row_dir)
                    for index, (cfg, row_dir) in enumerate(zip(configs, row_dirs), start=1)
                ]
                rows = [future.result() for future in futures]

        rows.sort(key=lambda row: row.index)
        for row in rows:
            self.logger.info(f"Row {row.index} {row.flags}: {row.report}")
        return AblationReport(
            rows=rows,
            seed=base.seed,
            epochs=base.epochs,
            dataset_digest=train_ds.manifest_digest,
            positive_fraction=val_ds.positive_fraction,
        )
