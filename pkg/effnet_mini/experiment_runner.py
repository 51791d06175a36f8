"""Main controller class for effnet-mini experiments"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import pandas as pd

from effnet_mini.exceptions import DataError, UsageError
from effnet_mini.models import (
    AblationReport,
    ComparisonRow,
    Dataset,
    EvaluationRow,
    SynthSpec,
    TrainConfig,
)
from effnet_mini.network import parameter_table
from effnet_mini.report_generators import ChartGenerator, ConsoleReportGenerator, CsvReportGenerator
from effnet_mini.services.ablation_service import AblationService, FlagTuple
from effnet_mini.services.dataset_service import DatasetService
from effnet_mini.services.evaluation_service import EvaluationResult, EvaluationService
from effnet_mini.services.gradcheck_service import DEFAULT_INSTANCES, GradcheckOutcome, GradcheckService
from effnet_mini.services.training_service import TrainingResult, TrainingService


@dataclass
class TrainSummary:
    """Result of a train run plus the metrics reported for it"""

    result: TrainingResult
    train: EvaluationResult
    validation: EvaluationResult

    def __str__(self) -> str:
        return (
            f"Parameters: {self.result.record.parameter_count}\n"
            f"Train: {self.train.report}\n"
            f"Validation: {self.validation.report}\n"
            f"Checkpoint: {self.result.checkpoint_path}"
        )


class ExperimentRunner:
    """Main controller class for generating data, training, evaluating and ablating EffNet-mini models"""

    def __init__(self, output_dir: str, plots: bool = True, workers: int = 1, dataset_workers: int = 4):
        """Initialize the ExperimentRunner

        Args:
            output_dir (str): Directory where checkpoints, run records and reports are saved
            plots (bool): Whether matplotlib charts are written next to the reports
            workers (int): Process workers used by ablation runs
            dataset_workers (int): Threads used to decode image files
        """
        self.output_dir = Path(output_dir)
        self.logger = logging.getLogger("effnet_mini.experiment_runner")
        self.console_generator = ConsoleReportGenerator()
        self.csv_generator = CsvReportGenerator()
        self.chart_generator = ChartGenerator() if plots else None
        self.dataset_service = DatasetService(workers=dataset_workers)
        self.evaluation_service = EvaluationService()
        self.workers = workers
        self._setup_directories()

    def _setup_directories(self) -> None:
        """Create the output directory and its reports subdirectory"""
        self.output_dir.mkdir(parents=True, exist_ok=True)
        (self.output_dir / "reports").mkdir(exist_ok=True)

    @property
    def reports_dir(self) -> Path:
        return self.output_dir / "reports"

    def gen_data(self, spec: SynthSpec, out_dir: Optional[Path] = None) -> Dataset:
        """Generate a synthetic dataset and write it as PPM files plus labels.csv"""
        dataset = self.dataset_service.generate_synthetic(spec)
        target = Path(out_dir) if out_dir is not None else self.output_dir / "data"
        self.dataset_service.write_dataset(dataset, target)
        self.logger.info(f"Saved {dataset} to {target}")
        return dataset

    def prepare_datasets(
        self,
        data_dir: Optional[Path] = None,
        synthetic: Optional[SynthSpec] = None,
        train_fraction: float = 0.8,
        seed: int = 0,
    ) -> Tuple[Dataset, Dataset]:
        """Load or generate the patches and split them into train and validation"""
        if synthetic is not None:
            dataset = self.dataset_service.generate_synthetic(synthetic)
        elif data_dir is not None:
            dataset = self.dataset_service.load_dataset(Path(data_dir))
        else:
            raise UsageError("Either a data directory or a synthetic spec is required")
        return self.dataset_service.split_dataset(dataset, train_fraction, seed)

    def train(
        self, cfg: TrainConfig, train_ds: Dataset, val_ds: Dataset, resume: Optional[Path] = None
    ) -> TrainSummary:
        """Train one configuration and save its checkpoint, run record and metric reports"""
        service = TrainingService(self.output_dir, chart_generator=self.chart_generator)
        result = service.train(cfg, train_ds, val_ds, resume=resume)

        table = parameter_table(result.model)
        for group, count in table.items():
            self.logger.info(f"{group:<12} {count:>8}")
        self._write(
            "parameters.csv",
            pd.DataFrame({"group": list(table), "parameters": list(table.values())}).to_csv(
                index=False, lineterminator="\n"
            ),
        )

        train_eval = self.evaluation_service.evaluate_model(result.model, result.pipeline, train_ds)
        val_eval = self.evaluation_service.evaluate_model(result.model, result.pipeline, val_ds)
        flags = cfg.model.flags
        rows = [
            EvaluationRow("train", flags, train_eval.report, train_eval.positive_fraction),
            EvaluationRow("validation", flags, val_eval.report, val_eval.positive_fraction),
        ]
        comparison = [ComparisonRow(name=self._model_name(flags), test=val_eval.report, train=train_eval.report)]
        self._write_reports("evaluation", self.console_generator.generate_evaluation_report(rows), rows=rows)
        comparison_text = self.console_generator.generate_comparison_report(comparison)
        self._write_reports("comparison", comparison_text, comparison=comparison)
        return TrainSummary(result=result, train=train_eval, validation=val_eval)

    def evaluate(self, checkpoint_path: Path, data_dir: Path, threshold: float = 0.5) -> EvaluationResult:
        """Score a dataset with a checkpoint and write the metrics and per-patch scores"""
        dataset = self.dataset_service.load_dataset(Path(data_dir))
        result = self.evaluation_service.evaluate(Path(checkpoint_path), dataset, threshold)
        rows = [EvaluationRow("test", result.config.flags, result.report, result.positive_fraction)]
        self._write_reports("evaluation", self.console_generator.generate_evaluation_report(rows), rows=rows)
        scores = pd.DataFrame({"source_id": result.source_ids, "score": result.scores, "label": result.labels})
        self._write("scores.csv", scores.to_csv(index=False, lineterminator="\n"))
        return result

    def ablate(
        self, base: TrainConfig, grid: Sequence[FlagTuple], train_ds: Dataset, val_ds: Dataset
    ) -> AblationReport:
        """Train every grid row on the same split and write the ablation table"""
        report = AblationService(self.output_dir, workers=self.workers).ablate(base, grid, train_ds, val_ds)
        self._write("ablation.txt", self.console_generator.generate_ablation_report(report))
        self._write("ablation.csv", self.csv_generator.generate_ablation_report(report))
        if self.chart_generator is not None:
            self.chart_generator.ablation_chart(report, self.reports_dir / "ablation.png")
        return report

    def gradcheck(
        self, names: Optional[Sequence[str]] = None, instances: int = DEFAULT_INSTANCES, seed: int = 0
    ) -> List[GradcheckOutcome]:
        """Check the named ops (all when None) against finite differences"""
        outcomes = GradcheckService(seed=seed).run(names, instances)
        failed = [outcome.name for outcome in outcomes if not outcome.passed]
        if failed:
            self.logger.error(f"Gradient check failed for {', '.join(failed)}")
        else:
            self.logger.info(f"Gradient check passed for {len(outcomes)} ops")
        return outcomes

    def _write_reports(
        self,
        name: str,
        text: str,
        rows: Optional[List[EvaluationRow]] = None,
        comparison: Optional[List[ComparisonRow]] = None,
    ) -> None:
        self._write(f"{name}.txt", text)
        if rows is not None:
            self._write(f"{name}.csv", self.csv_generator.generate_evaluation_report(rows))
        if comparison is not None:
            self._write(f"{name}.csv", self.csv_generator.generate_comparison_report(comparison))

    def _write(self, file_name: str, content: str) -> Path:
        path = self.reports_dir / file_name
        try:
            path.write_text(content, encoding="utf-8")
        except OSError as e:
            raise DataError(f"Could not write report {path}: {e}") from e
        self.logger.info(f"Saved {file_name} to {path}")
        return path

    @staticmethod
    def _model_name(flags) -> str:
        enabled = [name for name, on in flags.items() if on]
        return "EffNet-mini" + (f" +{'+'.join(enabled)}" if enabled else "")
