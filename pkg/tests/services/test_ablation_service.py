"""Unit tests for the AblationService class and grid helpers."""

import tempfile
import unittest
from pathlib import Path
from unittest.mock import MagicMock, patch

from effnet_mini.exceptions import ConfigurationError, DataError
from effnet_mini.models import (
    AugmentConfig,
    ConfusionCounts,
    Dataset,
    MetricReport,
    ModelConfig,
    StageSpec,
    SynthSpec,
    TrainConfig,
)
from effnet_mini.services.ablation_service import STANDARD_GRID, AblationService, grid_configs, load_grid
from effnet_mini.services.dataset_service import DatasetService

SMALL = ModelConfig(
    stem_channels=8,
    stages=(StageSpec(1, 8, 2, 1, 3), StageSpec(1, 16, 2, 2, 3), StageSpec(1, 16, 2, 2, 3), StageSpec(1, 16, 2, 2, 3)),
    tap_indices=(1, 2),
)


def fake_report(acc: float) -> MetricReport:
    return MetricReport(
        acc=acc, auc=0.9, sen=1.0, spe=0.5, f=0.8, counts=ConfusionCounts(tp=2, tn=1, fp=1, fn=0), threshold=0.5
    )


class TestGrid(unittest.TestCase):
    """Test cases for ablation grids."""

    def setUp(self):
        self.temp_dir = tempfile.TemporaryDirectory()
        self.path = Path(self.temp_dir.name) / "grid.csv"

    def tearDown(self):
        self.temp_dir.cleanup()

    def test_published_grid_rows_are_valid(self):
        configs = grid_configs(TrainConfig(), STANDARD_GRID)

        self.assertEqual(len(configs), 10)
        self.assertEqual(configs[0].model.flags, {"rcc": False, "rds": False, "ff": False, "attention": False})
        self.assertEqual(configs[-1].model.flags, {"rcc": True, "rds": False, "ff": True, "attention": True})
        self.assertTrue(all(cfg.seed == 0 for cfg in configs))

    def test_invalid_row_is_rejected_with_its_index(self):
        with self.assertRaises(ConfigurationError) as ctx:
            grid_configs(TrainConfig(), [(True, True, True, True), (False, False, False, True)])
        self.assertIn("Grid row 2", str(ctx.exception))

    def test_load_grid_accepts_marks(self):
        self.path.write_text("rcc,rds,ff,attention\n√,,√,√\n0,1,false,no\n", encoding="utf-8")

        grid = load_grid(self.path)

        self.assertEqual(grid, [(True, False, True, True), (False, True, False, False)])

    def test_load_grid_missing_column(self):
        self.path.write_text("rcc,rds,ff\n1,1,1\n", encoding="utf-8")

        with self.assertRaises(ConfigurationError):
            load_grid(self.path)

    def test_load_grid_bad_value(self):
        self.path.write_text("rcc,rds,ff,attention\nmaybe,1,1,1\n", encoding="utf-8")

        with self.assertRaises(ConfigurationError) as ctx:
            load_grid(self.path)
        self.assertIn("row 1", str(ctx.exception))

    def test_load_grid_missing_file(self):
        with self.assertRaises(DataError):
            load_grid(self.path)


class TestAblationService(unittest.TestCase):
    """Test cases for the AblationService class."""

    def setUp(self):
        self.temp_dir = tempfile.TemporaryDirectory()
        self.service = AblationService(Path(self.temp_dir.name))
        self.train_ds = Dataset(patches=[], root="memory", manifest_digest="ab" * 32)
        self.val_ds = Dataset(patches=[], root="memory", manifest_digest="ab" * 32)

    def tearDown(self):
        self.temp_dir.cleanup()

    @patch("effnet_mini.services.ablation_service.EvaluationService")
    @patch("effnet_mini.services.ablation_service.TrainingService")
    def test_rows_follow_grid_order(self, mock_training_class, mock_evaluation_class):
        # Arrange
        result = MagicMock()
        result.record.parameter_count = 1234
        result.record.final_epoch.train_loss = 0.25
        mock_training_class.return_value.train.return_value = result
        mock_evaluation_class.return_value.evaluate_model.side_effect = [
            MagicMock(report=fake_report(0.6)),
            MagicMock(report=fake_report(0.7)),
        ]
        grid = [(False, False, False, False), (True, True, True, True)]

        # Act
        report = self.service.ablate(TrainConfig(seed=3, epochs=2), grid, self.train_ds, self.val_ds)

        # Assert
        self.assertEqual(len(report), 2)
        self.assertEqual([row.index for row in report.rows], [1, 2])
        self.assertEqual(report.rows[0].flags["rcc"], False)
        self.assertEqual(report.rows[1].flags["attention"], True)
        self.assertEqual([row.report.acc for row in report.rows], [0.6, 0.7])
        self.assertEqual(report.rows[0].parameter_count, 1234)
        self.assertEqual((report.seed, report.epochs, report.dataset_digest), (3, 2, "ab" * 32))
        self.assertEqual(report.positive_fraction, 0.0)
        self.assertEqual(mock_training_class.return_value.train.call_count, 2)
        trained_seeds = {call.args[0].seed for call in mock_training_class.return_value.train.call_args_list}
        self.assertEqual(trained_seeds, {3})

    @patch("effnet_mini.services.ablation_service.TrainingService")
    def test_invalid_grid_trains_nothing(self, mock_training_class):
        with self.assertRaises(ConfigurationError):
            self.service.ablate(
                TrainConfig(), [(True, True, True, True), (True, True, False, True)], self.train_ds, self.val_ds
            )

        mock_training_class.assert_not_called()


class TestAblationOrder(unittest.TestCase):
    """Rows of a small real ablation do not depend on where they sit in the grid."""

    def test_reversed_grid_gives_identical_rows(self):
        # Arrange
        service = DatasetService(workers=1)
        train_ds, val_ds = service.split_dataset(service.generate_synthetic(SynthSpec(n=20, seed=5)), 0.8, 5)
        base = TrainConfig(model=SMALL, augment=AugmentConfig(seed=5), epochs=1, batch_size=8, seed=5)
        grid = [(False, False, False, False), (True, True, True, True), (True, False, True, False)]

        # Act
        with tempfile.TemporaryDirectory() as tmp:
            forward = AblationService(Path(tmp) / "forward").ablate(base, grid, train_ds, val_ds)
            backward = AblationService(Path(tmp) / "backward").ablate(base, grid[::-1], train_ds, val_ds)

        # Assert
        by_flags = {tuple(row.flags.values()): row for row in backward.rows}
        for row in forward.rows:
            twin = by_flags[tuple(row.flags.values())]
            self.assertEqual(row.report, twin.report)
            self.assertEqual(row.final_train_loss, twin.final_train_loss)
            self.assertEqual(row.parameter_count, twin.parameter_count)
        self.assertEqual([row.index for row in backward.rows], [1, 2, 3])


if __name__ == "__main__":
    unittest.main()
