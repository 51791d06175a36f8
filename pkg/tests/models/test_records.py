"""Unit tests for patches, datasets, metric reports and run records."""

import tempfile
import unittest
from pathlib import Path
from unittest import mock

import numpy as np

from effnet_mini.exceptions import CheckpointError, DataError, UsageError
from effnet_mini.models import (
    ConfusionCounts,
    Dataset,
    EpochRecord,
    ImagePatch,
    MetricReport,
    RunRecord,
)


def patch(label: int, name: str) -> ImagePatch:
    return ImagePatch(np.zeros((4, 4, 3), dtype=np.uint8), label, name)


class TestImagePatch(unittest.TestCase):
    """Test cases for ImagePatch."""

    def test_rejects_non_rgb_pixels(self):
        with self.assertRaises(DataError):
            ImagePatch(np.zeros((4, 4)), 0, "gray")

    def test_rejects_bad_label(self):
        with self.assertRaises(DataError):
            ImagePatch(np.zeros((4, 4, 3)), 2, "bad")

    def test_with_pixels_keeps_provenance(self):
        original = patch(1, "a.ppm")

        replaced = original.with_pixels(np.ones((6, 6, 3)))

        self.assertEqual((replaced.label, replaced.source_id), (1, "a.ppm"))
        self.assertEqual((replaced.height, replaced.width), (6, 6))


class TestDataset(unittest.TestCase):
    """Test cases for Dataset."""

    def setUp(self):
        self.dataset = Dataset([patch(0, "a"), patch(1, "b"), patch(1, "c"), patch(0, "d")], "root", "digest")

    def test_counts(self):
        self.assertEqual(len(self.dataset), 4)
        self.assertEqual(self.dataset.class_counts, (2, 2))
        self.assertEqual(self.dataset.positive_fraction, 0.5)
        self.assertEqual(self.dataset.labels.tolist(), [0, 1, 1, 0])
        self.assertFalse(self.dataset.is_synthetic)

    def test_subset_keeps_order_and_digest(self):
        subset = self.dataset.subset([3, 1])

        self.assertEqual([p.source_id for p in subset], ["d", "b"])
        self.assertEqual(subset.manifest_digest, "digest")


class TestMetricReport(unittest.TestCase):
    """Test cases for ConfusionCounts and MetricReport."""

    def test_counts_must_be_non_negative(self):
        with self.assertRaises(UsageError):
            ConfusionCounts(tp=-1, tn=0, fp=0, fn=0)

    def test_totals(self):
        counts = ConfusionCounts(tp=2, tn=3, fp=1, fn=0)

        self.assertEqual((counts.total, counts.positives, counts.negatives), (6, 2, 4))

    def test_undefined_metrics_render_as_marker(self):
        report = MetricReport(0.75, None, None, 0.75, None, ConfusionCounts(0, 3, 1, 0), 0.5)

        text = str(report)

        self.assertIn("SEN —", text)
        self.assertIn("AUC —", text)
        self.assertIn("ACC 0.7500", text)
        self.assertEqual(report.to_dict()["sen"], None)
        self.assertEqual(report.n, 4)


class TestRunRecord(unittest.TestCase):
    """Test cases for RunRecord persistence."""

    def test_save_and_load(self):
        # Arrange
        record = RunRecord(config={"epochs": 2}, seed=1, dataset_digest="abc", parameter_count=10)
        record.epochs.append(EpochRecord(0, 0.003, 0.69, 0.5, None, 0.6, 0.7))
        record.epochs.append(EpochRecord(1, 0.0003, 0.5, 0.7, 0.8, 0.7, 0.75))

        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory) / "run_record.json"

            # Act
            record.save(path)
            loaded = RunRecord.load(path)

        # Assert
        self.assertEqual(loaded, record)
        self.assertEqual(loaded.final_epoch.val_auc, 0.75)
        self.assertIsNone(loaded.epochs[0].train_auc)

    @mock.patch.object(Path, "write_text", side_effect=OSError("No space left on device"))
    def test_save_failure_is_a_checkpoint_error(self, mock_write_text):
        record = RunRecord(config={}, seed=0, dataset_digest="", parameter_count=0)

        with self.assertRaises(CheckpointError) as ctx:
            record.save(Path("run_record.json"))

        self.assertIn("No space left", str(ctx.exception))
        mock_write_text.assert_called_once()

    def test_malformed_record_is_a_checkpoint_error(self):
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory) / "run_record.json"
            path.write_text("{not json", encoding="utf-8")

            with self.assertRaises(CheckpointError):
                RunRecord.load(path)

    def test_final_epoch_of_empty_record(self):
        self.assertIsNone(RunRecord(config={}, seed=0, dataset_digest="", parameter_count=0).final_epoch)


if __name__ == "__main__":
    unittest.main()
