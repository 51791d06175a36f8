import logging
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from effnet_mini.models.reports import AblationReport  # noqa: E402
from effnet_mini.models.run_record import RunRecord  # noqa: E402


def _nan(value):
    return np.nan if value is None else value


class ChartGenerator:
    """Render training curves and ablation bar charts as PNG files"""

    def __init__(self, dpi: int = 100):
        self.dpi = dpi
        self.logger = logging.getLogger("effnet_mini.report_generators.ChartGenerator")

    def training_curves(self, record: RunRecord, path: Path) -> Path:
        """Loss on the left axis; train and validation AUC on the right"""
        epochs = [epoch.epoch + 1 for epoch in record.epochs]
        fig, (loss_ax, auc_ax) = plt.subplots(1, 2, figsize=(10, 4))
        loss_ax.plot(epochs, [epoch.train_loss for epoch in record.epochs], marker="o", label="train loss")
        loss_ax.set_xlabel("epoch")
        loss_ax.set_ylabel("BCE loss")
        loss_ax.legend()

        auc_ax.plot(epochs, [_nan(epoch.train_auc) for epoch in record.epochs], marker="o", label="train AUC")
        auc_ax.plot(epochs, [_nan(epoch.val_auc) for epoch in record.epochs], marker="s", label="validation AUC")
        auc_ax.set_xlabel("epoch")
        auc_ax.set_ylim(0.0, 1.0)
        auc_ax.legend()

        fig.suptitle(f"{record.parameter_count} parameters, seed {record.seed}")
        fig.tight_layout()
        return self._save(fig, Path(path))

    def ablation_chart(self, report: AblationReport, path: Path) -> Path:
        """Grouped ACC/AUC bars, one group per grid row"""
        indices = np.arange(len(report.rows))
        width = 0.4
        fig, ax = plt.subplots(figsize=(max(6, len(report.rows)), 4))
        ax.bar(indices - width / 2, [_nan(row.report.acc) for row in report.rows], width, label="ACC")
        ax.bar(indices + width / 2, [_nan(row.report.auc) for row in report.rows], width, label="AUC")
        ax.set_xticks(indices)
        ax.set_xticklabels([str(row.index) for row in report.rows])
        ax.set_xlabel("grid row")
        ax.set_ylim(0.0, 1.0)
        ax.legend()
        fig.tight_layout()
        return self._save(fig, Path(path))

    def _save(self, fig, path: Path) -> Path:
        path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(path, dpi=self.dpi)
        plt.close(fig)
        self.logger.info(f"Saved chart to {path}")
        return path
