from typing import List, Sequence

from effnet_mini.models.reports import FLAG_NAMES, AblationReport, ComparisonRow, EvaluationRow
from effnet_mini.report_generators.base_generator import UNDEFINED, ReportGenerator, percent

CHECK = "√"
FLAG_HEADERS = {"rcc": "RCC", "rds": "RDS", "ff": "FF", "attention": "Attention"}


def align(rows: Sequence[Sequence[str]], gap: int = 2) -> str:
    """Left-align the first column and right-align the rest"""
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    lines = []
    for row in rows:
        cells = [row[0].ljust(widths[0])] + [cell.rjust(width) for cell, width in zip(row[1:], widths[1:])]
        lines.append((" " * gap).join(cells).rstrip())
    return "\n".join(lines) + "\n"


class ConsoleReportGenerator(ReportGenerator):
    """Generate aligned plain-text tables"""

    def generate_evaluation_report(self, rows: List[EvaluationRow]) -> str:
        """Generate a per-split metric table"""
        table = [["Split", "ACC (%)", "AUC (%)", "SEN (%)", "SPE (%)", "F (%)", "n", "Pos (%)", "Threshold"]]
        for row in rows:
            metrics = row.report
            table.append(
                [
                    row.split,
                    percent(metrics.acc),
                    percent(metrics.auc),
                    percent(metrics.sen),
                    percent(metrics.spe),
                    percent(metrics.f),
                    str(metrics.n),
                    percent(row.positive_fraction),
                    f"{metrics.threshold:g}",
                ]
            )
        return align(table)

    def generate_comparison_report(self, rows: List[ComparisonRow]) -> str:
        """Generate a training/test comparison table"""
        table = [
            ["", "Training", "", "Test", "", "", "", ""],
            ["", "ACC", "AUC", "ACC", "AUC", "SEN", "SPE", "F"],
        ]
        for row in rows:
            train_acc = percent(row.train.acc) if row.train else UNDEFINED
            train_auc = percent(row.train.auc) if row.train else UNDEFINED
            test = row.test
            table.append(
                [
                    row.name,
                    train_acc,
                    train_auc,
                    percent(test.acc),
                    percent(test.auc),
                    percent(test.sen),
                    percent(test.spe),
                    percent(test.f),
                ]
            )
        return align(table)

    def generate_ablation_report(self, report: AblationReport) -> str:
        """Generate a flag grid table"""
        table = [["Row"] + [FLAG_HEADERS[name] for name in FLAG_NAMES] + ["ACC (%)", "AUC (%)", "Params"]]
        for row in report.rows:
            flags = row.flags
            table.append(
                [str(row.index)]
                + [CHECK if flags[name] else "" for name in FLAG_NAMES]
                + [percent(row.report.acc), percent(row.report.auc), str(row.parameter_count)]
            )
        header = f"Ablation over {len(report)} configurations (seed {report.seed}, {report.epochs} epochs)\n"
        if report.positive_fraction is not None:
            header += f"Validation positives: {percent(report.positive_fraction)}%\n"
        return header + align(table)
