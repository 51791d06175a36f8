from typing import List

import pandas as pd

from effnet_mini.models.reports import AblationReport, ComparisonRow, EvaluationRow
from effnet_mini.report_generators.base_generator import ReportGenerator

NULL = "null"


def to_csv(records: List[dict], columns: List[str]) -> str:
    frame = pd.DataFrame.from_records(records, columns=columns)
    return frame.to_csv(index=False, na_rep=NULL, lineterminator="\n")


class CsvReportGenerator(ReportGenerator):
    """Generate machine-readable CSV reports; undefined metrics are written as null"""

    def generate_evaluation_report(self, rows: List[EvaluationRow]) -> str:
        columns = ["split", "rcc", "rds", "ff", "attention", "pos_fraction"]
        columns += ["acc", "auc", "sen", "spe", "f", "n", "threshold"]
        return to_csv([row.to_record() for row in rows], columns)

    def generate_comparison_report(self, rows: List[ComparisonRow]) -> str:
        records = []
        for row in rows:
            records.append(
                {
                    "name": row.name,
                    "train_acc": row.train.acc if row.train else None,
                    "train_auc": row.train.auc if row.train else None,
                    "test_acc": row.test.acc,
                    "test_auc": row.test.auc,
                    "test_sen": row.test.sen,
                    "test_spe": row.test.spe,
                    "test_f": row.test.f,
                }
            )
        columns = ["name", "train_acc", "train_auc", "test_acc", "test_auc", "test_sen", "test_spe", "test_f"]
        return to_csv(records, columns)

    def generate_ablation_report(self, report: AblationReport) -> str:
        columns = ["row", "rcc", "rds", "ff", "attention"]
        columns += ["pos_fraction", "acc", "auc", "sen", "spe", "f", "n", "threshold", "parameters"]
        records = [{**row.to_record(), "pos_fraction": report.positive_fraction} for row in report.rows]
        return to_csv(records, columns)
