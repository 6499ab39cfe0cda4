from dataclasses import asdict, dataclass
from pathlib import Path
from typing import List, Sequence, Tuple

import numpy as np
import pandas as pd

from core.errors import UndefinedCorrelationError
from metrics.correlation import CorrelationTable, srcc
from metrics.regression import mae, paired, rmse, rmsle_with_clamps
from utils.logger import get_logger

logger = get_logger()

REPORT_COLUMNS = ("n", "mae", "rmse", "rmsle", "srcc", "composite")
CORRELATION_COLUMNS = ("name", "pcc", "cs", "srcc")


@dataclass(frozen=True)
class MetricReport:
    n: int
    mae: float
    rmse: float
    rmsle: float
    srcc: float
    srcc_defined: bool = True
    rmsle_clamped: int = 0

    @property
    def composite(self) -> float:
        return composite(self)

    def as_row(self) -> dict:
        row = {key: value for key, value in asdict(self).items() if key in REPORT_COLUMNS}
        row["composite"] = self.composite
        return {key: row[key] for key in REPORT_COLUMNS}


def composite(report: MetricReport) -> float:
    """Early-stopping score: 3 * SRCC - MAE - RMSE - RMSLE."""
    return 3.0 * report.srcc - report.mae - report.rmse - report.rmsle


def compute_report(pred: np.ndarray, truth: np.ndarray) -> MetricReport:
    p, y = paired(pred, truth)
    rmsle_value, clamped = rmsle_with_clamps(p, y)
    if clamped:
        logger.warning(f"RMSLE clamped {clamped} entries with 1 + x below the floor")
    try:
        srcc_value, defined = srcc(p, y), True
    except UndefinedCorrelationError as error:
        logger.warning(f"SRCC undefined ({error}); reporting 0.0")
        srcc_value, defined = 0.0, False
    return MetricReport(
        n=int(p.shape[0]),
        mae=mae(p, y),
        rmse=rmse(p, y),
        rmsle=rmsle_value,
        srcc=srcc_value,
        srcc_defined=defined,
        rmsle_clamped=clamped,
    )


def average_reports(reports: Sequence[MetricReport]) -> MetricReport:
    """Per-episode mean of error metrics; SRCC averaged over episodes where it is defined."""
    if not reports:
        raise ValueError("No reports to average")
    defined = [report.srcc for report in reports if report.srcc_defined]
    return MetricReport(
        n=sum(report.n for report in reports),
        mae=float(np.mean([report.mae for report in reports])),
        rmse=float(np.mean([report.rmse for report in reports])),
        rmsle=float(np.mean([report.rmsle for report in reports])),
        srcc=float(np.mean(defined)) if defined else 0.0,
        srcc_defined=bool(defined),
        rmsle_clamped=sum(report.rmsle_clamped for report in reports),
    )


def reports_frame(rows: Sequence[Tuple[str, MetricReport]]) -> pd.DataFrame:
    return pd.DataFrame(
        [{"model": name, **report.as_row()} for name, report in rows],
        columns=["model", *REPORT_COLUMNS],
    )


def write_reports(rows: Sequence[Tuple[str, MetricReport]], path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    reports_frame(rows).to_csv(path, index=False, float_format="%.6f")
    return path


def correlation_frame(tables: List[CorrelationTable]) -> pd.DataFrame:
    records = [
        {"name": row.name, "pcc": row.pcc, "cs": row.cs, "srcc": row.srcc}
        for table in tables
        for row in table.rows
    ]
    return pd.DataFrame(records, columns=list(CORRELATION_COLUMNS))


def write_correlation_table(tables: List[CorrelationTable], path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    correlation_frame(tables).to_csv(path, index=False, float_format="%.6f")
    return path
