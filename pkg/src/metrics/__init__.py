"""Regression errors, correlation coefficients, and metric reports."""

from metrics.correlation import (
    CorrelationRow,
    CorrelationTable,
    correlation_table,
    cosine,
    pcc,
    pooled_correlation_table,
    srcc,
)
from metrics.regression import mae, rmse, rmsle, rmsle_with_clamps
from metrics.report import (
    CORRELATION_COLUMNS,
    REPORT_COLUMNS,
    MetricReport,
    average_reports,
    composite,
    compute_report,
    correlation_frame,
    reports_frame,
    write_correlation_table,
    write_reports,
)

__all__ = [
    "CORRELATION_COLUMNS",
    "REPORT_COLUMNS",
    "CorrelationRow",
    "CorrelationTable",
    "MetricReport",
    "average_reports",
    "composite",
    "compute_report",
    "correlation_frame",
    "correlation_table",
    "cosine",
    "mae",
    "pcc",
    "pooled_correlation_table",
    "reports_frame",
    "rmse",
    "rmsle",
    "rmsle_with_clamps",
    "srcc",
    "write_correlation_table",
    "write_reports",
]
