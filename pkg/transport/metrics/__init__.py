from .metrics import (
    METRICS,
    CHALLENGER,
    BASELINE,
    WARM_START_TOL,
    prediction_errors,
    split_metrics,
    summarize,
    metrics_report,
    paired_wins,
    warm_start_checks,
    format_table,
)

__all__ = [
    "METRICS",
    "CHALLENGER",
    "BASELINE",
    "WARM_START_TOL",
    "prediction_errors",
    "split_metrics",
    "summarize",
    "metrics_report",
    "paired_wins",
    "warm_start_checks",
    "format_table",
]
