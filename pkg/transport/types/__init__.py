from .params import Param, Positive, Real, RealList, Interval, iter_params, count_params
from .results import (
    NLLResult,
    ValidationReport,
    FitReport,
    PosteriorSampleSet,
    QuantileTable,
    TailReport,
    SplitMetrics,
    MetricSummary,
    MetricsReport,
)

__all__ = [
    "Param",
    "Positive",
    "Real",
    "RealList",
    "Interval",
    "iter_params",
    "count_params",
    "NLLResult",
    "ValidationReport",
    "FitReport",
    "PosteriorSampleSet",
    "QuantileTable",
    "TailReport",
    "SplitMetrics",
    "MetricSummary",
    "MetricsReport",
]
