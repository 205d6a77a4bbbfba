"""Result records returned by the library and written by the CLI."""
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, computed_field


class NLLResult(BaseModel):
    """Negative log-likelihood; ``value`` is +inf with a ``reason`` when the data left a map's domain."""

    model_config = ConfigDict(frozen=True)

    value: float
    reason: Optional[str] = None
    jitter_events: int = 0

    @property
    def finite(self) -> bool:
        return bool(np.isfinite(self.value))


class ValidationReport(BaseModel):
    valid: bool
    layers: List[str] = Field(default_factory=list)
    errors: List[str] = Field(default_factory=list)
    parameter_counts: Dict[str, int] = Field(default_factory=dict)

    @computed_field
    @property
    def total_parameters(self) -> int:
        return sum(self.parameter_counts.values())


class FitReport(BaseModel):
    # an infinite NLL is written as Infinity, which json.loads reads back
    model_config = ConfigDict(ser_json_inf_nan="constants")

    final_nll: float
    initial_nll: float
    # full-data NLL of the winning restart
    trace: List[float]
    params: Dict[str, float | List[float]]
    seed: int
    wall_time: float
    jitter_events: int = 0
    best_restart: int = 0
    restart_nlls: List[Optional[float]] = Field(default_factory=list)
    iterations: int = 0
    polish_iterations: int = 0


class PosteriorSampleSet(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    inputs: np.ndarray
    # one row per sample path, one column per input
    samples: np.ndarray
    seed: Optional[int] = None
    model_hash: Optional[str] = None

    @property
    def size(self) -> int:
        return int(self.samples.shape[0])


class QuantileTable(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    inputs: np.ndarray
    probs: np.ndarray
    # one row per probability
    values: np.ndarray
    mean: np.ndarray

    def column(self, prob: float) -> np.ndarray:
        index = int(np.flatnonzero(np.isclose(self.probs, prob))[0])
        return self.values[index]


class TailReport(BaseModel):
    copula: str
    closed_form: Optional[Tuple[float, float]] = None
    # q -> (lower, upper)
    empirical: Dict[str, Tuple[float, float]] = Field(default_factory=dict)
    pairs: int = 0


class SplitMetrics(BaseModel):
    split: int
    model: str
    mse: float
    mae: float
    ese: float
    eae: float
    train_nll: float


class MetricSummary(BaseModel):
    mean: float
    std: float


class MetricsReport(BaseModel):
    dataset: str
    splits: List[SplitMetrics] = Field(default_factory=list)
    # model -> metric -> summary
    summary: Dict[str, Dict[str, MetricSummary]] = Field(default_factory=dict)
    # metric -> splits on which the Student-t model scores no worse than the warped GP
    paired_wins: Dict[str, int] = Field(default_factory=dict)
    # split -> Student-t train NLL no worse than its warped-GP warm start (up to 1e-6)
    warm_start_ok: Dict[int, bool] = Field(default_factory=dict)
