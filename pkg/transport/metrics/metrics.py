"""Held-out prediction indices over posterior samples.

With S sample paths y^(k) at the validation inputs, the point prediction is the
sample mean; MSE / MAE score that mean, ESE / EAE average the error of every path.
"""
from typing import Dict, Iterable, List, Tuple

import numpy as np
from numpy.typing import ArrayLike

from ..errors import ConfigError
from ..types import MetricsReport, MetricSummary, PosteriorSampleSet, SplitMetrics

METRICS = ("mse", "mae", "ese", "eae")
# the Student-t model is scored against the warped GP it was warm-started from
CHALLENGER = "tgp"
BASELINE = "wgp"
WARM_START_TOL = 1e-6


def _as_samples(samples: "PosteriorSampleSet | ArrayLike") -> np.ndarray:
    if isinstance(samples, PosteriorSampleSet):
        return samples.samples
    return np.atleast_2d(np.asarray(samples, dtype=float))


def prediction_errors(y: ArrayLike, samples: "PosteriorSampleSet | ArrayLike") -> Dict[str, float]:
    """MSE, MAE, ESE and EAE of ``samples`` (one row per path) against held-out ``y``."""
    y = np.asarray(y, dtype=float).reshape(-1)
    draws = _as_samples(samples)
    if draws.shape[-1] != y.size:
        raise ConfigError(f"samples have {draws.shape[-1]} columns for {y.size} held-out values")
    if draws.shape[0] < 1:
        raise ConfigError("no samples to score")
    center = draws.mean(axis=0)
    # columns where every path agrees score exactly as the point prediction
    flat = np.ptp(draws, axis=0) == 0
    center[flat] = draws[0, flat]
    residual = y - center
    # E(y - d)^2 = (y - mean)^2 + var(d)
    squared = residual**2 + np.mean((draws - center) ** 2, axis=0)
    absolute = np.mean(np.abs(y - draws), axis=0)
    absolute[flat] = np.abs(residual[flat])
    return {
        "mse": float(np.mean(residual**2)),
        "mae": float(np.mean(np.abs(residual))),
        "ese": float(np.mean(squared)),
        "eae": float(np.mean(absolute)),
    }


def split_metrics(split: int, model: str, y: ArrayLike, samples, train_nll: float) -> SplitMetrics:
    return SplitMetrics(split=split, model=model, train_nll=float(train_nll), **prediction_errors(y, samples))


def summarize(splits: Iterable[SplitMetrics]) -> Dict[str, Dict[str, MetricSummary]]:
    """Mean and sample standard deviation of each index per model."""
    by_model: Dict[str, List[SplitMetrics]] = {}
    for row in splits:
        by_model.setdefault(row.model, []).append(row)
    summary: Dict[str, Dict[str, MetricSummary]] = {}
    for model, rows in by_model.items():
        summary[model] = {}
        for name in METRICS:
            values = np.array([getattr(r, name) for r in rows])
            std = float(values.std(ddof=1)) if values.size > 1 else 0.0
            summary[model][name] = MetricSummary(mean=float(values.mean()), std=std)
    return summary


def _paired(splits: Iterable[SplitMetrics], model: str, baseline: str) -> List[Tuple[SplitMetrics, SplitMetrics]]:
    by_split: Dict[int, Dict[str, SplitMetrics]] = {}
    for row in splits:
        by_split.setdefault(row.split, {})[row.model] = row
    return [
        (rows[model], rows[baseline]) for _, rows in sorted(by_split.items()) if model in rows and baseline in rows
    ]


def paired_wins(
    splits: Iterable[SplitMetrics], model: str = CHALLENGER, baseline: str = BASELINE, metric: str = "ese"
) -> int:
    """Number of splits on which ``model`` scores no worse than ``baseline``."""
    return int(sum(getattr(a, metric) <= getattr(b, metric) for a, b in _paired(splits, model, baseline)))


def warm_start_checks(
    splits: Iterable[SplitMetrics], model: str = CHALLENGER, baseline: str = BASELINE
) -> Dict[int, bool]:
    """Per split, whether ``model`` trained to an NLL no worse than its ``baseline`` warm start."""
    return {a.split: a.train_nll <= b.train_nll + WARM_START_TOL for a, b in _paired(splits, model, baseline)}


def metrics_report(dataset: str, splits: Iterable[SplitMetrics]) -> MetricsReport:
    rows = sorted(splits, key=lambda r: (r.split, r.model))
    paired = bool(_paired(rows, CHALLENGER, BASELINE))
    return MetricsReport(
        dataset=dataset,
        splits=rows,
        summary=summarize(rows),
        paired_wins={name: paired_wins(rows, metric=name) for name in METRICS} if paired else {},
        warm_start_ok=warm_start_checks(rows),
    )


def format_table(report: MetricsReport) -> str:
    """Human-readable ``mean +/- std`` table, one column per model."""
    models = list(report.summary)
    header = f"{report.dataset:<8}" + "".join(f"{m:>26}" for m in models)
    lines = [header]
    for name in METRICS:
        cells = "".join(
            f"{report.summary[m][name].mean:>14.3f} +/- {report.summary[m][name].std:<7.3f}" for m in models
        )
        lines.append(f"{name.upper():<8}{cells}")
    if report.paired_wins:
        pairs = len(report.warm_start_ok)
        wins = ", ".join(f"{name.upper()} {report.paired_wins[name]}/{pairs}" for name in METRICS)
        lines.append(f"{CHALLENGER} no worse than {BASELINE}: {wins}")
        failed = sorted(k for k, ok in report.warm_start_ok.items() if not ok)
        verdict = "ok on every split" if not failed else "failed on splits " + ", ".join(map(str, failed))
        lines.append(f"warm-start NLL check: {verdict}")
    return "\n".join(lines)
