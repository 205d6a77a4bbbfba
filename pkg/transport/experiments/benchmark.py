"""Random-split benchmark: fit on a small training share, score posterior samples on the rest."""
import asyncio
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import ArrayLike

from config.logger import logger
from config.settings import settings
from ..errors import ConfigError
from ..metrics import metrics_report, split_metrics
from ..probcore import make_rng, split_rng
from ..stack import LayerStack, stack_posterior_sample
from ..trainer import fit
from ..types import MetricsReport, SplitMetrics
from ..types.config import StackConfig, TrainConfig
from .models import MODELS, build_tgp, build_wgp

DEFAULT_TRAIN_FRAC = 0.15
DEFAULT_SAMPLES = 200
SEED_SPACE = 2**31


class SplitOutcome(NamedTuple):
    metrics: List[SplitMetrics]
    # model -> fitted configuration
    configs: Dict[str, StackConfig]


def random_split(n: int, train_frac: float, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    """Uniform train/validation split; both index sets sorted."""
    if not 0.0 < train_frac < 1.0:
        raise ConfigError(f"training fraction must lie in (0, 1), got {train_frac}")
    n_train = int(round(train_frac * n))
    if not 2 <= n_train < n:
        raise ConfigError(f"a {train_frac:.0%} split of {n} points leaves {n_train} training points")
    order = rng.permutation(n)
    return np.sort(order[:n_train]), np.sort(order[n_train:])


def run_split(
    split: int,
    t: np.ndarray,
    y: np.ndarray,
    models: Sequence[str],
    train_frac: float,
    samples: int,
    rng: np.random.Generator,
    train: Optional[TrainConfig] = None,
) -> SplitOutcome:
    """Fit the WGP, warm-start the TGP from it, and score both on the held-out points."""
    train_idx, test_idx = random_split(y.size, train_frac, rng)
    t_tr, y_tr, t_te, y_te = t[train_idx], y[train_idx], t[test_idx], y[test_idx]
    fit_seed, tgp_seed, sample_seed = (int(s) for s in rng.integers(SEED_SPACE, size=3))

    wgp = fit(build_wgp(t_tr, y_tr, train), t_tr, y_tr, seed=fit_seed)
    fitted = {"wgp": wgp}
    if "tgp" in models:
        fitted["tgp"] = fit(build_tgp(wgp.config), t_tr, y_tr, seed=tgp_seed)

    rows: List[SplitMetrics] = []
    configs: Dict[str, StackConfig] = {}
    for name in models:
        result = fitted[name]
        stack = LayerStack.from_config(result.config)
        draws = stack_posterior_sample(stack, t_tr, y_tr, t_te, samples, make_rng(sample_seed), seed=sample_seed)
        rows.append(split_metrics(split, name, y_te, draws, result.report.final_nll))
        configs[name] = result.config
    logger.info(
        f"Split {split}: "
        + ", ".join(f"{r.model} ESE {r.ese:.3f} (train NLL {r.train_nll:.3f})" for r in rows)
    )
    return SplitOutcome(rows, configs)


async def run_benchmark(
    dataset: str,
    t: ArrayLike,
    y: ArrayLike,
    models: Sequence[str] = MODELS,
    splits: int = 10,
    train_frac: float = DEFAULT_TRAIN_FRAC,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    train: Optional[TrainConfig] = None,
    max_workers: Optional[int] = None,
) -> MetricsReport:
    """Run ``splits`` independent splits concurrently and collect their metrics."""
    unknown = [m for m in models if m not in MODELS]
    if unknown:
        raise ConfigError(f"Unknown benchmark models {unknown}; choose from {list(MODELS)}")
    if splits < 1 or samples < 1:
        raise ConfigError("need at least one split and one sample")
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    streams = split_rng(make_rng(seed), splits)
    semaphore = asyncio.Semaphore(max_workers or settings.MAX_WORKERS)

    async def one(k: int) -> SplitOutcome:
        async with semaphore:
            return await asyncio.to_thread(run_split, k, t, y, models, train_frac, samples, streams[k], train)

    logger.info(f"Benchmark on {dataset}: {splits} splits, models {list(models)}, {samples} samples")
    outcomes = await asyncio.gather(*(one(k) for k in range(splits)))
    report = metrics_report(dataset, [row for outcome in outcomes for row in outcome.metrics])
    failed = [k for k, ok in report.warm_start_ok.items() if not ok]
    if failed:
        logger.warning(f"Student-t fit ended above its warped-GP warm start on splits {failed}")
    return report
