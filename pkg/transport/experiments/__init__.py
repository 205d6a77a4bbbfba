from .models import MODELS, build_tgp, build_wgp, spectral_mixture_init
from .benchmark import (
    DEFAULT_SAMPLES,
    DEFAULT_TRAIN_FRAC,
    SplitOutcome,
    random_split,
    run_benchmark,
    run_split,
)

__all__ = [
    "MODELS",
    "build_tgp",
    "build_wgp",
    "spectral_mixture_init",
    "DEFAULT_SAMPLES",
    "DEFAULT_TRAIN_FRAC",
    "SplitOutcome",
    "random_split",
    "run_benchmark",
    "run_split",
]
