"""Deep transport process: an ordered composition of transport layers over
Gaussian white noise, with its exact NLL and posterior sampler."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
from numpy.typing import ArrayLike
from pydantic import BaseModel

from config.logger import logger
from config.settings import settings
from ..errors import ConfigError, DomainError
from ..layers import ArchimedeanLayer, CovarianceLayer, EllipticalLayer, TransportLayer
from ..probcore import split_rng
from ..types import NLLResult, PosteriorSampleSet, QuantileTable, ValidationReport
from ..types.config import StackConfig
from ..warpings import MarginalLayer

LOG_2PI = float(np.log(2.0 * np.pi))
ROLE_ORDER = {"copula": 0, "covariance": 1, "marginal": 2}
MIN_QUANTILE_SAMPLES = 100

LAYER_BUILDERS: Dict[str, Callable[[BaseModel], TransportLayer]] = {
    "gaussian": EllipticalLayer,
    "student_t": EllipticalLayer,
    "elliptical": EllipticalLayer,
    "independence": ArchimedeanLayer,
    "clayton": ArchimedeanLayer,
    "covariance": CovarianceLayer,
    "marginal": MarginalLayer,
}


def build_layer(config: BaseModel) -> TransportLayer:
    key = getattr(config, "family", None) or getattr(config, "kind", None)
    if key not in LAYER_BUILDERS:
        raise ConfigError(f"No transport layer for configuration {type(config).__name__}")
    return LAYER_BUILDERS[key](config)


def validate_stack(layers: "LayerStack | Sequence[TransportLayer]") -> ValidationReport:
    """Check the order copula -> covariance -> marginals and the Archimedean exclusion."""
    if isinstance(layers, LayerStack):
        layers = layers.layers
    errors: List[str] = []
    highest = -1
    for i, layer in enumerate(layers):
        rank = ROLE_ORDER[layer.role]
        if rank < highest:
            errors.append(f"layer {i} ({layer.kind}) is a {layer.role} layer placed after a later-stage layer")
        highest = max(highest, rank)

    roles = [layer.role for layer in layers]
    for role in ("copula", "covariance"):
        if roles.count(role) > 1:
            errors.append(f"at most one {role} layer is allowed, got {roles.count(role)}")
    if any(isinstance(layer, ArchimedeanLayer) for layer in layers) and "covariance" in roles:
        errors.append("an Archimedean copula cannot be combined with a covariance layer")

    return ValidationReport(
        valid=not errors,
        layers=[layer.kind for layer in layers],
        errors=errors,
        parameter_counts={f"{i}:{layer.kind}": layer.parameter_count() for i, layer in enumerate(layers)},
    )


def composite_nll(layers: Sequence[TransportLayer], t: ArrayLike, y: ArrayLike) -> NLLResult:
    """NLL of y under the push-forward of white noise through ``layers`` (applied in order).

    Pulls y back through the layers last to first, accumulating -log|grad S| of each,
    and finishes with the standard normal log-density of the white-noise residual.
    """
    t = np.asarray(t, dtype=float)
    z = np.asarray(y, dtype=float)
    if t.shape != z.shape or z.ndim != 1:
        raise ConfigError(f"inputs and values must be equal-length vectors, got {t.shape} and {z.shape}")

    total = 0.0
    try:
        for layer in reversed(layers):
            z, logdet = layer.inverse_and_logdet(t, z)
            total -= logdet
    except DomainError as err:
        return NLLResult(value=float("inf"), reason=str(err))

    total += 0.5 * float(z @ z) + 0.5 * z.size * LOG_2PI
    jitter = sum(len(getattr(layer, "jitter_events", ())) for layer in layers)
    if not np.isfinite(total):
        return NLLResult(value=float("inf"), reason="non-finite log-density", jitter_events=jitter)
    return NLLResult(value=float(total), jitter_events=jitter)


class LayerStack:
    def __init__(self, layers: Sequence[TransportLayer], config: Optional[StackConfig] = None):
        self.layers: List[TransportLayer] = list(layers)
        self.config = config
        report = validate_stack(self.layers)
        if not report.valid:
            raise ConfigError("Invalid layer stack: " + "; ".join(report.errors))

    @classmethod
    def from_config(cls, config: StackConfig) -> "LayerStack":
        return cls([build_layer(c) for c in config.layer_configs()], config)

    @property
    def copula(self) -> Optional[TransportLayer]:
        return next((layer for layer in self.layers if layer.role == "copula"), None)

    @property
    def covariance(self) -> Optional[CovarianceLayer]:
        return next((layer for layer in self.layers if layer.role == "covariance"), None)

    @property
    def marginals(self) -> List[MarginalLayer]:
        return [layer for layer in self.layers if layer.role == "marginal"]

    def nll(self, t: ArrayLike, y: ArrayLike) -> NLLResult:
        return stack_nll(self, t, y)

    def posterior_sample(self, t, y, t_bar, n_samples: int, rng: np.random.Generator, **kwargs) -> PosteriorSampleSet:
        return stack_posterior_sample(self, t, y, t_bar, n_samples, rng, **kwargs)

    def __repr__(self) -> str:
        return f"LayerStack({[layer.kind for layer in self.layers]})"


def _check_sparse_size(stack: LayerStack, n: int):
    cov = stack.covariance
    if cov is not None and cov.sparse and cov.pseudo_inputs.size >= n:
        raise ConfigError(f"Sparse covariance needs fewer pseudo inputs than data points ({cov.pseudo_inputs.size} >= {n})")


def stack_nll(stack: LayerStack, t: ArrayLike, y: ArrayLike, params: Optional[StackConfig] = None) -> NLLResult:
    """Full-data NLL; ``params`` evaluates the same structure at another parameter setting."""
    if params is not None:
        stack = LayerStack.from_config(params)
    _check_sparse_size(stack, np.size(y))
    return composite_nll(stack.layers, t, y)


def stack_posterior_sample(
    stack: LayerStack,
    t: ArrayLike,
    y: ArrayLike,
    t_bar: ArrayLike,
    n_samples: int,
    rng: np.random.Generator,
    seed: Optional[int] = None,
    model_hash: Optional[str] = None,
    chunk: Optional[int] = None,
    max_workers: Optional[int] = None,
) -> PosteriorSampleSet:
    """Sample the process at ``t_bar`` given observations (t, y).

    The copula layer and the white-noise reference collapse into one reference
    whose conditional law is sampled directly; the draws are then pushed through
    the covariance posterior map and the marginal layers at ``t_bar``.
    """
    if n_samples < 1:
        raise ConfigError(f"number of samples must be positive, got {n_samples}")
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    t_bar = np.asarray(t_bar, dtype=float).reshape(-1)
    n_bar = t_bar.size

    z = y
    for layer in reversed(stack.marginals):
        z = layer.inverse(t, z)
    cov = stack.covariance
    x_ref = cov.inverse(t, z) if cov is not None else z
    copula = stack.copula

    def run(size: int, stream: np.random.Generator) -> np.ndarray:
        if copula is None:
            u = stream.standard_normal((size, n_bar))
        else:
            u = copula.posterior_sample(x_ref, n_bar, stream, size)
        out = cov.posterior_map(t, t_bar, x_ref, u) if cov is not None else u
        for layer in stack.marginals:
            out = layer.forward(t_bar, out)
        return np.broadcast_to(out, (size, n_bar))

    chunk = chunk or settings.SAMPLE_CHUNK
    sizes = [len(part) for part in np.array_split(np.arange(n_samples), -(-n_samples // chunk))]
    streams = split_rng(rng, len(sizes))
    with ThreadPoolExecutor(max_workers=max_workers or settings.MAX_WORKERS) as pool:
        parts = list(pool.map(run, sizes, streams))

    return PosteriorSampleSet(inputs=t_bar, samples=np.vstack(parts), seed=seed, model_hash=model_hash)


def stack_quantiles(samples: PosteriorSampleSet, probs: ArrayLike) -> QuantileTable:
    """Per-input empirical quantiles and means of a sample set."""
    probs = np.asarray(probs, dtype=float).reshape(-1)
    if samples.size < MIN_QUANTILE_SAMPLES:
        logger.warning(f"Quantiles from only {samples.size} samples are unreliable")
    return QuantileTable(
        inputs=samples.inputs,
        probs=probs,
        values=np.quantile(samples.samples, probs, axis=0),
        mean=np.mean(samples.samples, axis=0),
    )
