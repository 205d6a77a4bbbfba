"""Marginal transport h(t, x) = phi^-1(m(t) + sigma x), applied coordinate-wise."""
from __future__ import annotations

from typing import TYPE_CHECKING, Callable

import numpy as np
from numpy.typing import ArrayLike
from scipy import stats

from ..errors import DomainError
from ..layers.base import TransportLayer

if TYPE_CHECKING:
    from ..types.config import MarginalConfig


class MarginalLayer(TransportLayer):
    role = "marginal"
    kind = "marginal"

    def __init__(self, config: "MarginalConfig"):
        self.config = config
        self.warping = config.warping
        self.location = config.location
        self.scale = config.scale

    def forward(self, t, x):
        t = np.asarray(t, dtype=float)
        y = self.warping.inverse(self.location(t) + self.scale * np.asarray(x, dtype=float))
        bad = ~np.isfinite(y)
        if np.any(bad):
            raise DomainError("Marginal transport produced a non-finite value", int(np.flatnonzero(bad)[0]))
        return y

    def inverse(self, t, y):
        t = np.asarray(t, dtype=float)
        return (self.warping.transform(y) - self.location(t)) / self.scale

    def logdet_inv(self, t, y) -> float:
        log_d = self.warping.log_derivative(y)
        bad = ~np.isfinite(log_d)
        if np.any(bad):
            raise DomainError("Warping derivative is not positive and finite", int(np.flatnonzero(bad)[0]))
        return float(np.sum(log_d) - np.size(y) * np.log(self.scale))

    def derivative(self, t, x) -> np.ndarray:
        """dh/dx at each coordinate, positive wherever h is defined."""
        y = self.forward(t, x)
        return self.scale / self.warping.derivative(y)


def marginal_forward(layer: MarginalLayer, t: ArrayLike, x: ArrayLike) -> np.ndarray:
    return layer.forward(t, x)


def marginal_inverse(layer: MarginalLayer, t: ArrayLike, y: ArrayLike) -> np.ndarray:
    return layer.inverse(t, y)


def marginal_logdet_inv(layer: MarginalLayer, t: ArrayLike, y: ArrayLike) -> float:
    return layer.logdet_inv(t, y)


def pushforward_expectation(
    layer: MarginalLayer,
    t: ArrayLike,
    samples_x: np.ndarray,
    v: Callable[[np.ndarray], np.ndarray] = lambda y: y,
) -> np.ndarray:
    """Monte Carlo mean of v(h_t(x)) over reference samples (one row per sample)."""
    return np.mean(v(layer.forward(t, samples_x)), axis=0)


def pushforward_quantile(layer: MarginalLayer, t: ArrayLike, q: ArrayLike, ref_scale: ArrayLike = 1.0) -> np.ndarray:
    """Quantiles of y_i = h(t_i, x_i) for x_i ~ N(0, ref_scale_i^2).

    h is increasing in x, so it maps reference quantiles to data quantiles.
    """
    t = np.asarray(t, dtype=float)
    q = np.asarray(q, dtype=float)
    x = stats.norm.ppf(q)[..., None] * np.asarray(ref_scale, dtype=float)
    return layer.forward(t, np.broadcast_to(x, q.shape + t.shape))
