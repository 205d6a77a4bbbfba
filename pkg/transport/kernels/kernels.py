"""Covariance functions of a scalar time index.

Kernels are immutable pydantic models and double as their own configuration
fragment. ``WhiteNoise`` is the only kernel with a Kronecker-delta term, so
``include_noise=False`` removes exactly the noise summand of any tree.
"""
from __future__ import annotations

from typing import Annotated, List, Literal, Union

import numpy as np
from numpy.typing import ArrayLike
from pydantic import BaseModel, ConfigDict, Field

from ..types.params import Positive, Real


def _pairs(t: ArrayLike, s: ArrayLike) -> tuple[np.ndarray, np.ndarray]:
    t = np.asarray(t, dtype=float).reshape(-1)
    s = np.asarray(s, dtype=float).reshape(-1)
    return t[:, None], s[None, :]


class Kernel(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    family: str

    def evaluate(self, t: np.ndarray, s: np.ndarray, include_noise: bool = True) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, t: ArrayLike, s: ArrayLike, include_noise: bool = True) -> np.ndarray:
        tt, ss = _pairs(t, s)
        return self.evaluate(tt, ss, include_noise)

    @property
    def noise_variance(self) -> float:
        return 0.0


class SquaredExponential(Kernel):
    """k(t, s) = sigma^2 exp(-rate |t - s|^2)."""

    family: Literal["squared_exponential"] = "squared_exponential"
    sigma: Positive = 1.0
    rate: Positive = 1.0

    def evaluate(self, t, s, include_noise=True):
        return self.sigma**2 * np.exp(-self.rate * (t - s) ** 2)


class Brownian(Kernel):
    """k(t, s) = sigma^2 min(t, s); inputs are expected to be nonnegative."""

    family: Literal["brownian"] = "brownian"
    sigma: Positive = 1.0

    def evaluate(self, t, s, include_noise=True):
        return self.sigma**2 * np.minimum(t, s)


class SpectralComponent(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    weight: Positive = 1.0
    mean: Real = 0.0
    variance: Positive = 1.0


class SpectralMixture(Kernel):
    """k(tau) = sum_q w_q^2 exp(-2 pi^2 v_q tau^2) cos(2 pi mu_q tau)."""

    family: Literal["spectral_mixture"] = "spectral_mixture"
    components: List[SpectralComponent] = Field(min_length=1)

    def evaluate(self, t, s, include_noise=True):
        tau = t - s
        out = np.zeros(np.broadcast_shapes(t.shape, s.shape))
        for c in self.components:
            out += c.weight**2 * np.exp(-2.0 * np.pi**2 * c.variance * tau**2) * np.cos(2.0 * np.pi * c.mean * tau)
        return out


class WhiteNoise(Kernel):
    """sigma0^2 on exactly coincident inputs, zero elsewhere."""

    family: Literal["white_noise"] = "white_noise"
    sigma0: Positive = 1.0

    def evaluate(self, t, s, include_noise=True):
        shape = np.broadcast_shapes(t.shape, s.shape)
        if not include_noise:
            return np.zeros(shape)
        return self.sigma0**2 * (t == s).astype(float)

    @property
    def noise_variance(self) -> float:
        return self.sigma0**2


class Sum(Kernel):
    family: Literal["sum"] = "sum"
    kernels: List["KernelSpec"] = Field(min_length=1)

    def evaluate(self, t, s, include_noise=True):
        out = np.zeros(np.broadcast_shapes(t.shape, s.shape))
        for k in self.kernels:
            out = out + k.evaluate(t, s, include_noise)
        return out

    @property
    def noise_variance(self) -> float:
        return sum(k.noise_variance for k in self.kernels)


KernelSpec = Annotated[
    Union[SquaredExponential, Brownian, SpectralMixture, WhiteNoise, Sum],
    Field(discriminator="family"),
]

Sum.model_rebuild()


def gram(k: Kernel, t: ArrayLike, s: ArrayLike, include_noise: bool = True) -> np.ndarray:
    """[G]_ij = k(t_i, s_j); with ``include_noise=False`` the WhiteNoise summands are dropped."""
    return k(t, s, include_noise)
