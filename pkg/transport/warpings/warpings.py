"""Monotone scalar bijections phi used by marginal transports.

``transform`` is phi (data -> latent), ``inverse`` is phi^-1, ``derivative`` is
phi'. Every family accepted in a marginal configuration is strictly increasing.
"""
from __future__ import annotations

from typing import Annotated, List, Literal, Union

import numpy as np
from numpy.typing import ArrayLike
from pydantic import BaseModel, ConfigDict, Field
from scipy import special, stats

from ..errors import DomainError
from ..types.params import Positive, Real


def _raise_outside(mask: np.ndarray, msg: str):
    if np.any(mask):
        index = int(np.flatnonzero(np.atleast_1d(mask))[0])
        raise DomainError(msg, index)


class Warping(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    family: str

    def transform(self, y: ArrayLike) -> np.ndarray:
        raise NotImplementedError

    def inverse(self, z: ArrayLike) -> np.ndarray:
        raise NotImplementedError

    def derivative(self, y: ArrayLike) -> np.ndarray:
        raise NotImplementedError

    def log_derivative(self, y: ArrayLike) -> np.ndarray:
        """log |phi'(y)|."""
        with np.errstate(divide="ignore"):
            return np.log(np.abs(self.derivative(y)))


class Affine(Warping):
    family: Literal["affine"] = "affine"
    a: Real = 0.0
    b: Positive = 1.0

    def transform(self, y):
        return self.a + self.b * np.asarray(y, dtype=float)

    def inverse(self, z):
        return (np.asarray(z, dtype=float) - self.a) / self.b

    def derivative(self, y):
        return np.full(np.shape(y), self.b)

    def log_derivative(self, y):
        return np.full(np.shape(y), np.log(self.b))


class Log(Warping):
    family: Literal["log"] = "log"

    def transform(self, y):
        y = np.asarray(y, dtype=float)
        _raise_outside(~(y > 0.0), "Log warping needs positive values")
        return np.log(y)

    def inverse(self, z):
        return np.exp(np.asarray(z, dtype=float))

    def derivative(self, y):
        y = np.asarray(y, dtype=float)
        _raise_outside(~(y > 0.0), "Log warping needs positive values")
        return 1.0 / y

    def log_derivative(self, y):
        return -self.transform(y)


class BoxCoxShifted(Warping):
    """phi(y) = (sgn(y + c)|y + c|^lam - 1) / lam, a bijection of the real line."""

    family: Literal["box_cox"] = "box_cox"
    lam: Positive = 1.0
    shift: Real = 0.0

    def transform(self, y):
        v = np.asarray(y, dtype=float) + self.shift
        return (np.sign(v) * np.abs(v) ** self.lam - 1.0) / self.lam

    def inverse(self, z):
        w = self.lam * np.asarray(z, dtype=float) + 1.0
        return np.sign(w) * np.abs(w) ** (1.0 / self.lam) - self.shift

    def derivative(self, y):
        v = np.asarray(y, dtype=float) + self.shift
        with np.errstate(divide="ignore"):
            return np.abs(v) ** (self.lam - 1.0)

    def log_derivative(self, y):
        v = np.asarray(y, dtype=float) + self.shift
        with np.errstate(divide="ignore"):
            return (self.lam - 1.0) * np.log(np.abs(v))


class SinhArcsinh(Warping):
    """phi(y) = sinh(tail * asinh(y) - skew)."""

    family: Literal["sinh_arcsinh"] = "sinh_arcsinh"
    skew: Real = 0.0
    tail: Positive = 1.0

    def transform(self, y):
        return np.sinh(self.tail * np.arcsinh(np.asarray(y, dtype=float)) - self.skew)

    def inverse(self, z):
        return np.sinh((np.arcsinh(np.asarray(z, dtype=float)) + self.skew) / self.tail)

    def derivative(self, y):
        y = np.asarray(y, dtype=float)
        return self.tail * np.cosh(self.tail * np.arcsinh(y) - self.skew) / np.sqrt(1.0 + y * y)


class NegLogNormCDF(Warping):
    """phi(x) = -log Phi(x): standard normal to Exp(1). Decreasing.

    Internal to the Archimedean layer; not accepted in marginal configurations.
    """

    family: Literal["neg_log_norm_cdf"] = "neg_log_norm_cdf"

    def transform(self, x):
        return -special.log_ndtr(np.asarray(x, dtype=float))

    def inverse(self, e):
        e = np.asarray(e, dtype=float)
        _raise_outside(~(e > 0.0), "-log Phi takes positive values only")
        return special.ndtri_exp(-e)

    def derivative(self, x):
        return -np.exp(self.log_derivative(x))

    def log_derivative(self, x):
        x = np.asarray(x, dtype=float)
        return stats.norm.logpdf(x) - special.log_ndtr(x)


class Composite(Warping):
    """phi = phi_k o ... o phi_1, applied in list order."""

    family: Literal["composite"] = "composite"
    warpings: List["WarpingSpec"] = Field(min_length=1)

    def transform(self, y):
        z = np.asarray(y, dtype=float)
        for w in self.warpings:
            z = w.transform(z)
        return z

    def inverse(self, z):
        y = np.asarray(z, dtype=float)
        for w in reversed(self.warpings):
            y = w.inverse(y)
        return y

    def derivative(self, y):
        return np.exp(self.log_derivative(y))

    def log_derivative(self, y):
        z = np.asarray(y, dtype=float)
        out = np.zeros(z.shape)
        for w in self.warpings:
            out = out + w.log_derivative(z)
            z = w.transform(z)
        return out


WarpingSpec = Annotated[
    Union[Affine, Log, BoxCoxShifted, SinhArcsinh, Composite],
    Field(discriminator="family"),
]

Composite.model_rebuild()
