"""Scalar distributions used by the transports.

Every family is an immutable pydantic model; numeric work is delegated to the
matching frozen ``scipy.stats`` distribution. Families that are square roots of a
scipy family (``SqrtChiSquared`` excepted, scipy has ``chi``) map probabilities
through ``y = sqrt(scale * x)``.
"""
from __future__ import annotations

from functools import cached_property
from typing import Annotated, Literal, Optional, Union

import numpy as np
from numpy.typing import ArrayLike
from pydantic import BaseModel, ConfigDict, Field
from scipy import stats

from ..errors import DomainError

PositiveFloat = Annotated[float, Field(gt=0)]


def _check_probability(u: ArrayLike) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    bad = ~((u > 0.0) & (u < 1.0))
    if np.any(bad):
        index = int(np.flatnonzero(bad)[0])
        raise DomainError(f"Probability must lie in (0, 1), got {u.flat[index]!r}", index if u.ndim else None)
    return u


class Dist1D(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    family: str

    @cached_property
    def dist(self):
        raise NotImplementedError

    @property
    def support(self) -> tuple[float, float]:
        lo, hi = self.dist.support()
        return float(lo), float(hi)

    def cdf(self, x: ArrayLike):
        return self.dist.cdf(x)

    def sf(self, x: ArrayLike):
        return self.dist.sf(x)

    def logpdf(self, x: ArrayLike):
        return self.dist.logpdf(x)

    def pdf(self, x: ArrayLike):
        return np.exp(self.logpdf(x))

    def quantile(self, u: ArrayLike):
        return self.dist.ppf(_check_probability(u))

    def isf(self, u: ArrayLike):
        """Upper quantile: isf(u) = quantile(1 - u) without cancellation."""
        return self.dist.isf(_check_probability(u))

    def sample(self, rng: np.random.Generator, size: Optional[int | tuple] = None):
        return self.dist.rvs(size=size, random_state=rng)

    def mean(self) -> float:
        return float(self.dist.mean())


class StdNormal(Dist1D):
    family: Literal["std_normal"] = "std_normal"

    @cached_property
    def dist(self):
        return stats.norm()


class Gamma(Dist1D):
    family: Literal["gamma"] = "gamma"
    shape: PositiveFloat
    rate: PositiveFloat = 1.0

    @cached_property
    def dist(self):
        return stats.gamma(a=self.shape, scale=1.0 / self.rate)


class InvGamma(Dist1D):
    family: Literal["inv_gamma"] = "inv_gamma"
    shape: PositiveFloat
    rate: PositiveFloat = 1.0

    @cached_property
    def dist(self):
        return stats.invgamma(a=self.shape, scale=self.rate)


class SqrtChiSquared(Dist1D):
    family: Literal["sqrt_chi_squared"] = "sqrt_chi_squared"
    dof: Annotated[int, Field(gt=0)]

    @cached_property
    def dist(self):
        return stats.chi(df=self.dof)


class FisherSnedecor(Dist1D):
    family: Literal["fisher_snedecor"] = "fisher_snedecor"
    d1: PositiveFloat
    d2: PositiveFloat

    @cached_property
    def dist(self):
        return stats.f(dfn=self.d1, dfd=self.d2)


class ScaledF(Dist1D):
    """``scale * F(d1, d2)``; the Clayton radius is ScaledF(theta * n, 2n, 2/theta)."""

    family: Literal["scaled_f"] = "scaled_f"
    scale: PositiveFloat
    d1: PositiveFloat
    d2: PositiveFloat

    @cached_property
    def dist(self):
        return stats.f(dfn=self.d1, dfd=self.d2, scale=self.scale)


class Exponential(Dist1D):
    family: Literal["exponential"] = "exponential"
    rate: PositiveFloat = 1.0

    @cached_property
    def dist(self):
        return stats.expon(scale=1.0 / self.rate)


class ShiftedPareto(Dist1D):
    """CDF 1 - (1 + x)^(-1/theta): the marginal law of a Clayton process."""

    family: Literal["shifted_pareto"] = "shifted_pareto"
    theta: PositiveFloat

    @cached_property
    def dist(self):
        return stats.lomax(c=1.0 / self.theta)


class Uniform01(Dist1D):
    family: Literal["uniform01"] = "uniform01"

    @cached_property
    def dist(self):
        return stats.uniform()


class _SqrtScaled(Dist1D):
    """Law of ``sqrt(scale * X)`` for a positive scipy variable X."""

    scale: PositiveFloat = 1.0

    @property
    def support(self) -> tuple[float, float]:
        return 0.0, float("inf")

    def _square(self, y):
        y = np.asarray(y, dtype=float)
        return np.where(y > 0, y * y / self.scale, 0.0)

    def cdf(self, y):
        y = np.asarray(y, dtype=float)
        return np.where(y > 0, self.dist.cdf(self._square(y)), 0.0)

    def sf(self, y):
        y = np.asarray(y, dtype=float)
        return np.where(y > 0, self.dist.sf(self._square(y)), 1.0)

    def logpdf(self, y):
        y = np.asarray(y, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = self.dist.logpdf(self._square(y)) + np.log(2.0 * y / self.scale)
        return np.where(y > 0, out, -np.inf)

    def quantile(self, u):
        return np.sqrt(self.scale * self.dist.ppf(_check_probability(u)))

    def isf(self, u):
        return np.sqrt(self.scale * self.dist.isf(_check_probability(u)))

    def sample(self, rng, size=None):
        return np.sqrt(self.scale * self.dist.rvs(size=size, random_state=rng))

    def mean(self) -> float:
        return float(self.dist.expect(lambda x: np.sqrt(self.scale * x)))


class ScaledSqrtF(_SqrtScaled):
    """``sqrt(scale * F(d1, d2))``: the Student-t radius sqrt(n F(n, theta)) and its posteriors."""

    family: Literal["scaled_sqrt_f"] = "scaled_sqrt_f"
    d1: PositiveFloat
    d2: PositiveFloat

    @cached_property
    def dist(self):
        return stats.f(dfn=self.d1, dfd=self.d2)


class SqrtInvGamma(_SqrtScaled):
    """``sqrt(InvGamma(shape, rate))``: the Student-t mixing variable R_theta."""

    family: Literal["sqrt_inv_gamma"] = "sqrt_inv_gamma"
    shape: PositiveFloat
    rate: PositiveFloat = 1.0

    @cached_property
    def dist(self):
        return stats.invgamma(a=self.shape, scale=self.rate)


class PointMass(Dist1D):
    """Degenerate law at ``value``; the Gaussian case of an elliptical mixing."""

    family: Literal["point_mass"] = "point_mass"
    value: PositiveFloat = 1.0

    @property
    def support(self) -> tuple[float, float]:
        return self.value, self.value

    def cdf(self, x):
        return np.where(np.asarray(x, dtype=float) >= self.value, 1.0, 0.0)

    def sf(self, x):
        return 1.0 - self.cdf(x)

    def logpdf(self, x):
        return np.where(np.asarray(x, dtype=float) == self.value, np.inf, -np.inf)

    def quantile(self, u):
        return np.full_like(_check_probability(u), self.value)

    def isf(self, u):
        return self.quantile(u)

    def sample(self, rng, size=None):
        if size is None:
            return self.value
        return np.full(size, self.value)

    def mean(self) -> float:
        return self.value


Dist1DSpec = Annotated[
    Union[
        StdNormal,
        Gamma,
        InvGamma,
        SqrtChiSquared,
        FisherSnedecor,
        ScaledF,
        ScaledSqrtF,
        SqrtInvGamma,
        Exponential,
        ShiftedPareto,
        Uniform01,
        PointMass,
    ],
    Field(discriminator="family"),
]


def cdf(d: Dist1D, x: ArrayLike):
    return d.cdf(x)


def quantile(d: Dist1D, u: ArrayLike):
    return d.quantile(u)


def sample(d: Dist1D, rng: np.random.Generator, size=None):
    return d.sample(rng, size)
