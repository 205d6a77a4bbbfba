"""Archimedean radial transport.

White noise x is first mapped coordinate-wise to e = -log Phi(x) ~ Exp(1), then
its l1 radius Gamma(n, 1) is replaced by the radius S_n / W of a simplicial law
with survival function psi(sum y_i). The outputs y have P(y_i > s) = psi(s) and
u = psi(y) follows the Archimedean copula C(u) = psi(sum psi^-1(u_i)).
"""
from __future__ import annotations

from typing import TYPE_CHECKING, Optional

import numpy as np
from scipy.special import gammaln

from ..errors import DomainError
from ..probcore import Gamma, ScaledF
from ..warpings.warpings import NegLogNormCDF
from .base import TransportLayer
from .elliptical import FD_REL_STEP, _compose

if TYPE_CHECKING:
    from ..types.config import ClaytonCopula, IndependenceCopula

SUPPORTED_GENERATORS = ("independence", "clayton")


class ArchimedeanGenerator:
    """psi, its inverse and derivatives for the independence and Clayton generators.

    Clayton: psi(s) = (1 + s)^(-1/theta), the Laplace transform of W ~ Gamma(1/theta, 1).
    """

    def __init__(self, family: str, theta: Optional[float] = None):
        if family not in SUPPORTED_GENERATORS:
            raise NotImplementedError(f"Archimedean generator {family!r} is not supported")
        self.family = family
        self.theta = theta if family == "clayton" else None

    def psi(self, s):
        s = np.asarray(s, dtype=float)
        if self.theta is None:
            return np.exp(-s)
        return (1.0 + s) ** (-1.0 / self.theta)

    def psi_inv(self, u):
        u = np.asarray(u, dtype=float)
        if self.theta is None:
            return -np.log(u)
        return u ** (-self.theta) - 1.0

    def log_abs_derivative(self, s, k: int = 1):
        """log |psi^(k)(s)|."""
        s = np.asarray(s, dtype=float)
        if self.theta is None:
            return -s
        a = 1.0 / self.theta
        return gammaln(a + k) - gammaln(a) - (a + k) * np.log1p(s)

    def mixing(self, rng: np.random.Generator, size, observed: int = 0, offset: float = 0.0):
        """Draws of W given ``observed`` coordinates with sum psi^-1(o_i) = ``offset``."""
        a = 1.0 / self.theta
        return rng.gamma(a + observed, 1.0 / (1.0 + offset), size=size)


class ArchimedeanLayer(TransportLayer):
    role = "copula"

    def __init__(self, config: "IndependenceCopula | ClaytonCopula"):
        self.config = config
        self.kind = config.family
        self.generator = ArchimedeanGenerator(config.family, getattr(config, "theta", None))
        self.pre = NegLogNormCDF()

    @property
    def is_identity(self) -> bool:
        return self.generator.theta is None

    def radius_law(self, n: int):
        """Law of the l1 radius of the outputs: Gamma(n, 1), or theta n F(2n, 2/theta) for Clayton."""
        if self.is_identity:
            return Gamma(shape=n, rate=1.0)
        theta = self.generator.theta
        return ScaledF(scale=theta * n, d1=2.0 * n, d2=2.0 / theta)

    def alpha(self, n: int, r):
        r = np.asarray(r, dtype=float)
        if self.is_identity:
            return r.copy()
        src, dst = Gamma(shape=n, rate=1.0), self.radius_law(n)
        return _compose(r, src.cdf, src.sf, dst.quantile, dst.isf)

    def alpha_inv(self, n: int, rho):
        rho = np.asarray(rho, dtype=float)
        if self.is_identity:
            return rho.copy()
        src, dst = self.radius_law(n), Gamma(shape=n, rate=1.0)
        return _compose(rho, src.cdf, src.sf, dst.quantile, dst.isf)

    def log_alpha_prime(self, n: int, r: float) -> float:
        if self.is_identity:
            return 0.0
        h = FD_REL_STEP * (1.0 + r)
        lo = max(r - h, 0.0)
        a, b = self.alpha(n, np.array([lo, r + h]))
        return float(np.log((b - a) / (r + h - lo)))

    def forward(self, t, x):
        e = self.pre.transform(x)
        if self.is_identity:
            return e
        n = e.shape[-1]
        r = np.sum(e, axis=-1, keepdims=True)
        return self.alpha(n, r) / r * e

    def _radial_inverse(self, y: np.ndarray) -> np.ndarray:
        bad = ~(y > 0.0)
        if np.any(bad):
            raise DomainError("Archimedean layer needs strictly positive values", int(np.flatnonzero(bad.reshape(-1))[0] % y.shape[-1]))
        if self.is_identity:
            return y
        n = y.shape[-1]
        rho = np.sum(y, axis=-1, keepdims=True)
        return self.alpha_inv(n, rho) / rho * y

    def inverse(self, t, y):
        return self.pre.inverse(self._radial_inverse(np.asarray(y, dtype=float)))

    def logdet_inv(self, t, y) -> float:
        """Radial term (n - 1) log(r / rho) - log alpha'(r) plus the -log Phi pre-map term."""
        y = np.asarray(y, dtype=float)
        e = self._radial_inverse(y)
        x = self.pre.inverse(e)
        total = -float(np.sum(self.pre.log_derivative(x)))
        if not self.is_identity:
            n = y.shape[-1]
            rho = float(np.sum(y))
            r = float(self.alpha_inv(n, rho))
            head = (n - 1) * np.log(r / rho) if n > 1 else 0.0
            total += float(head - self.log_alpha_prime(n, r))
        return total

    def marginal_cdf(self, x):
        """F(x) = 1 - psi(x) for each output coordinate."""
        x = np.asarray(x, dtype=float)
        return np.where(x > 0.0, 1.0 - self.generator.psi(np.maximum(x, 0.0)), 0.0)

    def conditional_sample(self, observed_u, n_bar: int, rng: np.random.Generator, size: int = 1) -> np.ndarray:
        """Copula draws at ``n_bar`` new coordinates given copula values at observed ones.

        W | o ~ Gamma(1/theta + k, 1 + sum psi^-1(o_i)), then u_j = psi(E_j / W) with E_j ~ Exp(1).
        """
        if self.is_identity:
            return rng.uniform(size=(size, n_bar))
        o = np.asarray(observed_u, dtype=float).reshape(-1)
        offset = float(np.sum(self.generator.psi_inv(o))) if o.size else 0.0
        w = self.generator.mixing(rng, size, observed=o.size, offset=offset)
        e = rng.standard_exponential((size, n_bar))
        return self.generator.psi(e / w[:, None])

    def conditional_cdf(self, u, observed_u):
        """C(u | o) = psi^(k)(psi^-1(u) + a) / psi^(k)(a) for a single new coordinate."""
        o = np.asarray(observed_u, dtype=float).reshape(-1)
        k = o.size
        a = float(np.sum(self.generator.psi_inv(o))) if k else 0.0
        if k == 0:
            return np.asarray(u, dtype=float)
        g = self.generator
        return np.exp(g.log_abs_derivative(g.psi_inv(u) + a, k) - g.log_abs_derivative(a, k))

    def copula_cdf(self, u):
        """C(u) = psi(sum psi^-1(u_i)) over the last axis."""
        return self.generator.psi(np.sum(self.generator.psi_inv(u), axis=-1))

    def sample_copula(self, n: int, rng: np.random.Generator, size: int) -> np.ndarray:
        """Unconditional copula draws by the mixing-variable construction."""
        return self.conditional_sample([], n, rng, size)

    def posterior_sample(self, y_obs: np.ndarray, n_bar: int, rng: np.random.Generator, size: int) -> np.ndarray:
        """Layer outputs at new inputs given the outputs ``y_obs`` at the observed ones."""
        self._radial_inverse(np.asarray(y_obs, dtype=float))
        u = self.conditional_sample(self.generator.psi(y_obs), n_bar, rng, size)
        return self.generator.psi_inv(u)


def arch_forward(layer: ArchimedeanLayer, x) -> np.ndarray:
    return layer.forward(None, x)


def arch_logdet_inv(layer: ArchimedeanLayer, n: int, y) -> float:
    y = np.asarray(y, dtype=float)
    assert y.shape[-1] == n
    return layer.logdet_inv(None, y)


def arch_marginal_cdf(layer: ArchimedeanLayer, x):
    return layer.marginal_cdf(x)


def arch_conditional_sample(layer: ArchimedeanLayer, observed_u, n_bar: int, rng: np.random.Generator, size: int = 1):
    return layer.conditional_sample(observed_u, n_bar, rng, size)


def arch_sample(layer: ArchimedeanLayer, n: int, rng: np.random.Generator, size: int) -> np.ndarray:
    return layer.sample_copula(n, rng, size)


def empirical_copula(u: np.ndarray, point) -> float:
    """Fraction of rows of ``u`` that are componentwise below ``point``."""
    return float(np.mean(np.all(np.asarray(u) <= np.asarray(point, dtype=float), axis=-1)))
