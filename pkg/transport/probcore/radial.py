"""Radial laws R_{n,theta} = R_theta * R_n obtained by mixing the chi radius."""
from __future__ import annotations

import numpy as np
from scipy.special import logsumexp

from config.settings import settings
from .distributions import Dist1D, PointMass, SqrtChiSquared
from .inversion import invert_monotone
from ..errors import QuadratureError

TAIL_MASS = 1e-13
MASS_TOLERANCE = 1e-6


class ProductRadialCDF:
    """CDF, survival and density of ``R_theta * R_n`` with ``R_n ~ sqrt(chi2(n))``.

    F(r) = integral of p_theta(s) F_{R_n}(r / s) ds, evaluated by fixed Gauss-Legendre
    quadrature on the log axis between the ``TAIL_MASS`` quantiles of the mixing law.
    A point-mass mixing is handled in closed form.
    """

    def __init__(self, mixing: Dist1D, dof: int, nodes: int | None = None):
        self.mixing = mixing
        self.base = SqrtChiSquared(dof=dof)
        self.dof = dof
        self.degenerate = isinstance(mixing, PointMass)
        if self.degenerate:
            self.log_nodes = np.array([np.log(mixing.value)])
            self.log_weights = np.zeros(1)
            return

        nodes = nodes or settings.QUADRATURE_NODES
        a = float(np.log(mixing.quantile(TAIL_MASS)))
        b = float(np.log(mixing.isf(TAIL_MASS)))
        x, w = np.polynomial.legendre.leggauss(nodes)
        v = 0.5 * (b - a) * x + 0.5 * (b + a)
        with np.errstate(divide="ignore"):
            log_w = np.log(w * 0.5 * (b - a)) + v + mixing.logpdf(np.exp(v))
        mass = float(np.exp(logsumexp(log_w)))
        if not np.isfinite(mass) or abs(mass - 1.0) > MASS_TOLERANCE:
            raise QuadratureError(
                f"Mixing quadrature did not converge: mass {mass!r} over log-interval "
                f"[{a:.3f}, {b:.3f}] with {nodes} nodes for {mixing!r}"
            )
        self.log_nodes = v
        self.log_weights = log_w - np.log(mass)

    @property
    def nodes(self) -> np.ndarray:
        return np.exp(self.log_nodes)

    @property
    def weights(self) -> np.ndarray:
        return np.exp(self.log_weights)

    def _ratio(self, r):
        r = np.asarray(r, dtype=float)
        return r[..., None] / self.nodes, r

    def cdf(self, r):
        ratio, r = self._ratio(r)
        out = np.sum(self.weights * self.base.cdf(ratio), axis=-1)
        return np.clip(np.where(r > 0, out, 0.0), 0.0, 1.0)

    def sf(self, r):
        ratio, r = self._ratio(r)
        out = np.sum(self.weights * self.base.sf(ratio), axis=-1)
        return np.clip(np.where(r > 0, out, 1.0), 0.0, 1.0)

    def logpdf(self, r):
        ratio, r = self._ratio(r)
        with np.errstate(divide="ignore", invalid="ignore"):
            terms = self.log_weights - self.log_nodes + self.base.logpdf(ratio)
            out = logsumexp(terms, axis=-1)
        return np.where(r > 0, out, -np.inf)

    def pdf(self, r):
        return np.exp(self.logpdf(r))

    def quantile(self, u: float) -> float:
        """Inverse CDF; pass probabilities above one half through ``isf`` instead."""
        if self.degenerate:
            return float(self.mixing.value * self.base.quantile(u))
        return invert_monotone(self.cdf, u, 0.0, np.inf, derivative=self.pdf)

    def isf(self, p: float) -> float:
        """Upper quantile: the r with sf(r) = p."""
        if self.degenerate:
            return float(self.mixing.value * self.base.isf(p))
        return invert_monotone(self.sf, p, 0.0, np.inf, derivative=lambda r: -self.pdf(r), increasing=False)


def product_radial_cdf(p: ProductRadialCDF, r):
    return p.cdf(r)
