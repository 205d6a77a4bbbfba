"""Elliptical radial transport T(x) = alpha(|x|_2) x / |x|_2.

alpha = F^-1_{R_{n,theta}} o F_{R_n} turns the chi radius of white noise into the
radius of an elliptical law, which sets an elliptical copula. Three mixings:
identity (Gaussian), closed-form Student-t, and a general positive mixing law
handled through ``ProductRadialCDF``.
"""
from __future__ import annotations

import threading
from typing import TYPE_CHECKING, Callable, Dict, Optional

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy import special
from scipy.special import gammaln

from config.settings import settings
from ..errors import SingularPointError
from ..probcore import ProductRadialCDF, ScaledSqrtF, SqrtChiSquared, slice_sample_1d
from .base import TransportLayer

if TYPE_CHECKING:
    from ..types.config import GaussianCopula, GeneralEllipticalCopula, StudentTCopula

# below this 1/theta the Student-t layer is the exact identity
IDENTITY_NU_INV = 1e-8
# probabilities are kept away from 0 so quantiles stay finite
TINY_PROB = 1e-300
GRID_TAIL = 1e-10
FD_REL_STEP = 1e-5
POSTERIOR_BURN_IN = 100
POSTERIOR_THIN = 5


def _compose(r, src_cdf, src_sf, dst_quantile, dst_isf) -> np.ndarray:
    """dst^-1(src(r)), switching to survival functions in the upper tail."""
    r = np.asarray(r, dtype=float)
    out = np.zeros(r.shape)
    positive = r > 0.0
    if not np.any(positive):
        return out
    rp = r[positive]
    lower = np.asarray(src_cdf(rp), dtype=float)
    upper = np.asarray(src_sf(rp), dtype=float)
    use_sf = lower > 0.5
    vals = np.empty(rp.shape)
    if np.any(~use_sf):
        vals[~use_sf] = dst_quantile(np.clip(lower[~use_sf], TINY_PROB, 0.5))
    if np.any(use_sf):
        vals[use_sf] = dst_isf(np.clip(upper[use_sf], TINY_PROB, 0.5))
    out[positive] = vals
    return out


def _chi_probs(n: int, r: np.ndarray):
    x = 0.5 * r * r
    return special.gammainc(0.5 * n, x), special.gammaincc(0.5 * n, x)


def _studentt_alpha(n: int, theta: float, r) -> np.ndarray:
    """Student-t radial map through incomplete beta inverses.

    B = rho^2 / (rho^2 + theta) is Beta(n/2, theta/2); the upper tail is inverted on
    1 - B ~ Beta(theta/2, n/2) so that tiny survival probabilities keep a finite radius.
    """
    r = np.asarray(r, dtype=float)
    out = np.zeros(r.shape)
    positive = r > 0.0
    if not np.any(positive):
        return out
    a, b = 0.5 * n, 0.5 * theta
    lower, upper = _chi_probs(n, r[positive])
    use_sf = lower > 0.5
    rho2 = np.empty(lower.shape)
    if np.any(~use_sf):
        beta = special.betaincinv(a, b, np.clip(lower[~use_sf], TINY_PROB, 0.5))
        rho2[~use_sf] = theta * beta / (1.0 - beta)
    if np.any(use_sf):
        comp = special.betaincinv(b, a, np.clip(upper[use_sf], TINY_PROB, 0.5))
        rho2[use_sf] = theta * (1.0 - comp) / comp
    out[positive] = np.sqrt(rho2)
    return out


def _studentt_alpha_inv(n: int, theta: float, rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=float)
    out = np.zeros(rho.shape)
    positive = rho > 0.0
    if not np.any(positive):
        return out
    a, b = 0.5 * n, 0.5 * theta
    s = rho[positive] ** 2
    lower = special.betainc(a, b, s / (s + theta))
    upper = special.betainc(b, a, theta / (s + theta))
    use_sf = lower > 0.5
    x = np.empty(s.shape)
    if np.any(~use_sf):
        x[~use_sf] = special.gammaincinv(a, np.clip(lower[~use_sf], TINY_PROB, 0.5))
    if np.any(use_sf):
        x[use_sf] = special.gammainccinv(a, np.clip(upper[use_sf], TINY_PROB, 0.5))
    out[positive] = np.sqrt(2.0 * x)
    return out


def _log_sphere_area(n: int) -> float:
    """log of the surface area 2 pi^(n/2) / Gamma(n/2) of the unit sphere in R^n."""
    return float(np.log(2.0) + 0.5 * n * np.log(np.pi) - gammaln(0.5 * n))


class EllipticalLayer(TransportLayer):
    role = "copula"

    def __init__(self, config: "GaussianCopula | StudentTCopula | GeneralEllipticalCopula"):
        self.config = config
        self.kind = config.family
        self.theta: Optional[float] = None
        self.mixing = None
        if config.family == "student_t" and config.nu_inv >= IDENTITY_NU_INV:
            self.mode = "student_t"
            self.theta = 1.0 / config.nu_inv
        elif config.family == "elliptical":
            self.mode = "general"
            self.mixing = config.mixing
        else:
            self.mode = "identity"
        self._laws: Dict[int, object] = {}
        self._alpha_grids: Dict[int, Callable] = {}
        self._lock = threading.Lock()

    @property
    def is_identity(self) -> bool:
        return self.mode == "identity"

    # --- radial laws -----------------------------------------------------------

    def radius_law(self, n: int):
        """Law of R_{n,theta}: the radius of the n-dimensional elliptical reference."""
        law = self._laws.get(n)
        if law is None:
            if self.mode == "student_t":
                law = ScaledSqrtF(scale=n, d1=n, d2=self.theta)
            elif self.mode == "general":
                law = ProductRadialCDF(self.mixing, n)
            else:
                law = SqrtChiSquared(dof=n)
            with self._lock:
                law = self._laws.setdefault(n, law)
        return law

    def _alpha_exact(self, n: int, r):
        law, chi = self.radius_law(n), SqrtChiSquared(dof=n)
        scalar_quantile = np.vectorize(law.quantile, otypes=[float])
        scalar_isf = np.vectorize(law.isf, otypes=[float])
        return _compose(r, chi.cdf, chi.sf, scalar_quantile, scalar_isf)

    def _alpha_grid(self, n: int):
        """Monotone interpolant of log alpha against log r, with its validity range."""
        grid = self._alpha_grids.get(n)
        if grid is None:
            law = self.radius_law(n)
            rho = np.geomspace(law.quantile(GRID_TAIL), law.isf(GRID_TAIL), settings.ALPHA_GRID_SIZE)
            r = self.alpha_inv(n, rho)
            keep = np.concatenate([[True], np.diff(r) > 0.0])
            r, rho = r[keep], rho[keep]
            grid = (PchipInterpolator(np.log(r), np.log(rho)), float(r[0]), float(r[-1]))
            with self._lock:
                grid = self._alpha_grids.setdefault(n, grid)
        return grid

    def alpha(self, n: int, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        if self.mode == "identity":
            return r.copy()
        if self.mode == "student_t":
            return _studentt_alpha(n, self.theta, r)
        interp, lo, hi = self._alpha_grid(n)
        inside = (r >= lo) & (r <= hi)
        out = np.empty(r.shape)
        if np.any(inside):
            r_in = r[inside]
            log_r = np.log(r_in)
            rho = np.exp(interp(log_r))
            # one Newton step against the exact inverse
            slope = rho * interp(log_r, 1) / r_in
            out[inside] = rho - (self.alpha_inv(n, rho) - r_in) / slope
        if np.any(~inside):
            out[~inside] = self._alpha_exact(n, r[~inside])
        return out

    def alpha_inv(self, n: int, rho) -> np.ndarray:
        rho = np.asarray(rho, dtype=float)
        if self.mode == "identity":
            return rho.copy()
        if self.mode == "student_t":
            return _studentt_alpha_inv(n, self.theta, rho)
        law, chi = self.radius_law(n), SqrtChiSquared(dof=n)
        return _compose(rho, law.cdf, law.sf, chi.quantile, chi.isf)

    def log_alpha_prime(self, n: int, r: float, rho: Optional[float] = None) -> float:
        """log alpha'(r); ``rho`` is alpha(r) if known.

        Closed form for the Student-t mixing, central differences of the exact inverse otherwise.
        """
        if self.mode == "identity":
            return 0.0
        if self.mode == "student_t":
            # alpha'(r) = f_{R_n}(r) / f_{R_{n,theta}}(alpha(r))
            rho = float(self.alpha(n, r)) if rho is None else rho
            return float(SqrtChiSquared(dof=n).logpdf(r) - self.radius_law(n).logpdf(rho))
        # alpha is tabulated, alpha^-1 is exact: differentiate the exact side
        rho = float(self.alpha(n, r)) if rho is None else rho
        k = FD_REL_STEP * (1.0 + rho)
        a, b = self.alpha_inv(n, np.array([max(rho - k, 0.0), rho + k]))
        return float(-np.log((b - a) / (rho + k - max(rho - k, 0.0))))

    # --- maps ------------------------------------------------------------------

    def forward(self, t, x):
        x = np.asarray(x, dtype=float)
        if self.mode == "identity":
            return x.copy()
        n = x.shape[-1]
        r = np.linalg.norm(x, axis=-1, keepdims=True)
        with np.errstate(invalid="ignore", divide="ignore"):
            ratio = np.where(r > 0.0, self.alpha(n, r) / r, 0.0)
        return ratio * x

    def inverse(self, t, y):
        y = np.asarray(y, dtype=float)
        if self.mode == "identity":
            return y.copy()
        n = y.shape[-1]
        rho = np.linalg.norm(y, axis=-1, keepdims=True)
        with np.errstate(invalid="ignore", divide="ignore"):
            ratio = np.where(rho > 0.0, self.alpha_inv(n, rho) / rho, 0.0)
        return ratio * y

    def logdet_inv(self, t, y) -> float:
        """(n - 1) log(alpha^-1(rho) / rho) - log alpha'(alpha^-1(rho)), rho = |y|_2."""
        if self.mode == "identity":
            return 0.0
        y = np.asarray(y, dtype=float)
        n = y.shape[-1]
        rho = float(np.linalg.norm(y))
        if rho == 0.0:
            raise SingularPointError("Radial log-determinant is undefined at the origin")
        r = float(self.alpha_inv(n, rho))
        head = (n - 1) * np.log(r / rho) if n > 1 else 0.0
        return float(head - self.log_alpha_prime(n, r, rho))

    def log_radial_density(self, n: int, rho) -> np.ndarray:
        """log h_n(rho^2): the density of the n-dimensional spherical law at any point of norm rho."""
        rho = np.asarray(rho, dtype=float)
        with np.errstate(divide="ignore"):
            return self.radius_law(n).logpdf(rho) - (n - 1) * np.log(rho) - _log_sphere_area(n)

    # --- posterior -------------------------------------------------------------

    def posterior_sample(self, x_obs: np.ndarray, n_bar: int, rng: np.random.Generator, size: int) -> np.ndarray:
        """Draws of the layer output at new inputs given its output ``x_obs`` at the observed ones."""
        if self.mode == "identity":
            return rng.standard_normal((size, n_bar))
        x_obs = np.asarray(x_obs, dtype=float)
        n = x_obs.shape[-1]
        norm_y = float(np.linalg.norm(x_obs))
        if self.mode == "student_t":
            beta = studentt_posterior_radius(self, norm_y, n, n_bar, rng, size)
        else:
            beta = ell_posterior_radius_general(self, norm_y, n, n_bar, rng, size)
        g = rng.standard_normal((size, n_bar))
        g /= np.linalg.norm(g, axis=-1, keepdims=True)
        return np.asarray(beta).reshape(size, 1) * g


def ell_alpha(layer: EllipticalLayer, n: int, r) -> np.ndarray:
    return layer.alpha(n, r)


def ell_forward(layer: EllipticalLayer, x) -> np.ndarray:
    return layer.forward(None, x)


def ell_inverse(layer: EllipticalLayer, y) -> np.ndarray:
    return layer.inverse(None, y)


def ell_logdet_inv(layer: EllipticalLayer, n: int, y) -> float:
    y = np.asarray(y, dtype=float)
    assert y.shape[-1] == n
    return layer.logdet_inv(None, y)


def studentt_posterior_radius(
    layer: EllipticalLayer, norm_y: float, n: int, n_bar: int, rng: np.random.Generator, size=None
):
    """Radius of the new block given the observed block: sqrt(n_bar (theta + |y|^2) / (theta + n) F(n_bar, theta + n))."""
    if layer.theta is None:
        return SqrtChiSquared(dof=n_bar).sample(rng, size)
    theta = layer.theta
    law = ScaledSqrtF(scale=n_bar * (theta + norm_y**2) / (theta + n), d1=n_bar, d2=theta + n)
    return law.sample(rng, size)


def ell_posterior_radius_general(
    layer: EllipticalLayer, norm_y: float, n: int, n_bar: int, rng: np.random.Generator, size: int = 1
) -> np.ndarray:
    """Slice-sampled radius of the new block; the target density of beta is
    beta^(n_bar - 1) h_{n + n_bar}(beta^2 + |y|^2)."""
    law = layer.radius_law(n + n_bar)
    m = n + n_bar

    def logdensity(beta: float) -> float:
        if beta <= 0.0:
            return -np.inf
        s = np.sqrt(beta * beta + norm_y * norm_y)
        return float((n_bar - 1) * np.log(beta) + law.logpdf(s) - (m - 1) * np.log(s))

    x0 = float(np.sqrt(n_bar))
    width = max(1.0, x0)
    return slice_sample_1d(
        logdensity, x0, size, rng, burn_in=POSTERIOR_BURN_IN, width=width, thin=POSTERIOR_THIN
    )
