"""Covariance transport y = m_t + L_t x with L_t a lower Cholesky factor.

Backward solves at observed inputs use the full kernel k = r + sigma0 delta;
forward prediction at new inputs uses the noise-free part r. In sparse mode the
map at any inputs is the Gaussian conditional given trainable pseudo-data (s, z).
"""
from __future__ import annotations

import threading
from typing import TYPE_CHECKING, Callable, Dict, Hashable, List, Tuple

import numpy as np
from scipy.linalg import solve_triangular

from ..errors import ConfigError
from ..kernels import cholesky_psd, gram, psd_factor
from .base import TransportLayer

if TYPE_CHECKING:
    from ..types.config import CovarianceConfig

# conditional variances below this fraction of the prior variance are treated as zero
CONDITIONAL_TOL = 1e-12


class CovarianceLayer(TransportLayer):
    role = "covariance"
    kind = "covariance"

    def __init__(self, config: "CovarianceConfig"):
        self.config = config
        self.kernel = config.effective_kernel()
        self.sparse = config.mode == "sparse"
        self.pseudo_inputs = np.asarray(config.pseudo_inputs, dtype=float)
        self.pseudo_values = np.asarray(config.pseudo_values, dtype=float)
        if self.sparse and self.pseudo_inputs.size == 0:
            raise ConfigError("Sparse covariance layer has no pseudo data; initialise it from training data first")
        self.jitter_events: List[float] = []
        self._cache: Dict[Hashable, object] = {}
        self._lock = threading.Lock()

    def _cached(self, key: Hashable, build: Callable[[], object]):
        value = self._cache.get(key)
        if value is None:
            value = build()
            with self._lock:
                value = self._cache.setdefault(key, value)
        return value

    def _cholesky(self, G: np.ndarray) -> np.ndarray:
        L, eps = cholesky_psd(G)
        if eps > 0.0:
            with self._lock:
                self.jitter_events.append(eps)
        return L

    # --- pseudo-data helpers ---------------------------------------------------

    def _pseudo_factor(self) -> Tuple[np.ndarray, np.ndarray]:
        """Cholesky factor of the noisy pseudo-input Gram and L_s^-1 z."""

        def build():
            L_s = self._cholesky(gram(self.kernel, self.pseudo_inputs, self.pseudo_inputs, include_noise=True))
            return L_s, solve_triangular(L_s, self.pseudo_values, lower=True)

        return self._cached(("pseudo",), build)

    def _pseudo_conditional(self, t: np.ndarray, noisy_block: bool) -> Tuple[np.ndarray, np.ndarray]:
        """Mean and covariance of the process at ``t`` given the pseudo data."""
        L_s, w = self._pseudo_factor()
        A = solve_triangular(L_s, gram(self.kernel, self.pseudo_inputs, t, include_noise=False), lower=True)
        C = gram(self.kernel, t, t, include_noise=noisy_block) - A.T @ A
        return A.T @ w, C

    # --- observed side ---------------------------------------------------------

    def observed(self, t: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """``(m_t, L_t)`` for the map at observed inputs (backward step, noisy)."""
        t = np.asarray(t, dtype=float)

        def build():
            if not self.sparse:
                return np.zeros(t.shape), self._cholesky(gram(self.kernel, t, t, include_noise=True))
            mean, C = self._pseudo_conditional(t, noisy_block=True)
            return mean, self._cholesky(C)

        return self._cached(("observed", t.tobytes()), build)

    def factor(self, t: np.ndarray) -> np.ndarray:
        return self.observed(t)[1]

    def forward(self, t, x):
        mean, L = self.observed(t)
        return mean + np.asarray(x, dtype=float) @ L.T

    def inverse(self, t, y):
        mean, L = self.observed(t)
        r = np.asarray(y, dtype=float) - mean
        return solve_triangular(L, r.T, lower=True, check_finite=False).T

    def logdet_inv(self, t, y=None) -> float:
        return -float(np.sum(np.log(np.diag(self.factor(t)))))

    # --- prediction side -------------------------------------------------------

    def _prediction_factor(self, C: np.ndarray, prior_diag: np.ndarray) -> np.ndarray:
        scale = float(np.max(prior_diag)) if prior_diag.size else 1.0
        return psd_factor(C, tol=CONDITIONAL_TOL * max(scale, 1e-300))

    def posterior_map(self, t, t_bar, x_ref, u) -> np.ndarray:
        """ybar = S_bt S_tt^-1 y + chol(S_bb - S_bt S_tt^-1 S_tb) u, with y = m_t + L_t x_ref.

        S_tt carries the noise; the other blocks are noise-free. In sparse mode the
        data enter through the pseudo data and ``x_ref`` is not used.
        """
        if self.sparse:
            return self.sparse_forward(t_bar, u)
        t = np.asarray(t, dtype=float)
        t_bar = np.asarray(t_bar, dtype=float)

        def build():
            L = self.factor(t)
            V = solve_triangular(L, gram(self.kernel, t, t_bar, include_noise=False), lower=True)
            K_bb = gram(self.kernel, t_bar, t_bar, include_noise=False)
            return V, self._prediction_factor(K_bb - V.T @ V, np.diag(K_bb))

        V, L_c = self._cached(("posterior", t.tobytes(), t_bar.tobytes()), build)
        return np.asarray(x_ref, dtype=float) @ V + np.asarray(u, dtype=float) @ L_c.T

    def sparse_forward(self, t_bar, u) -> np.ndarray:
        """ybar = S_bs S_ss^-1 z + chol(S_bb - S_bs S_ss^-1 S_sb) u (S_ss noisy, the rest noise-free)."""
        if not self.sparse:
            raise ConfigError("sparse_forward needs a covariance layer in sparse mode")
        t_bar = np.asarray(t_bar, dtype=float)

        def build():
            mean, C = self._pseudo_conditional(t_bar, noisy_block=False)
            prior = np.diag(gram(self.kernel, t_bar, t_bar, include_noise=False))
            return mean, self._prediction_factor(C, prior)

        mean, L_c = self._cached(("sparse", t_bar.tobytes()), build)
        return mean + np.asarray(u, dtype=float) @ L_c.T


def cov_forward(layer: CovarianceLayer, t, x) -> np.ndarray:
    return layer.forward(t, x)


def cov_inverse(layer: CovarianceLayer, t, y) -> np.ndarray:
    return layer.inverse(t, y)


def cov_logdet_inv(layer: CovarianceLayer, t, y=None) -> float:
    return layer.logdet_inv(t, y)


def cov_posterior_map(layer: CovarianceLayer, t, t_bar, x_ref, u) -> np.ndarray:
    return layer.posterior_map(t, t_bar, x_ref, u)


def sparse_forward(layer: CovarianceLayer, t_bar, u) -> np.ndarray:
    return layer.sparse_forward(t_bar, u)
