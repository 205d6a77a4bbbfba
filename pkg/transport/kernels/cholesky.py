from typing import NamedTuple, Sequence

import numpy as np
from scipy.linalg import lapack

from config.logger import logger
from config.settings import settings
from ..errors import NotPositiveDefiniteError


class CholeskyResult(NamedTuple):
    factor: np.ndarray
    jitter: float


def cholesky_psd(G: np.ndarray, jitter_ladder: Sequence[float] | None = None) -> CholeskyResult:
    """Lower Cholesky factor of ``G + eps I``.

    ``eps`` is the first rung of the ladder (relative to the largest diagonal
    entry) for which the factorisation succeeds. A nonzero ``eps`` is logged.
    """
    G = np.asarray(G, dtype=float)
    ladder = settings.JITTER_LADDER if jitter_ladder is None else jitter_ladder
    n = G.shape[0]
    if n == 0:
        return CholeskyResult(np.zeros((0, 0)), 0.0)

    scale = float(np.max(np.abs(np.diag(G))))
    scale = scale if scale > 0.0 else 1.0
    minor, eps = 0, 0.0
    for rung in ladder:
        eps = rung * scale
        L, info = lapack.dpotrf(G + eps * np.eye(n), lower=1, clean=1, overwrite_a=0)
        if info == 0:
            if eps > 0.0:
                logger.warning(f"Cholesky needed jitter {eps:.3e} on a {n}x{n} matrix")
            return CholeskyResult(L, eps)
        if info < 0:
            raise ValueError(f"dpotrf: illegal value in argument {-info}")
        minor = info
    raise NotPositiveDefiniteError(minor, eps)


def psd_factor(C: np.ndarray, tol: float) -> np.ndarray:
    """Square root F with F F^T = C for a positive semi-definite C.

    Uses pivoted Cholesky; directions with remaining variance below ``tol`` are
    dropped, so an exactly degenerate C (prediction at observed inputs without
    noise) gets a zero factor instead of a jittered one. F is lower triangular
    only up to the pivoting permutation.
    """
    C = np.asarray(C, dtype=float)
    n = C.shape[0]
    if n == 0:
        return np.zeros((0, 0))
    c, piv, rank, info = lapack.dpstrf(C, tol=tol, lower=1)
    if info < 0:
        raise ValueError(f"dpstrf: illegal value in argument {-info}")
    # dpstrf compares only the first pivot with zero
    pivots = np.diag(c)[:rank] ** 2
    rank = int(np.sum(np.cumprod(pivots > tol)))
    L = np.tril(c)
    L[:, rank:] = 0.0
    F = np.empty_like(L)
    F[piv - 1] = L
    residual = float(np.max(np.abs(F @ F.T - C)))
    if residual > max(1e3 * tol, 1e-12):
        raise NotPositiveDefiniteError(rank + 1, 0.0)
    return F
