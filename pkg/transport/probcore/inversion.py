from typing import Callable, Optional

import numpy as np
from scipy import optimize

from ..errors import NumericalError

MAX_BRACKET_DOUBLINGS = 200


def invert_monotone(
    func: Callable[[float], float],
    target: float,
    lo: float,
    hi: float,
    derivative: Optional[Callable[[float], float]] = None,
    increasing: bool = True,
    xtol: float = 1e-12,
    newton_steps: int = 3,
) -> float:
    """Solve ``func(x) = target`` for a monotone ``func`` on ``[lo, hi]``.

    ``hi`` may be infinite, in which case the bracket is grown by doubling.
    Bisection to width ``xtol`` is followed by a few Newton steps that are kept only
    while they stay inside the final bracket.
    """
    sign = 1.0 if increasing else -1.0

    def residual(x: float) -> float:
        return sign * (float(func(x)) - target)

    if not np.isfinite(hi):
        hi = max(1.0, 2.0 * lo)
        for _ in range(MAX_BRACKET_DOUBLINGS):
            if residual(hi) >= 0.0:
                break
            lo, hi = hi, 2.0 * hi
        else:
            raise NumericalError(f"Could not bracket root for target {target!r}")

    f_lo, f_hi = residual(lo), residual(hi)
    if f_lo >= 0.0:
        return float(lo)
    if f_hi <= 0.0:
        return float(hi)

    x = optimize.bisect(residual, lo, hi, xtol=xtol, maxiter=2000)
    if derivative is None:
        return float(x)

    left, right = x - xtol, x + xtol
    for _ in range(newton_steps):
        slope = sign * float(derivative(x))
        if not np.isfinite(slope) or slope <= 0.0:
            break
        step = residual(x) / slope
        candidate = x - step
        if not (left <= candidate <= right):
            break
        x = candidate
    return float(x)
