from typing import Callable

import numpy as np

from ..errors import SliceSamplingError

DEFAULT_BURN_IN = 100
DEFAULT_WIDTH = 1.0
DEFAULT_MAX_EXPANSIONS = 50


def slice_sample_1d(
    logdensity: Callable[[float], float],
    x0: float,
    n: int,
    rng: np.random.Generator,
    burn_in: int = DEFAULT_BURN_IN,
    width: float = DEFAULT_WIDTH,
    max_expansions: int = DEFAULT_MAX_EXPANSIONS,
    thin: int = 1,
) -> np.ndarray:
    """Univariate slice sampler with stepping-out and shrinkage.

    ``logdensity`` may be unnormalised and should return ``-inf`` outside the support.
    Returns ``n`` states kept every ``thin`` sweeps after ``burn_in`` sweeps.
    """
    if n <= 0:
        return np.empty(0)

    x = float(x0)
    log_px = float(logdensity(x))
    if not np.isfinite(log_px):
        raise SliceSamplingError(f"Log-density is not finite at the initial state {x0!r}")

    draws = np.empty(n)
    kept = 0
    sweep = 0
    while kept < n:
        log_level = log_px - rng.standard_exponential()

        # Create a horizontal interval (left, right) enclosing x
        left = x - rng.uniform() * width
        right = left + width
        for side in ("left", "right"):
            expansions = 0
            while True:
                edge = left if side == "left" else right
                if logdensity(edge) <= log_level:
                    break
                expansions += 1
                if expansions > max_expansions:
                    raise SliceSamplingError(
                        f"Slice still open on the {side} after {max_expansions} expansions of width {width}"
                    )
                if side == "left":
                    left -= width
                else:
                    right += width

        # Propose and shrink until a point inside the slice is found
        while True:
            proposal = rng.uniform(left, right)
            log_pp = float(logdensity(proposal))
            if log_pp > log_level:
                x, log_px = proposal, log_pp
                break
            if proposal > x:
                right = proposal
            else:
                left = proposal
            if right - left <= 1e-14 * (1.0 + abs(x)):
                raise SliceSamplingError(f"Slice interval collapsed onto {x!r}")

        if sweep >= burn_in and (sweep - burn_in) % thin == 0:
            draws[kept] = x
            kept += 1
        sweep += 1
    return draws
