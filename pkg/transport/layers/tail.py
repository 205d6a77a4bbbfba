"""Tail-dependence coefficients: closed forms per copula and rank-based estimates."""
from typing import Annotated, Dict, Literal, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy import stats

DEFAULT_LEVELS = (0.01, 0.005, 0.001)


class _Tail(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class StudentTTail(_Tail):
    kind: Literal["student_t"] = "student_t"
    theta: float = Field(gt=0)
    rho: float = Field(default=0.0, ge=-1.0, le=1.0)


class GaussianTail(_Tail):
    kind: Literal["gaussian"] = "gaussian"
    rho: float = Field(default=0.0, ge=-1.0, le=1.0)


class ArchimedeanTail(_Tail):
    kind: Literal["archimedean"] = "archimedean"
    generator: Literal["independence", "clayton"] = "independence"
    theta: float = Field(default=1.0, gt=0)


TailSpec = Annotated[Union[StudentTTail, GaussianTail, ArchimedeanTail], Field(discriminator="kind")]


def tail_dependence_coeffs(spec: StudentTTail | GaussianTail | ArchimedeanTail) -> Tuple[float, float]:
    """(lambda_l, lambda_u) of a bivariate copula."""
    if isinstance(spec, StudentTTail):
        if spec.rho >= 1.0:
            return 1.0, 1.0
        nu = spec.theta + 1.0
        lam = 2.0 * stats.t.cdf(-np.sqrt(nu) * np.sqrt(1.0 - spec.rho) / np.sqrt(1.0 + spec.rho), df=nu)
        return float(lam), float(lam)
    if isinstance(spec, GaussianTail):
        return (1.0, 1.0) if spec.rho >= 1.0 else (0.0, 0.0)

    if spec.generator == "clayton":
        return 2.0 ** (-1.0 / spec.theta), 0.0
    return 0.0, 0.0


def pseudo_observations(pairs: np.ndarray) -> np.ndarray:
    """Ranks scaled into (0, 1) column by column."""
    pairs = np.asarray(pairs, dtype=float)
    return stats.rankdata(pairs, axis=0) / (pairs.shape[0] + 1.0)


def empirical_tail_dependence(pairs: np.ndarray, q: float) -> Tuple[float, float]:
    """Estimates of (lambda_l, lambda_u) at level q from an (N, 2) sample."""
    u = pseudo_observations(pairs)
    low = u[:, 0] <= q
    high = u[:, 0] > 1.0 - q
    lam_l = float(np.mean(u[low, 1] <= q)) if np.any(low) else float("nan")
    lam_u = float(np.mean(u[high, 1] > 1.0 - q)) if np.any(high) else float("nan")
    return lam_l, lam_u


def empirical_tail_table(pairs: np.ndarray, levels=DEFAULT_LEVELS) -> Dict[str, Tuple[float, float]]:
    return {f"{q:g}": empirical_tail_dependence(pairs, q) for q in levels}
