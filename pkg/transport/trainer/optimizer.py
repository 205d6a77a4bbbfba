"""iRprop- building blocks: finite-difference gradients, minibatch schedules, the step rule."""
from concurrent.futures import Executor
from typing import Callable, List, NamedTuple, Optional

import numpy as np

from config.logger import logger

DEFAULT_FD_STEP = 1e-5


class GradientResult(NamedTuple):
    grad: np.ndarray
    # coordinates where both offsets were infinite
    flagged: List[int]


def finite_diff_grad(
    objective: Callable[[np.ndarray], float],
    params: np.ndarray,
    fd_step: float = DEFAULT_FD_STEP,
    f0: Optional[float] = None,
    executor: Optional[Executor] = None,
) -> GradientResult:
    """Central differences with step ``fd_step * (1 + |p_i|)``.

    A coordinate whose offset value is infinite on one side falls back to the one-sided
    difference against ``f0``; infinite on both sides gives zero and is flagged.
    """
    params = np.asarray(params, dtype=float)
    n = params.size
    h = fd_step * (1.0 + np.abs(params))
    offsets = []
    for i in range(n):
        up, down = params.copy(), params.copy()
        up[i] += h[i]
        down[i] -= h[i]
        offsets.extend([up, down])
    values = np.array(list(executor.map(objective, offsets) if executor else map(objective, offsets)), dtype=float)
    f_up, f_down = values[0::2], values[1::2]

    grad = np.zeros(n)
    flagged: List[int] = []
    for i in range(n):
        up_ok, down_ok = np.isfinite(f_up[i]), np.isfinite(f_down[i])
        if up_ok and down_ok:
            grad[i] = (f_up[i] - f_down[i]) / (2.0 * h[i])
            continue
        if not (up_ok or down_ok):
            flagged.append(i)
            continue
        if f0 is None:
            f0 = float(objective(params))
        grad[i] = (f_up[i] - f0) / h[i] if up_ok else (f0 - f_down[i]) / h[i]
    if flagged:
        logger.debug(f"Finite differences infinite on both sides for coordinates {flagged}")
    return GradientResult(grad, flagged)


def minibatch_indices(n: int, batch: int, rng: np.random.Generator, iterations: int) -> List[np.ndarray]:
    """Index sets for ``iterations`` steps: each epoch is a fresh permutation cut into batches."""
    if not 1 <= batch <= n:
        raise ValueError(f"batch size must lie in [1, {n}], got {batch}")
    per_epoch = -(-n // batch)
    schedule: List[np.ndarray] = []
    while len(schedule) < iterations:
        for part in np.array_split(rng.permutation(n), per_epoch):
            schedule.append(np.sort(part))
    return schedule[:iterations]


class RpropState(NamedTuple):
    step: np.ndarray
    prev_grad: np.ndarray


def rprop_update(
    params: np.ndarray,
    grad: np.ndarray,
    state: RpropState,
    eta_minus: float,
    eta_plus: float,
    step_min: float,
    step_max: float,
) -> tuple[np.ndarray, RpropState]:
    """One iRprop- step: grow/shrink per-coordinate steps on sign agreement, no backtracking."""
    product = grad * state.prev_grad
    step = state.step.copy()
    step[product > 0] = np.minimum(step[product > 0] * eta_plus, step_max)
    step[product < 0] = np.maximum(step[product < 0] * eta_minus, step_min)
    grad = np.where(product < 0, 0.0, grad)
    return params - np.sign(grad) * step, RpropState(step, grad)
