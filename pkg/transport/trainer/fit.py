"""NLL minimisation: minibatch iRprop- from several starts, then a full-data polish."""
from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, NamedTuple, Optional

import numpy as np
from numpy.typing import ArrayLike

from config.logger import logger
from config.settings import settings
from ..errors import ConfigError, FitError, NumericalError
from ..probcore import make_rng, split_rng
from ..stack import LayerStack, build_layer, composite_nll, stack_nll
from ..types import FitReport
from ..types.config import StackConfig, TrainConfig
from .optimizer import RpropState, finite_diff_grad, minibatch_indices, rprop_update
from .space import ParamSpace

# perturbed starts keep interval parameters this far (in logit units) from the ends
BOUNDARY_PULL = 4.0
# the first start moves interval parameters sitting on an end (a Gaussian warm start
# has nu_inv = 0) this far inside, where the NLL still responds to them
INTERIOR_SEED = 7.0
DEFAULT_NUM_PSEUDO = 32

Objective = Callable[[np.ndarray], float]


class FitResult(NamedTuple):
    config: StackConfig
    report: FitReport


class RestartOutcome(NamedTuple):
    params: np.ndarray
    nll: float
    trace: List[float]


def make_objective(space: ParamSpace, t: np.ndarray, y: np.ndarray, index: Optional[np.ndarray] = None) -> Objective:
    """NLL as a function of the unconstrained vector; +inf wherever the parameters are unusable."""

    def objective(u: np.ndarray) -> float:
        try:
            stack = LayerStack.from_config(space.unpack(u))
            if index is None:
                return stack_nll(stack, t, y).value
            return composite_nll(stack.layers, t[index], y[index]).value
        except (ConfigError, NumericalError):
            return float("inf")

    return objective


def _fresh_state(size: int, train: TrainConfig, step: Optional[np.ndarray] = None) -> RpropState:
    if step is None:
        step = np.full(size, train.step_init)
    return RpropState(step, np.zeros(size))


def _shrink(step: np.ndarray, train: TrainConfig) -> np.ndarray:
    return np.maximum(step * train.eta_minus, train.step_min)


def _start_point(space: ParamSpace, u0: np.ndarray, index: int, train: TrainConfig, rng: np.random.Generator) -> np.ndarray:
    mask = space.interval_mask
    if index == 0:
        u = u0.copy()
        u[mask] = np.clip(u[mask], -INTERIOR_SEED, INTERIOR_SEED)
        return u
    u = u0 + rng.normal(0.0, train.restart_scale, size=u0.size)
    u[mask] = np.clip(u[mask], -BOUNDARY_PULL, BOUNDARY_PULL)
    return u


def _is_valid(space: ParamSpace, u: np.ndarray) -> bool:
    try:
        space.unpack(u)
    except ConfigError:
        return False
    return True


def run_restart(
    space: ParamSpace, t: np.ndarray, y: np.ndarray, u0: np.ndarray, index: int, train: TrainConfig, rng: np.random.Generator
) -> RestartOutcome:
    n = y.size
    batch = train.batch_size or n
    full = make_objective(space, t, y)
    u = _start_point(space, u0, index, train, rng)
    schedule = minibatch_indices(n, batch, rng, train.iterations) if train.iterations else []

    best_u, best_f = u.copy(), full(u)
    trace = [best_f]
    state = _fresh_state(space.size, train)

    for k, idx in enumerate(schedule, start=1):
        objective = full if batch == n else make_objective(space, t, y, idx)
        f0 = objective(u)
        if np.isfinite(f0):
            grad = finite_diff_grad(objective, u, train.fd_step, f0).grad
            u_new, new_state = rprop_update(
                u, grad, state, train.eta_minus, train.eta_plus, train.step_min, train.step_max
            )
            if _is_valid(space, u_new):
                u, state = u_new, new_state
            else:
                state = _fresh_state(space.size, train, _shrink(state.step, train))
        else:
            u = best_u.copy()
            state = _fresh_state(space.size, train, _shrink(state.step, train))
        if k % train.trace_every == 0 or k == len(schedule):
            f = full(u)
            trace.append(f)
            if f < best_f:
                best_u, best_f = u.copy(), f

    u, f = best_u, best_f
    state = _fresh_state(space.size, train)
    for _ in range(train.polish_iterations):
        if not np.isfinite(f):
            break
        grad = finite_diff_grad(full, u, train.fd_step, f).grad
        u_c, new_state = rprop_update(u, grad, state, train.eta_minus, train.eta_plus, train.step_min, train.step_max)
        f_c = full(u_c)
        if f_c <= f:
            u, f, state = u_c, f_c, new_state
        else:
            state = _fresh_state(space.size, train, _shrink(state.step, train))
        trace.append(f)

    logger.info(f"Restart {index}: full-data NLL {trace[0]:.4f} -> {f:.4f}")
    return RestartOutcome(u, f, trace)


def initialise_sparse(config: StackConfig, t: ArrayLike, y: ArrayLike, rng: np.random.Generator) -> StackConfig:
    """Pseudo data for a sparse covariance layer: a uniform subsample of the training inputs,
    with the values pulled back through the marginal layers."""
    cov = config.covariance
    if cov is None or cov.mode != "sparse":
        return config
    t = np.asarray(t, dtype=float)
    z = np.asarray(y, dtype=float)
    n = t.size
    m = cov.num_pseudo or min(DEFAULT_NUM_PSEUDO, n - 1)
    if not 1 <= m < n:
        raise ConfigError(f"Sparse covariance needs between 1 and {n - 1} pseudo inputs, got {m}")
    for marginal in reversed(config.marginals):
        z = build_layer(marginal).inverse(t, z)
    s = np.sort(rng.choice(n, size=m, replace=False))
    pseudo = cov.model_copy(update={"pseudo_inputs": t[s].tolist(), "pseudo_values": z[s].tolist()})
    return config.model_copy(update={"covariance": pseudo})


def fit(config: StackConfig, t: ArrayLike, y: ArrayLike, train: Optional[TrainConfig] = None, seed: Optional[int] = None) -> FitResult:
    """Fit the stack's parameters to (t, y) by minimising the full-data NLL.

    The returned configuration never has a higher full-data NLL than ``config``:
    when no restart improves on it, ``config`` itself is returned.
    """
    started = time.perf_counter()
    train = train or config.train
    seed = train.seed if seed is None else seed
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    if t.shape != y.shape or y.ndim != 1:
        raise ConfigError(f"inputs and values must be equal-length vectors, got {t.shape} and {y.shape}")
    if y.size < 2:
        raise ConfigError(f"fitting needs at least 2 observations, got {y.size}")
    if train.batch_size is not None and train.batch_size > y.size:
        raise ConfigError(f"batch size {train.batch_size} exceeds the number of observations {y.size}")

    rng = make_rng(seed)
    cov = config.covariance
    if cov is not None and not cov.initialised:
        config = initialise_sparse(config, t, y, rng)
    initial = stack_nll(LayerStack.from_config(config), t, y)

    space = ParamSpace(config)
    u0 = space.pack()
    streams = split_rng(rng, train.restarts)
    logger.info(f"Fitting {space.size} parameters on {y.size} points: {train.restarts} restarts, seed {seed}")
    with ThreadPoolExecutor(max_workers=settings.MAX_WORKERS) as pool:
        outcomes = list(pool.map(lambda j: run_restart(space, t, y, u0, j, train, streams[j]), range(train.restarts)))

    nlls = np.array([o.nll for o in outcomes])
    if not np.any(np.isfinite(nlls)):
        raise FitError("Every restart ended at an infinite NLL", space.constrain(u0))
    best = int(np.argmin(nlls))
    winner = outcomes[best]

    if winner.nll < initial.value:
        fitted = space.unpack(winner.params)
        params = space.values(winner.params)
    else:
        fitted = config
        params = space.values(u0)
    final = stack_nll(LayerStack.from_config(fitted), t, y)

    report = FitReport(
        final_nll=final.value,
        initial_nll=initial.value,
        trace=winner.trace,
        params=params,
        seed=seed,
        wall_time=time.perf_counter() - started,
        jitter_events=final.jitter_events,
        best_restart=best,
        restart_nlls=[float(v) if np.isfinite(v) else None for v in nlls],
        iterations=train.iterations,
        polish_iterations=train.polish_iterations,
    )
    logger.info(f"Fit finished: NLL {initial.value:.4f} -> {final.value:.4f} (restart {best})")
    return FitResult(fitted.model_copy(update={"train": train}), report)
