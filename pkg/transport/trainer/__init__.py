from .space import ParamEntry, ParamSpace
from .optimizer import GradientResult, RpropState, finite_diff_grad, minibatch_indices, rprop_update
from .fit import BOUNDARY_PULL, FitResult, fit, initialise_sparse, make_objective, run_restart

__all__ = [
    "ParamEntry",
    "ParamSpace",
    "GradientResult",
    "RpropState",
    "finite_diff_grad",
    "minibatch_indices",
    "rprop_update",
    "BOUNDARY_PULL",
    "FitResult",
    "fit",
    "initialise_sparse",
    "make_objective",
    "run_restart",
]
