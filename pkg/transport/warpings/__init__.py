from .warpings import (
    Warping,
    WarpingSpec,
    Affine,
    Log,
    BoxCoxShifted,
    SinhArcsinh,
    NegLogNormCDF,
    Composite,
)
from .marginal import (
    MarginalLayer,
    marginal_forward,
    marginal_inverse,
    marginal_logdet_inv,
    pushforward_expectation,
    pushforward_quantile,
)

__all__ = [
    "Warping",
    "WarpingSpec",
    "Affine",
    "Log",
    "BoxCoxShifted",
    "SinhArcsinh",
    "NegLogNormCDF",
    "Composite",
    "MarginalLayer",
    "marginal_forward",
    "marginal_inverse",
    "marginal_logdet_inv",
    "pushforward_expectation",
    "pushforward_quantile",
]
