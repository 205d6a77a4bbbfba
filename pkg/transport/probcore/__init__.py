from .distributions import (
    Dist1D,
    Dist1DSpec,
    StdNormal,
    Gamma,
    InvGamma,
    SqrtChiSquared,
    FisherSnedecor,
    ScaledF,
    ScaledSqrtF,
    SqrtInvGamma,
    Exponential,
    ShiftedPareto,
    Uniform01,
    PointMass,
    cdf,
    quantile,
    sample,
)
from .radial import ProductRadialCDF, product_radial_cdf
from .inversion import invert_monotone
from .slice_sampler import slice_sample_1d
from .rng import make_rng, split_rng

__all__ = [
    "Dist1D",
    "Dist1DSpec",
    "StdNormal",
    "Gamma",
    "InvGamma",
    "SqrtChiSquared",
    "FisherSnedecor",
    "ScaledF",
    "ScaledSqrtF",
    "SqrtInvGamma",
    "Exponential",
    "ShiftedPareto",
    "Uniform01",
    "PointMass",
    "cdf",
    "quantile",
    "sample",
    "ProductRadialCDF",
    "product_radial_cdf",
    "invert_monotone",
    "slice_sample_1d",
    "make_rng",
    "split_rng",
]
