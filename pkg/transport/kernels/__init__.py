from .kernels import (
    Kernel,
    KernelSpec,
    SquaredExponential,
    Brownian,
    SpectralComponent,
    SpectralMixture,
    WhiteNoise,
    Sum,
    gram,
)
from .cholesky import CholeskyResult, cholesky_psd, psd_factor

__all__ = [
    "Kernel",
    "KernelSpec",
    "SquaredExponential",
    "Brownian",
    "SpectralComponent",
    "SpectralMixture",
    "WhiteNoise",
    "Sum",
    "gram",
    "CholeskyResult",
    "cholesky_psd",
    "psd_factor",
]
