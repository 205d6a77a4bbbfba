"""Configuration tree of a transport-process stack (the JSON config file)."""
from __future__ import annotations

from typing import Annotated, List, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..kernels.kernels import Kernel, KernelSpec, Sum, WhiteNoise
from ..probcore.distributions import Dist1DSpec
from ..warpings.warpings import Affine, WarpingSpec
from .params import Interval, Param, Positive, Real, RealList

# largest polynomial degree of a location function
MAX_LOCATION_DEGREE = 3


class _Frozen(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


# --- marginal transports -----------------------------------------------------


class ConstantLocation(_Frozen):
    kind: Literal["constant"] = "constant"
    value: Real = 0.0

    def __call__(self, t: np.ndarray) -> np.ndarray:
        return np.full(np.shape(t), self.value)


class PolynomialLocation(_Frozen):
    """m(t) = c_0 + c_1 t + ... (ascending coefficients)."""

    kind: Literal["polynomial"] = "polynomial"
    coefficients: Annotated[List[float], Field(min_length=1, max_length=MAX_LOCATION_DEGREE + 1), Param("identity")]

    def __call__(self, t: np.ndarray) -> np.ndarray:
        return np.polynomial.polynomial.polyval(np.asarray(t, dtype=float), self.coefficients)


LocationSpec = Annotated[Union[ConstantLocation, PolynomialLocation], Field(discriminator="kind")]


class MarginalConfig(_Frozen):
    kind: Literal["marginal"] = "marginal"
    warping: WarpingSpec = Field(default_factory=Affine)
    location: LocationSpec = Field(default_factory=ConstantLocation)
    scale: Positive = 1.0


# --- covariance transport ----------------------------------------------------


class CovarianceConfig(_Frozen):
    kind: Literal["covariance"] = "covariance"
    kernel: KernelSpec
    # shorthand for adding a WhiteNoise summand to the kernel
    noise: Optional[Positive] = None
    mode: Literal["exact", "sparse"] = "exact"
    pseudo_inputs: RealList = Field(default_factory=list)
    pseudo_values: RealList = Field(default_factory=list)
    # pseudo-data size used when the trainer initialises sparse mode
    num_pseudo: Optional[int] = Field(default=None, ge=1)

    @model_validator(mode="after")
    def _check_pseudo_data(self):
        if len(self.pseudo_inputs) != len(self.pseudo_values):
            raise ValueError(
                f"pseudo_inputs and pseudo_values differ in length "
                f"({len(self.pseudo_inputs)} != {len(self.pseudo_values)})"
            )
        if self.mode == "exact" and self.pseudo_inputs:
            raise ValueError("pseudo data given but mode is 'exact'")
        return self

    @property
    def initialised(self) -> bool:
        return self.mode == "exact" or len(self.pseudo_inputs) > 0

    def effective_kernel(self) -> Kernel:
        if self.noise is None:
            return self.kernel
        return Sum(kernels=[self.kernel, WhiteNoise(sigma0=self.noise)])


# --- copulas -----------------------------------------------------------------

NuInv = Interval(0.0, 0.5)


class GaussianCopula(_Frozen):
    family: Literal["gaussian"] = "gaussian"


class StudentTCopula(_Frozen):
    """Student-t copula with theta = 1 / nu_inv degrees of freedom; nu_inv = 0 is Gaussian."""

    family: Literal["student_t"] = "student_t"
    nu_inv: NuInv = 0.0


class GeneralEllipticalCopula(_Frozen):
    """Elliptical copula whose radius is the chi radius times a positive mixing variable."""

    family: Literal["elliptical"] = "elliptical"
    mixing: Dist1DSpec

    @model_validator(mode="after")
    def _positive_mixing(self):
        if self.mixing.support[0] < 0.0:
            raise ValueError(f"mixing law must live on the positive half-line, got {self.mixing.family}")
        return self


class IndependenceCopula(_Frozen):
    family: Literal["independence"] = "independence"


class ClaytonCopula(_Frozen):
    family: Literal["clayton"] = "clayton"
    theta: Positive = 1.0


CopulaSpec = Annotated[
    Union[GaussianCopula, StudentTCopula, GeneralEllipticalCopula, IndependenceCopula, ClaytonCopula],
    Field(discriminator="family"),
]

ARCHIMEDEAN_FAMILIES = ("independence", "clayton")


# --- training ----------------------------------------------------------------


class TrainConfig(_Frozen):
    iterations: int = Field(default=200, ge=0)
    # None means full batch
    batch_size: Optional[int] = Field(default=None, ge=1)
    polish_iterations: int = Field(default=20, ge=0)
    restarts: int = Field(default=4, ge=1)
    restart_scale: float = Field(default=0.5, ge=0.0)
    eta_minus: float = Field(default=0.5, gt=0.0, lt=1.0)
    eta_plus: float = Field(default=1.2, gt=1.0)
    step_init: float = Field(default=0.1, gt=0.0)
    step_min: float = Field(default=1e-6, gt=0.0)
    step_max: float = Field(default=1.0, gt=0.0)
    fd_step: float = Field(default=1e-5, gt=0.0)
    trace_every: int = Field(default=10, ge=1)
    seed: int = 0

    @model_validator(mode="after")
    def _check_steps(self):
        if not self.step_min <= self.step_init <= self.step_max:
            raise ValueError("need step_min <= step_init <= step_max")
        return self


# --- whole stack -------------------------------------------------------------


class StackConfig(_Frozen):
    copula: Optional[CopulaSpec] = None
    covariance: Optional[CovarianceConfig] = None
    marginals: List[MarginalConfig] = Field(default_factory=list)
    train: TrainConfig = Field(default_factory=TrainConfig)

    @model_validator(mode="after")
    def _archimedean_excludes_covariance(self):
        if self.copula is not None and self.copula.family in ARCHIMEDEAN_FAMILIES and self.covariance is not None:
            raise ValueError("an Archimedean copula cannot be combined with a covariance layer")
        return self

    def layer_configs(self) -> list[BaseModel]:
        """Layer configurations in stack order: copula, covariance, marginals."""
        layers: list[BaseModel] = []
        if self.copula is not None:
            layers.append(self.copula)
        if self.covariance is not None:
            layers.append(self.covariance)
        layers.extend(self.marginals)
        return layers
