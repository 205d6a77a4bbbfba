from .base import TransportLayer
from .covariance import (
    CovarianceLayer,
    cov_forward,
    cov_inverse,
    cov_logdet_inv,
    cov_posterior_map,
    sparse_forward,
)
from .elliptical import (
    EllipticalLayer,
    ell_alpha,
    ell_forward,
    ell_inverse,
    ell_logdet_inv,
    studentt_posterior_radius,
    ell_posterior_radius_general,
)
from .archimedean import (
    ArchimedeanGenerator,
    ArchimedeanLayer,
    arch_forward,
    arch_logdet_inv,
    arch_marginal_cdf,
    arch_conditional_sample,
    arch_sample,
    empirical_copula,
)
from .tail import (
    TailSpec,
    StudentTTail,
    GaussianTail,
    ArchimedeanTail,
    tail_dependence_coeffs,
    empirical_tail_dependence,
    empirical_tail_table,
    pseudo_observations,
)

__all__ = [
    "TransportLayer",
    "CovarianceLayer",
    "cov_forward",
    "cov_inverse",
    "cov_logdet_inv",
    "cov_posterior_map",
    "sparse_forward",
    "EllipticalLayer",
    "ell_alpha",
    "ell_forward",
    "ell_inverse",
    "ell_logdet_inv",
    "studentt_posterior_radius",
    "ell_posterior_radius_general",
    "ArchimedeanGenerator",
    "ArchimedeanLayer",
    "arch_forward",
    "arch_logdet_inv",
    "arch_marginal_cdf",
    "arch_conditional_sample",
    "arch_sample",
    "empirical_copula",
    "TailSpec",
    "StudentTTail",
    "GaussianTail",
    "ArchimedeanTail",
    "tail_dependence_coeffs",
    "empirical_tail_dependence",
    "empirical_tail_table",
    "pseudo_observations",
]
