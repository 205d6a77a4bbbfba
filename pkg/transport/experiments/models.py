"""Benchmark model builders: a warped GP and its Student-t copula extension."""
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike
from scipy.signal import lombscargle

from ..kernels import SpectralComponent, SpectralMixture
from ..types.config import (
    ConstantLocation,
    CovarianceConfig,
    MarginalConfig,
    StackConfig,
    StudentTCopula,
    TrainConfig,
)
from ..warpings import BoxCoxShifted

FREQ_GRID = 2000
BOX_COX_LAMBDA = 0.5
NOISE_FRACTION = 0.1
MODELS = ("wgp", "tgp")


def spectral_mixture_init(t: ArrayLike, z: ArrayLike, components: int = 2) -> SpectralMixture:
    """Spectral mixture started from the Lomb-Scargle periodogram of (t, z).

    The first component sits on the periodogram peak; the remaining ones start at
    zero frequency with long length scales. Weights split unit variance evenly.
    """
    t = np.asarray(t, dtype=float)
    z = np.asarray(z, dtype=float)
    span = float(np.ptp(t)) or 1.0
    nyquist = 0.5 * (t.size - 1) / span
    freqs = np.linspace(1.0 / span, max(nyquist, 2.0 / span), FREQ_GRID)
    power = lombscargle(t, z - z.mean(), 2.0 * np.pi * freqs)
    peak = float(freqs[int(np.argmax(power))])

    weight = float(np.sqrt(1.0 / components))
    bandwidth = (1.0 / span) ** 2
    parts = [SpectralComponent(weight=weight, mean=peak, variance=bandwidth)]
    for q in range(1, components):
        parts.append(SpectralComponent(weight=weight, mean=0.0, variance=bandwidth / (q + 1)))
    return SpectralMixture(components=parts)


def build_wgp(t: ArrayLike, y: ArrayLike, train: Optional[TrainConfig] = None, components: int = 2) -> StackConfig:
    """Noisy spectral-mixture covariance under a shifted Box-Cox marginal, centred on the data."""
    y = np.asarray(y, dtype=float)
    # a positive shift keeps zero observations inside the warping's smooth region
    shift = max(1.0, 1.0 - float(np.min(y)))
    warping = BoxCoxShifted(lam=BOX_COX_LAMBDA, shift=shift)
    latent = warping.transform(y)
    location = float(np.mean(latent))
    scale = float(np.std(latent)) or 1.0
    z = (latent - location) / scale
    return StackConfig(
        covariance=CovarianceConfig(kernel=spectral_mixture_init(t, z, components), noise=NOISE_FRACTION),
        marginals=[MarginalConfig(warping=warping, location=ConstantLocation(value=location), scale=scale)],
        train=train or TrainConfig(),
    )


def build_tgp(wgp: StackConfig) -> StackConfig:
    """The same stack behind a Student-t copula at nu_inv = 0, i.e. exactly the WGP."""
    return wgp.model_copy(update={"copula": StudentTCopula(nu_inv=0.0)})
