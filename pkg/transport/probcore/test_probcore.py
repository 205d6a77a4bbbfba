import math

import numpy as np
import pytest
from scipy import integrate, stats

from .__init__ import (
    Exponential,
    FisherSnedecor,
    Gamma,
    InvGamma,
    PointMass,
    ProductRadialCDF,
    ScaledF,
    ScaledSqrtF,
    ShiftedPareto,
    SqrtChiSquared,
    SqrtInvGamma,
    StdNormal,
    Uniform01,
    cdf,
    make_rng,
    product_radial_cdf,
    quantile,
    sample,
    slice_sample_1d,
    split_rng,
)
from ..errors import DomainError, SliceSamplingError


def random_families(rng):
    """One instance of every continuous family with random parameters."""
    g = lambda lo, hi: float(rng.uniform(lo, hi))
    return [
        StdNormal(),
        Gamma(shape=g(0.5, 5), rate=g(0.5, 3)),
        InvGamma(shape=g(1, 5), rate=g(0.5, 3)),
        SqrtChiSquared(dof=int(rng.integers(1, 10))),
        FisherSnedecor(d1=g(1, 10), d2=g(1, 10)),
        ScaledF(scale=g(0.5, 5), d1=g(1, 10), d2=g(1, 10)),
        ScaledSqrtF(scale=g(0.5, 5), d1=g(1, 10), d2=g(1, 10)),
        SqrtInvGamma(shape=g(1, 5), rate=g(0.5, 3)),
        Exponential(rate=g(0.5, 3)),
        ShiftedPareto(theta=g(0.2, 3)),
        Uniform01(),
    ]


def test_cdf_examples():
    assert cdf(StdNormal(), 0.0) == pytest.approx(0.5, abs=1e-15)
    assert cdf(Exponential(rate=1.0), math.log(2.0)) == pytest.approx(0.5, abs=1e-15)
    assert cdf(Gamma(shape=2.0, rate=1.0), 2.0) == pytest.approx(1.0 - 3.0 * math.exp(-2.0), abs=1e-12)


def test_quantile_examples():
    assert quantile(StdNormal(), 0.5) == pytest.approx(0.0, abs=1e-15)
    assert quantile(Uniform01(), 0.3) == pytest.approx(0.3, abs=1e-15)
    assert quantile(Exponential(rate=1.0), 1.0 - math.exp(-1.0)) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("u", [0.0, 1.0, -0.2, 1.5, float("nan")])
def test_quantile_rejects_probabilities_outside_unit_interval(u):
    with pytest.raises(DomainError):
        quantile(StdNormal(), u)


def test_invalid_parameters_rejected_at_construction():
    with pytest.raises(ValueError):
        Gamma(shape=-1.0, rate=1.0)
    with pytest.raises(ValueError):
        SqrtChiSquared(dof=0)


def test_cdf_limits_and_monotonicity():
    for d in random_families(make_rng(3)):
        lo, hi = d.support
        grid = d.quantile(np.linspace(0.01, 0.99, 50))
        values = d.cdf(grid)
        assert np.all(np.diff(values) >= 0.0), d
        if np.isfinite(lo):
            assert float(d.cdf(lo)) == pytest.approx(0.0, abs=1e-15)
        if np.isinf(hi):
            assert float(d.cdf(1e300)) == pytest.approx(1.0, abs=1e-12)


def test_quantile_cdf_round_trip():
    rng = make_rng(11)
    u = np.linspace(0.025, 0.975, 20)
    for _ in range(10):
        for d in random_families(rng):
            x = d.quantile(u)
            np.testing.assert_allclose(d.quantile(d.cdf(x)), x, rtol=1e-8, atol=1e-10, err_msg=repr(d))


def test_sample_replays_with_fixed_seed():
    a = sample(Uniform01(), make_rng(42), size=10)
    b = sample(Uniform01(), make_rng(42), size=10)
    np.testing.assert_array_equal(a, b)


def test_sample_means():
    rng = make_rng(7)
    assert np.mean(sample(SqrtChiSquared(dof=2), rng, 100_000)) == pytest.approx(math.sqrt(math.pi / 2.0), abs=0.01)
    assert np.mean(sample(Gamma(shape=3.0, rate=1.0), rng, 100_000)) == pytest.approx(3.0, abs=0.02)


def test_sampling_matches_cdf_by_ks():
    rng = make_rng(5)
    for d in random_families(rng):
        draws = d.sample(rng, 10_000)
        assert stats.kstest(draws, d.cdf).pvalue > 0.001, d


def test_split_rng_streams_are_reproducible_and_distinct():
    first = [r.uniform() for r in split_rng(make_rng(1), 3)]
    second = [r.uniform() for r in split_rng(make_rng(1), 3)]
    assert first == second
    assert len(set(first)) == 3


def test_point_mass_mixing_equals_base_cdf():
    radial = ProductRadialCDF(PointMass(value=1.0), dof=3)
    r = np.linspace(0.0, 6.0, 41)
    np.testing.assert_array_equal(radial.cdf(r), SqrtChiSquared(dof=3).cdf(r))
    np.testing.assert_array_equal(radial.cdf(radial.nodes), SqrtChiSquared(dof=3).cdf(radial.nodes))


def test_student_mixing_matches_closed_form():
    # sqrt(InvGamma(theta/2, theta/2)) * sqrt(chi2(n)) = sqrt(n F(n, theta))
    theta, n = 4.0, 2
    radial = ProductRadialCDF(SqrtInvGamma(shape=theta / 2, rate=theta / 2), dof=n)
    closed = ScaledSqrtF(scale=n, d1=n, d2=theta)
    r = np.linspace(0.05, 12.0, 60)
    np.testing.assert_allclose(product_radial_cdf(radial, r), closed.cdf(r), atol=1e-5)
    np.testing.assert_allclose(radial.logpdf(r), closed.logpdf(r), atol=1e-5)


def test_product_radial_cdf_against_adaptive_quadrature():
    mixing = Gamma(shape=3.0, rate=2.0)
    base = SqrtChiSquared(dof=3)
    radial = ProductRadialCDF(mixing, dof=3)
    for r in (0.3, 1.0, 2.5, 6.0):
        ref, _ = integrate.quad(lambda s: float(mixing.pdf(s) * base.cdf(r / s)), 0.0, np.inf, limit=200)
        assert float(radial.cdf(r)) == pytest.approx(ref, abs=1e-6)


def test_product_radial_cdf_at_zero_and_monotone():
    radial = ProductRadialCDF(SqrtInvGamma(shape=1.5, rate=1.5), dof=4)
    assert float(radial.cdf(0.0)) == 0.0
    values = radial.cdf(np.linspace(0.0, 50.0, 400))
    assert np.all(np.diff(values) >= 0.0)
    assert np.all((values >= 0.0) & (values <= 1.0))


def test_product_radial_quantiles_invert_cdf_and_sf():
    radial = ProductRadialCDF(SqrtInvGamma(shape=2.0, rate=2.0), dof=3)
    for u in (1e-6, 0.1, 0.5):
        assert float(radial.cdf(radial.quantile(u))) == pytest.approx(u, rel=1e-8)
    for p in (1e-9, 1e-3, 0.3):
        assert float(radial.sf(radial.isf(p))) == pytest.approx(p, rel=1e-7)


def test_slice_sampler_normal_moments():
    draws = slice_sample_1d(lambda x: -0.5 * x * x, 0.0, 100_000, make_rng(0))
    assert draws.shape == (100_000,)
    assert np.mean(draws) == pytest.approx(0.0, abs=0.02)
    assert np.var(draws) == pytest.approx(1.0, abs=0.05)


def test_slice_sampler_exponential_mean():
    logdensity = lambda x: -x if x > 0 else -np.inf
    draws = slice_sample_1d(logdensity, 1.0, 100_000, make_rng(1))
    assert np.all(draws > 0)
    assert np.mean(draws) == pytest.approx(1.0, abs=0.02)


def test_slice_sampler_zero_draws_is_empty():
    assert slice_sample_1d(lambda x: -x * x, 0.0, 0, make_rng(0)).size == 0


def test_slice_sampler_is_deterministic_given_seed():
    target = lambda x: -0.5 * x * x
    np.testing.assert_array_equal(
        slice_sample_1d(target, 0.0, 50, make_rng(9), thin=3),
        slice_sample_1d(target, 0.0, 50, make_rng(9), thin=3),
    )


def test_slice_sampler_reports_unbounded_slice():
    # improper flat target never closes the interval
    with pytest.raises(SliceSamplingError):
        slice_sample_1d(lambda x: 0.0, 0.0, 5, make_rng(0), max_expansions=10)


def test_slice_sampler_rejects_infeasible_start():
    with pytest.raises(SliceSamplingError):
        slice_sample_1d(lambda x: -np.inf, 0.0, 5, make_rng(0))
