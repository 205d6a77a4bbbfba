import math

import numpy as np
import pytest
from scipy import integrate, stats

from .__init__ import (
    ArchimedeanGenerator,
    ArchimedeanLayer,
    ArchimedeanTail,
    CovarianceLayer,
    EllipticalLayer,
    GaussianTail,
    StudentTTail,
    arch_conditional_sample,
    arch_forward,
    arch_logdet_inv,
    arch_marginal_cdf,
    arch_sample,
    cov_forward,
    cov_inverse,
    cov_logdet_inv,
    cov_posterior_map,
    ell_alpha,
    ell_forward,
    ell_inverse,
    ell_logdet_inv,
    ell_posterior_radius_general,
    empirical_copula,
    empirical_tail_dependence,
    empirical_tail_table,
    pseudo_observations,
    sparse_forward,
    studentt_posterior_radius,
    tail_dependence_coeffs,
)
from ..errors import ConfigError, DomainError, SingularPointError
from ..kernels import Brownian, SquaredExponential, WhiteNoise, gram
from ..probcore import PointMass, ScaledF, ScaledSqrtF, SqrtChiSquared, SqrtInvGamma
from ..types.config import (
    ClaytonCopula,
    CovarianceConfig,
    GaussianCopula,
    GeneralEllipticalCopula,
    IndependenceCopula,
    StudentTCopula,
)


def fd_logdet(fn, y, h=1e-6):
    n = y.size
    J = np.empty((n, n))
    for j in range(n):
        e = np.zeros(n)
        e[j] = h * (1.0 + abs(y[j]))
        J[:, j] = (fn(y + e) - fn(y - e)) / (2 * e[j])
    return np.linalg.slogdet(J)[1]


def se_layer(noise=0.1, **kwargs):
    return CovarianceLayer(
        CovarianceConfig(kernel=SquaredExponential(sigma=1.3, rate=0.8), noise=noise, **kwargs)
    )


def student_t(theta):
    return EllipticalLayer(StudentTCopula(nu_inv=1.0 / theta))


def t_mixing(theta):
    return EllipticalLayer(GeneralEllipticalCopula(mixing=SqrtInvGamma(shape=theta / 2, rate=theta / 2)))


# --- covariance --------------------------------------------------------------


def test_white_noise_covariance_is_identity():
    layer = CovarianceLayer(CovarianceConfig(kernel=WhiteNoise(sigma0=1.0)))
    t = np.array([0.0, 0.5, 2.0])
    x = np.array([0.3, -1.0, 2.0])
    np.testing.assert_allclose(cov_forward(layer, t, x), x)
    np.testing.assert_allclose(cov_inverse(layer, t, x), x)
    assert cov_logdet_inv(layer, t, None) == pytest.approx(0.0)


def test_brownian_hand_example():
    layer = CovarianceLayer(CovarianceConfig(kernel=Brownian(sigma=1.0)))
    t = np.array([1.0, 2.0])
    np.testing.assert_allclose(layer.factor(t), [[1.0, 0.0], [1.0, 1.0]])
    np.testing.assert_allclose(cov_forward(layer, t, [1.0, 0.0]), [1.0, 1.0])
    np.testing.assert_allclose(cov_inverse(layer, t, [1.0, 1.0]), [1.0, 0.0])


@pytest.mark.parametrize("seed", range(10))
def test_covariance_round_trip_and_determinant(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 7))
    layer = se_layer(noise=float(rng.uniform(0.05, 0.5)))
    t = np.sort(rng.uniform(0, 5, size=n))
    x = rng.normal(size=n)
    y = cov_forward(layer, t, x)
    np.testing.assert_allclose(cov_inverse(layer, t, y), x, atol=1e-8)
    assert np.max(np.abs(layer.factor(t) @ cov_inverse(layer, t, y) - y)) <= 1e-10
    G = gram(layer.kernel, t, t)
    assert cov_logdet_inv(layer, t, y) == pytest.approx(-0.5 * np.linalg.slogdet(G)[1], abs=1e-9)


def test_covariance_jacobian_is_lower_triangular():
    layer = se_layer()
    t = np.array([0.0, 0.4, 1.1, 2.0])
    x = np.random.default_rng(0).normal(size=4)
    h = 1e-6
    for j in range(4):
        e = np.zeros(4)
        e[j] = h
        column = (cov_forward(layer, t, x + e) - cov_forward(layer, t, x - e)) / (2 * h)
        np.testing.assert_allclose(column[:j], 0.0, atol=1e-8)


def test_covariance_marginalization():
    layer = se_layer()
    rng = np.random.default_rng(1)
    t = rng.uniform(0, 4, size=5)
    x = rng.normal(size=6)
    longer = cov_forward(layer, np.append(t, 4.5), x)
    np.testing.assert_allclose(longer[:5], cov_forward(layer, t, x[:5]), atol=1e-12)


def test_covariance_logdet_permutation_invariant():
    layer = se_layer()
    rng = np.random.default_rng(2)
    t = rng.uniform(0, 4, size=6)
    base = cov_logdet_inv(layer, t, None)
    for _ in range(5):
        assert cov_logdet_inv(layer, rng.permutation(t), None) == pytest.approx(base, abs=1e-10)


def test_posterior_interpolates_without_noise():
    layer = se_layer(noise=None)
    t = np.array([0.0, 1.0, 2.0, 3.0])
    y = np.array([0.5, -0.2, 1.0, 0.3])
    x_ref = cov_inverse(layer, t, y)
    np.testing.assert_allclose(cov_posterior_map(layer, t, t, x_ref, np.zeros(4)), y, atol=1e-9)
    # zero spread at observed inputs
    draws = cov_posterior_map(layer, t, t, x_ref, np.random.default_rng(0).normal(size=(10, 4)))
    np.testing.assert_allclose(draws, np.broadcast_to(y, (10, 4)), atol=1e-6)


def test_posterior_scalar_conditioning():
    layer = se_layer(noise=None)
    t, t_bar, y = np.array([0.3]), np.array([1.1]), np.array([0.8])
    x_ref = cov_inverse(layer, t, y)
    k = layer.kernel
    expected = k(t_bar, t)[0, 0] / k(t, t)[0, 0] * y[0]
    assert cov_posterior_map(layer, t, t_bar, x_ref, np.zeros(1))[0] == pytest.approx(expected, rel=1e-12)


def test_posterior_matches_gaussian_conditional():
    layer = se_layer(noise=0.2)
    rng = np.random.default_rng(3)
    t = np.array([0.0, 0.7, 1.5, 2.6, 3.0])
    y = np.array([0.1, 0.9, 0.4, -0.6, -0.2])
    t_bar = np.array([0.35, 1.0, 2.0])
    K_tt = gram(layer.kernel, t, t, include_noise=True)
    K_bt = gram(layer.kernel, t_bar, t, include_noise=False)
    K_bb = gram(layer.kernel, t_bar, t_bar, include_noise=False)
    mean = K_bt @ np.linalg.solve(K_tt, y)
    cov = K_bb - K_bt @ np.linalg.solve(K_tt, K_bt.T)

    N = 100000
    draws = cov_posterior_map(layer, t, t_bar, cov_inverse(layer, t, y), rng.normal(size=(N, 3)))
    se = np.sqrt(np.diag(cov) / N)
    assert np.all(np.abs(draws.mean(axis=0) - mean) < 4 * se)
    np.testing.assert_allclose(np.cov(draws, rowvar=False), cov, atol=0.02 * np.max(np.diag(cov)))


def test_duplicate_prediction_inputs_get_no_noise():
    layer = se_layer(noise=0.5)
    t = np.array([0.0, 1.0])
    x_ref = cov_inverse(layer, t, np.array([0.2, 0.4]))
    draws = cov_posterior_map(layer, t, np.array([0.5, 0.5]), x_ref, np.random.default_rng(4).normal(size=(50, 2)))
    np.testing.assert_allclose(draws[:, 0], draws[:, 1], atol=1e-9)


def test_sparse_forward_equals_posterior_when_pseudo_data_is_data():
    rng = np.random.default_rng(5)
    t = np.array([0.0, 0.8, 1.7, 2.2, 3.5])
    y = rng.normal(size=5)
    exact = se_layer(noise=0.3)
    sparse = se_layer(noise=0.3, mode="sparse", pseudo_inputs=list(t), pseudo_values=list(y))
    t_bar = np.array([0.4, 1.0, 2.9, 4.0])
    u = rng.normal(size=(7, 4))
    expected = cov_posterior_map(exact, t, t_bar, cov_inverse(exact, t, y), u)
    np.testing.assert_allclose(sparse_forward(sparse, t_bar, u), expected, atol=1e-9)
    np.testing.assert_allclose(cov_posterior_map(sparse, t, t_bar, None, u), expected, atol=1e-9)


def test_sparse_forward_mean_and_zero():
    s = np.array([0.0, 1.0, 2.0])
    z = np.array([1.0, -0.5, 0.25])
    layer = se_layer(noise=0.1, mode="sparse", pseudo_inputs=list(s), pseudo_values=list(z))
    t_bar = np.array([0.5, 1.5])
    K_ss = gram(layer.kernel, s, s, include_noise=True)
    K_bs = gram(layer.kernel, t_bar, s, include_noise=False)
    np.testing.assert_allclose(sparse_forward(layer, t_bar, np.zeros(2)), K_bs @ np.linalg.solve(K_ss, z), atol=1e-12)

    zero = se_layer(noise=0.1, mode="sparse", pseudo_inputs=list(s), pseudo_values=[0.0, 0.0, 0.0])
    np.testing.assert_allclose(sparse_forward(zero, t_bar, np.zeros(2)), 0.0, atol=1e-15)


def test_sparse_forward_needs_sparse_mode():
    with pytest.raises(ConfigError):
        sparse_forward(se_layer(), np.array([0.0]), np.zeros(1))
    with pytest.raises(ConfigError):
        se_layer(mode="sparse")


# --- elliptical --------------------------------------------------------------


def test_alpha_identity_and_gaussian_limit():
    assert ell_alpha(EllipticalLayer(GaussianCopula()), 4, 1.7) == pytest.approx(1.7, abs=0)
    assert ell_alpha(EllipticalLayer(StudentTCopula(nu_inv=0.0)), 2, 1.7) == pytest.approx(1.7, abs=0)
    near = EllipticalLayer(StudentTCopula(nu_inv=1e-6))
    assert ell_alpha(near, 3, 2.0) == pytest.approx(2.0, abs=1e-3)


def test_alpha_defining_identity():
    layer = student_t(4.0)
    r = np.linspace(0.05, 6.0, 40)
    rho = ell_alpha(layer, 2, r)
    law = ScaledSqrtF(scale=2, d1=2, d2=4.0)
    np.testing.assert_allclose(law.cdf(rho), SqrtChiSquared(dof=2).cdf(r), atol=1e-8)
    assert np.all(np.diff(rho) > 0)
    assert ell_alpha(layer, 2, 0.0) == 0.0


@pytest.mark.parametrize("make", [lambda: student_t(4.0), lambda: t_mixing(5.0)])
def test_elliptical_direction_and_round_trip(make):
    layer = make()
    rng = np.random.default_rng(6)
    x = rng.normal(size=(20, 3))
    y = ell_forward(layer, x)
    np.testing.assert_allclose(
        y / np.linalg.norm(y, axis=1, keepdims=True), x / np.linalg.norm(x, axis=1, keepdims=True), atol=1e-12
    )
    np.testing.assert_allclose(ell_inverse(layer, y), x, atol=1e-8)
    np.testing.assert_array_equal(ell_forward(layer, np.zeros(3)), np.zeros(3))


@pytest.mark.parametrize("make", [lambda: student_t(4.0), lambda: t_mixing(5.0)])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_elliptical_logdet_matches_jacobian(make, n):
    layer = make()
    y = np.random.default_rng(n).normal(size=n) * 1.5
    expected = fd_logdet(lambda v: ell_inverse(layer, v), y)
    assert ell_logdet_inv(layer, n, y) == pytest.approx(expected, abs=1e-4)


@pytest.mark.parametrize("nu_inv, n", [(1e-2, 40), (1e-3, 40), (1e-4, 40), (1e-3, 10)])
def test_studentt_density_with_residual_far_in_the_tail(nu_inv, n):
    layer = EllipticalLayer(StudentTCopula(nu_inv=nu_inv))
    direction = np.random.default_rng(n).normal(size=n)
    y = 23.2 * direction / np.linalg.norm(direction)
    x = ell_inverse(layer, y)
    assert np.all(np.isfinite(x))
    np.testing.assert_allclose(ell_forward(layer, x), y, rtol=1e-9)
    log_density = stats.norm.logpdf(x).sum() + ell_logdet_inv(layer, n, y)
    expected = stats.multivariate_t(loc=np.zeros(n), shape=np.eye(n), df=1.0 / nu_inv).logpdf(y)
    assert log_density == pytest.approx(expected, abs=1e-6)


def test_studentt_alpha_round_trip_across_the_tail():
    layer = student_t(1000.0)
    r = np.array([1e-3, 0.5, 3.0, 6.0, 20.0, 23.2, 30.0])
    rho = ell_alpha(layer, 40, r)
    assert np.all(np.isfinite(rho))
    assert np.all(np.diff(rho) > 0)
    np.testing.assert_allclose(layer.alpha_inv(40, rho), r, rtol=1e-9)


def test_studentt_log_alpha_prime_matches_differences():
    layer = student_t(6.0)
    for r in (0.4, 2.0, 9.0):
        h = 1e-6 * r
        a, b = ell_alpha(layer, 3, np.array([r - h, r + h]))
        assert layer.log_alpha_prime(3, r) == pytest.approx(np.log((b - a) / (2 * h)), abs=1e-6)


def test_elliptical_logdet_edge_cases():
    assert ell_logdet_inv(EllipticalLayer(GaussianCopula()), 3, np.ones(3)) == 0.0
    layer = student_t(4.0)
    y = np.array([1.3])
    r = float(layer.alpha_inv(1, 1.3))
    assert ell_logdet_inv(layer, 1, y) == pytest.approx(-layer.log_alpha_prime(1, r), rel=1e-12)
    with pytest.raises(SingularPointError):
        ell_logdet_inv(layer, 2, np.zeros(2))


def test_studentt_posterior_radius_moment():
    rng = np.random.default_rng(7)
    draws = studentt_posterior_radius(student_t(4.0), math.sqrt(5.0), 3, 2, rng, 100000)
    assert np.all(draws >= 0)
    # n_bar (theta + |y|^2) / (theta + n) * E[F(2, 7)]
    assert np.mean(draws**2) == pytest.approx(2 * 9 / 7 * 7 / 5, abs=0.1)


def test_studentt_posterior_radius_prior_limit():
    rng = np.random.default_rng(8)
    draws = studentt_posterior_radius(student_t(4.0), 0.0, 0, 3, rng, 5000)
    assert stats.kstest(draws, ScaledSqrtF(scale=3, d1=3, d2=4.0).cdf).pvalue > 0.001


def test_general_radius_with_point_mass_is_chi():
    layer = EllipticalLayer(GeneralEllipticalCopula(mixing=PointMass(value=1.0)))
    rng = np.random.default_rng(9)
    for norm_y in (0.5, 3.0):
        draws = ell_posterior_radius_general(layer, norm_y, 3, 2, rng, 3000)
        assert stats.kstest(draws, SqrtChiSquared(dof=2).cdf).statistic < 0.05


def test_general_radius_agrees_with_studentt_route():
    theta, n, n_bar, norm_y = 5.0, 3, 2, 1.8
    rng = np.random.default_rng(10)
    general = ell_posterior_radius_general(t_mixing(theta), norm_y, n, n_bar, rng, 6000)
    exact = studentt_posterior_radius(student_t(theta), norm_y, n, n_bar, rng, 40000)
    probs = np.linspace(0.2, 0.8, 7)
    np.testing.assert_allclose(np.quantile(general, probs), np.quantile(exact, probs), rtol=0.07)


def test_general_radius_single_new_point_matches_quadrature():
    layer = t_mixing(4.0)
    n, norm_y = 3, 1.5
    density = lambda b: np.exp(layer.log_radial_density(n + 1, math.sqrt(b * b + norm_y**2)))
    mass = integrate.quad(density, 0, np.inf)[0]
    mean = integrate.quad(lambda b: b * density(b), 0, np.inf)[0] / mass
    draws = ell_posterior_radius_general(layer, norm_y, n, 1, np.random.default_rng(11), 10000)
    assert np.mean(draws) == pytest.approx(mean, rel=0.03)


def test_radial_map_keeps_correlation():
    rng = np.random.default_rng(12)
    L = np.linalg.cholesky(np.array([[1.0, 0.6], [0.6, 1.0]]))
    x = rng.normal(size=(100000, 2))
    before = np.corrcoef((x @ L.T).T)[0, 1]
    after = np.corrcoef((ell_forward(student_t(8.0), x) @ L.T).T)[0, 1]
    assert after == pytest.approx(before, abs=0.02)


# --- archimedean -------------------------------------------------------------


def test_independence_outputs_are_exponential():
    x = np.random.default_rng(13).normal(size=(10000, 1))
    y = arch_forward(ArchimedeanLayer(IndependenceCopula()), x)
    assert stats.kstest(y.ravel(), "expon").pvalue > 0.001


def test_clayton_radius_and_marginals():
    layer = ArchimedeanLayer(ClaytonCopula(theta=1.0))
    y = arch_forward(layer, np.random.default_rng(14).normal(size=(10000, 3)))
    assert np.all(y > 0)
    assert stats.kstest(y.sum(axis=1), ScaledF(scale=3.0, d1=6.0, d2=2.0).cdf).pvalue > 0.001
    assert stats.kstest(arch_marginal_cdf(layer, y[:, 0]), "uniform").pvalue > 0.001


def test_arch_marginal_cdf_examples():
    assert arch_marginal_cdf(ArchimedeanLayer(IndependenceCopula()), math.log(2)) == pytest.approx(0.5)
    clayton = ArchimedeanLayer(ClaytonCopula(theta=1.0))
    assert arch_marginal_cdf(clayton, 1.0) == pytest.approx(0.5)
    assert arch_marginal_cdf(clayton, 0.0) == 0.0


@pytest.mark.parametrize("theta", [1.0, 2.5])
def test_clayton_empirical_copula(theta):
    layer = ArchimedeanLayer(ClaytonCopula(theta=theta))
    rng = np.random.default_rng(15)
    N = 20000
    from_mixing = arch_sample(layer, 2, rng, N)
    from_transport = layer.generator.psi(arch_forward(layer, rng.normal(size=(N, 2))))
    grid = [0.1, 0.3, 0.5, 0.7, 0.9]
    for a in grid:
        for b in grid:
            c = (a**-theta + b**-theta - 1.0) ** (-1.0 / theta)
            se = math.sqrt(c * (1 - c) / N)
            assert abs(empirical_copula(from_mixing, [a, b]) - c) < 4 * se
            assert abs(empirical_copula(from_transport, [a, b]) - c) < 4 * se


def test_independence_conditional_is_uniform():
    layer = ArchimedeanLayer(IndependenceCopula())
    u = arch_conditional_sample(layer, [0.2, 0.9], 3, np.random.default_rng(16), 5000)
    assert stats.kstest(u.ravel(), "uniform").pvalue > 0.001


def test_clayton_conditional_cdf():
    layer = ArchimedeanLayer(ClaytonCopula(theta=1.0))
    grid = np.linspace(0.05, 0.95, 10)
    np.testing.assert_allclose(layer.conditional_cdf(grid, [0.5]), 4 * grid**2 / (1 + grid) ** 2, rtol=1e-12)
    u = arch_conditional_sample(layer, [0.5], 1, np.random.default_rng(17), 20000).ravel()
    assert stats.kstest(u, lambda v: layer.conditional_cdf(v, [0.5])).pvalue > 0.001


@pytest.mark.parametrize("n", [1, 2, 3])
def test_clayton_logdet_matches_jacobian(n):
    layer = ArchimedeanLayer(ClaytonCopula(theta=1.0))
    y = arch_forward(layer, np.random.default_rng(18 + n).normal(size=n))
    expected = fd_logdet(lambda v: layer.inverse(None, v), y)
    assert arch_logdet_inv(layer, n, y) == pytest.approx(expected, abs=1e-4)


def test_independence_logdet_is_pre_map_only():
    layer = ArchimedeanLayer(IndependenceCopula())
    y = np.array([0.3, 1.2, 2.5])
    x = layer.inverse(None, y)
    assert arch_logdet_inv(layer, 3, y) == pytest.approx(-np.sum(layer.pre.log_derivative(x)), rel=1e-12)


def test_archimedean_rejects_nonpositive_values_and_generators():
    with pytest.raises(DomainError):
        arch_logdet_inv(ArchimedeanLayer(ClaytonCopula(theta=1.0)), 2, np.array([0.5, 0.0]))
    with pytest.raises(NotImplementedError):
        ArchimedeanGenerator("gumbel", 2.0)


# --- tail dependence ---------------------------------------------------------


def test_tail_closed_forms():
    assert tail_dependence_coeffs(GaussianTail(rho=0.9)) == (0.0, 0.0)
    lam_l, lam_u = tail_dependence_coeffs(StudentTTail(theta=1.0, rho=0.0))
    assert lam_l == pytest.approx(1 - 1 / math.sqrt(2), abs=1e-10)
    assert lam_u == lam_l
    assert tail_dependence_coeffs(ArchimedeanTail(generator="independence")) == (0.0, 0.0)


@pytest.mark.parametrize("theta", [0.05, 1.0, 2.0, 40.0])
def test_clayton_tail_is_exact(theta):
    assert tail_dependence_coeffs(ArchimedeanTail(generator="clayton", theta=theta)) == (2.0 ** (-1.0 / theta), 0.0)


def test_empirical_tail_dependence():
    layer = ArchimedeanLayer(ClaytonCopula(theta=2.0))
    pairs = arch_sample(layer, 2, np.random.default_rng(19), 50000)
    lam_l, lam_u = empirical_tail_dependence(pairs, 0.01)
    assert lam_l == pytest.approx(2 ** -0.5, abs=0.1)
    assert lam_u < 0.2
    table = empirical_tail_table(pairs)
    assert set(table) == {"0.01", "0.005", "0.001"}


def test_pseudo_observations_are_scaled_ranks():
    u = pseudo_observations(np.array([[3.0, 10.0], [1.0, 30.0], [2.0, 20.0]]))
    np.testing.assert_allclose(u, [[0.75, 0.25], [0.25, 0.75], [0.5, 0.5]])
