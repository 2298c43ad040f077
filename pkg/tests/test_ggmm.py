import time

import mpmath
import numpy as np
import pytest
from scipy import integrate
from scipy.stats import multivariate_normal

from afcm.clustering import update_membership
from afcm.ggmm import (
    GgmmParams, closed_form_membership, ggd_logpdf, mixture_posterior, random_params,
    verify_equivalence,
)


def mp_density(x, mean, scatter, beta, m):
    """Generalized Gaussian density at 50 digits, written out from its definition."""
    mpmath.mp.dps = 50
    d = len(x)
    S = mpmath.matrix([[mpmath.mpf(float(v)) for v in row] for row in scatter])
    diff = mpmath.matrix([mpmath.mpf(float(a)) - mpmath.mpf(float(b)) for a, b in zip(x, mean)])
    maha = (diff.T * mpmath.inverse(S) * diff)[0]
    beta, m = mpmath.mpf(beta), mpmath.mpf(m)
    norm = (beta * mpmath.gamma(mpmath.mpf(d) / 2) * m ** (mpmath.mpf(d) / (2 * beta))
            / (mpmath.pi ** (mpmath.mpf(d) / 2) * mpmath.gamma(mpmath.mpf(d) / (2 * beta))))
    return norm / mpmath.sqrt(mpmath.det(S)) * mpmath.exp(-m * maha ** beta)


def naive_posterior(x, params):
    """Densities evaluated with explicit inverse and determinant, then normalised."""
    dens = []
    for j in range(params.n_components):
        diff = x - params.means[j]
        S = params.scatters[j]
        maha = diff @ np.linalg.inv(S) @ diff
        dens.append(params.weights[j] * np.exp(-params.m * maha ** params.beta)
                    / np.sqrt(np.linalg.det(S)))
    dens = np.array(dens)
    return dens / dens.sum()


def test_one_dimensional_gaussian_values():
    # beta = 1, m = 1/2 is the standard normal
    assert ggd_logpdf([0.0], [0.0], [[1.0]], 1.0, 0.5) == pytest.approx(-0.9189385332046727, rel=1e-14)
    assert ggd_logpdf([1.0], [0.0], [[1.0]], 1.0, 0.5) == pytest.approx(-1.4189385332046727, rel=1e-14)


def test_matches_high_precision_density():
    x, mean = np.array([0.3, -1.2]), np.array([-0.5, 0.4])
    scatter = np.array([[1.5, 0.4], [0.4, 0.8]])
    got = ggd_logpdf(x, mean, scatter, 1.5, 0.7)
    ref = float(mpmath.log(mp_density(x, mean, scatter, 1.5, 0.7)))
    assert got == pytest.approx(ref, rel=1e-12)


@pytest.mark.parametrize("beta", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("m", [0.3, 1.0])
def test_density_integrates_to_one(beta, m):
    total_1d, _ = integrate.quad(lambda t: np.exp(ggd_logpdf([t], [0.4], [[2.0]], beta, m)),
                                 -np.inf, np.inf, epsabs=1e-12, limit=200)
    assert total_1d == pytest.approx(1.0, abs=1e-6)
    # isotropic 2-D density in polar coordinates
    radial, _ = integrate.quad(
        lambda r: 2 * np.pi * r * np.exp(ggd_logpdf([r, 0.0], [0.0, 0.0], np.eye(2), beta, m)),
        0, np.inf, epsabs=1e-12, limit=200)
    assert radial == pytest.approx(1.0, abs=1e-6)


def test_gaussian_shape_is_multivariate_normal(rng):
    for d in (1, 3, 5):
        A = rng.normal(size=(d, d))
        S = A @ A.T + np.eye(d)
        mean = rng.normal(size=d)
        x = rng.normal(size=(20, d))
        ref = multivariate_normal(mean, S).logpdf(x)
        np.testing.assert_allclose(ggd_logpdf(x, mean, S, 1.0, 0.5), ref, rtol=1e-12)


def test_posterior_two_component_example():
    params = GgmmParams(np.array([[-1.0], [1.0]]), np.ones((2, 1, 1)), 1.0, 0.5, [0.5, 0.5])
    np.testing.assert_allclose(mixture_posterior(np.array([0.0]), params), [0.5, 0.5], atol=1e-16)
    # log-odds at x = 1: -(0 - 4)/2 = 2
    expected = 1 / (1 + np.exp(-2.0))
    np.testing.assert_allclose(mixture_posterior(np.array([1.0]), params)[1], expected, rtol=1e-14)


@pytest.mark.parametrize("seed", range(10))
def test_posterior_matches_naive(seed):
    rng = np.random.default_rng(seed)
    params = random_params(rng, 3, 3, [0.5, 1.0, 2.0][seed % 3])
    x = rng.normal(size=3)
    np.testing.assert_allclose(mixture_posterior(x, params), naive_posterior(x, params), atol=1e-12)
    np.testing.assert_allclose(closed_form_membership(x, params), naive_posterior(x, params),
                               atol=1e-12)


def test_isotropic_closed_form_is_entropy_membership(rng):
    # beta = 1, identity scatter, equal weights, m = gamma
    c, d, gamma = 4, 3, 1.7
    V = rng.normal(size=(d, c))
    X = rng.normal(size=(d, 25))
    params = GgmmParams(V.T, np.repeat(np.eye(d)[None], c, 0), 1.0, gamma, np.full(c, 1 / c))
    np.testing.assert_allclose(closed_form_membership(X.T, params),
                               update_membership(X, V, gamma), atol=1e-13)


def test_batch_agrees_with_single(rng):
    params = random_params(rng, 2, 3, 0.5)
    X = rng.normal(size=(6, 2))
    batch = mixture_posterior(X, params)
    for row, x in zip(batch, X):
        np.testing.assert_allclose(row, mixture_posterior(x, params), rtol=1e-14, atol=1e-16)


def test_equivalence_over_many_instances():
    start = time.perf_counter()
    worst = verify_equivalence(1000, seed=0)
    assert worst <= 1e-10
    assert time.perf_counter() - start < 10


def test_rejects_bad_scatter():
    with pytest.raises(ValueError, match="positive definite"):
        ggd_logpdf([0.0, 0.0], [0.0, 0.0], [[1.0, 2.0], [2.0, 1.0]], 1.0, 1.0)
    with pytest.raises(ValueError, match="symmetric"):
        ggd_logpdf([0.0, 0.0], [0.0, 0.0], [[1.0, 0.5], [0.0, 1.0]], 1.0, 1.0)


def test_rejects_bad_params():
    with pytest.raises(ValueError):
        GgmmParams(np.zeros((2, 1)), np.ones((2, 1, 1)), 1.0, 1.0, [0.7, 0.7])
    with pytest.raises(ValueError):
        GgmmParams(np.zeros((2, 1)), np.ones((2, 1, 1)), 0.0, 1.0, [0.5, 0.5])
    with pytest.raises(ValueError):
        ggd_logpdf([0.0], [0.0], [[1.0]], 1.0, -1.0)
