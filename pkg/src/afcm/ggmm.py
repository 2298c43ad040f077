"""Fixed-parameter generalized Gaussian densities and mixture posteriors.

Only evaluation is provided. The mixture posterior and the closed-form
entropy-FCM membership are computed by separate code paths so that their
agreement can be checked numerically.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.special import gammaln, logsumexp


@dataclass(frozen=True)
class GgmmParams:
    """Mixture of generalized Gaussians sharing shape ``beta`` and scale ``m``.

    means : (c, d), scatters : (c, d, d) symmetric positive definite,
    weights : (c,) on the simplex.
    """

    means: np.ndarray
    scatters: np.ndarray
    beta: float
    m: float
    weights: np.ndarray

    def __post_init__(self):
        means = np.atleast_2d(np.asarray(self.means, float))
        c, d = means.shape
        scatters = np.asarray(self.scatters, float).reshape(c, d, d)
        weights = np.asarray(self.weights, float).ravel()
        if weights.shape != (c,):
            raise ValueError(f"expected {c} mixing weights, got {weights.size}")
        if np.any(weights <= 0) or abs(weights.sum() - 1.0) > 1e-10:
            raise ValueError("mixing weights must be positive and sum to 1")
        if not self.beta > 0 or not self.m > 0:
            raise ValueError("beta and m must be positive")
        object.__setattr__(self, "means", means)
        object.__setattr__(self, "scatters", scatters)
        object.__setattr__(self, "weights", weights)

    @property
    def n_components(self):
        return self.means.shape[0]

    @property
    def dim(self):
        return self.means.shape[1]


def _chol(scatter):
    if not np.allclose(scatter, scatter.T, rtol=0, atol=1e-12 * max(1.0, np.abs(scatter).max())):
        raise ValueError("scatter matrix is not symmetric")
    try:
        return scipy.linalg.cholesky(scatter, lower=True)
    except np.linalg.LinAlgError:
        raise ValueError("scatter matrix is not positive definite") from None


def _maha_logdet(x, mean, scatter):
    """Squared Mahalanobis distances of rows of ``x`` and ``log|scatter|``."""
    L = _chol(scatter)
    z = scipy.linalg.solve_triangular(L, (x - mean).T, lower=True)
    return np.sum(z * z, axis=0), 2.0 * np.sum(np.log(np.diag(L)))


def log_normalizer(d, beta, m):
    """``log[beta Gamma(d/2) m^(d/(2 beta)) / (pi^(d/2) Gamma(d/(2 beta)))]``."""
    return (np.log(beta) + gammaln(d / 2.0) + d / (2.0 * beta) * np.log(m)
            - d / 2.0 * np.log(np.pi) - gammaln(d / (2.0 * beta)))


def ggd_logpdf(x, mean, scatter, beta, m):
    """Log-density of one generalized Gaussian component.

    ``x`` may be a single length-d vector or an ``(n, d)`` array.
    """
    x = np.asarray(x, float)
    single = x.ndim == 1
    x = np.atleast_2d(x)
    mean = np.asarray(mean, float).ravel()
    scatter = np.atleast_2d(np.asarray(scatter, float))
    if not beta > 0 or not m > 0:
        raise ValueError("beta and m must be positive")
    maha, logdet = _maha_logdet(x, mean, scatter)
    out = log_normalizer(mean.size, beta, m) - 0.5 * logdet - m * maha ** beta
    return float(out[0]) if single else out


def _component_logits(x, params, with_normalizer):
    x = np.atleast_2d(np.asarray(x, float))
    logits = np.empty((x.shape[0], params.n_components))
    for j in range(params.n_components):
        if with_normalizer:
            logits[:, j] = np.log(params.weights[j]) + ggd_logpdf(
                x, params.means[j], params.scatters[j], params.beta, params.m)
        else:
            maha, logdet = _maha_logdet(x, params.means[j], params.scatters[j])
            logits[:, j] = np.log(params.weights[j]) - 0.5 * logdet - params.m * maha ** params.beta
    return logits


def _softmax_rows(logits, single):
    out = np.exp(logits - logsumexp(logits, axis=1, keepdims=True))
    return out[0] if single else out


def mixture_posterior(x, params):
    """Responsibilities ``alpha_j g(x | theta_j) / sum_l alpha_l g(x | theta_l)``."""
    single = np.asarray(x).ndim == 1
    return _softmax_rows(_component_logits(x, params, True), single)


def closed_form_membership(x, params):
    """Stationary entropy-FCM membership for the generalized Gaussian objective.

    ``u_j ~ alpha_j |Sigma_j|^{-1/2} exp(-m [(x - v_j)^T Sigma_j^{-1} (x - v_j)]^beta)``;
    the shared normalising constant never enters.
    """
    single = np.asarray(x).ndim == 1
    return _softmax_rows(_component_logits(x, params, False), single)


def random_params(rng, d, c, beta, spread=2.0):
    """Random well-conditioned mixture parameters for verification runs."""
    means = rng.normal(scale=spread, size=(c, d))
    scatters = np.empty((c, d, d))
    for j in range(c):
        A = rng.normal(size=(d, d))
        scatters[j] = A @ A.T / d + 0.5 * np.eye(d)
    weights = rng.dirichlet(np.ones(c))
    m = float(rng.uniform(0.1, 3.0))
    return GgmmParams(means, scatters, beta, m, weights)


def verify_equivalence(n_instances=1000, seed=0, dims=(1, 2, 5), comps=(2, 4),
                       betas=(0.5, 1.0, 2.0)):
    """Largest elementwise gap between the two membership formulas.

    Draws ``n_instances`` random (x, mixture) pairs cycling through the
    given dimensions, component counts and shapes.
    """
    rng = np.random.default_rng(seed)
    grid = [(d, c, b) for d in dims for c in comps for b in betas]
    worst = 0.0
    for i in range(n_instances):
        d, c, beta = grid[i % len(grid)]
        params = random_params(rng, d, c, beta)
        x = rng.normal(scale=2.0, size=d)
        gap = np.max(np.abs(closed_form_membership(x, params) - mixture_posterior(x, params)))
        worst = max(worst, float(gap))
    return worst
