"""Closed-form alternating updates for entropy-regularised fuzzy c-means.

All functions here work on column-major point matrices of shape ``(d, n)``
and membership matrices ``U`` of shape ``(n, c)`` whose rows lie on the
probability simplex. Centers are ``(d, c)``.
"""

import time
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import cdist
from scipy.special import logsumexp, xlogy

from .graph import EPS, DegenerateClusterError, column_masses

# memberships can harden until the scatter vanishes; the objective is then
# unbounded below in gamma, so the scale is capped
GAMMA_MAX = 1e12
GAMMA_INIT = 1.0
_TINY = np.finfo(float).tiny


@dataclass
class FitReport:
    """Outcome of one fit: final state plus per-iteration traces."""

    membership: np.ndarray
    centers: np.ndarray
    gamma: float
    objective_trace: list = field(default_factory=list)
    gamma_trace: list = field(default_factory=list)
    iter_times: list = field(default_factory=list)
    iterations: int = 0
    converged: bool = False
    label_trace: list | None = None
    embedding: np.ndarray | None = None

    @property
    def labels(self):
        return hard_labels(self.membership)

    def to_dict(self):
        out = {
            "gamma": float(self.gamma),
            "iterations": int(self.iterations),
            "converged": bool(self.converged),
            "objective_trace": [float(v) for v in self.objective_trace],
            "gamma_trace": [float(v) for v in self.gamma_trace],
            "iter_times": [float(v) for v in self.iter_times],
            "labels": self.labels.tolist(),
        }
        return out


def sq_distances(points, centers):
    """Squared Euclidean distances, ``(n, c)``."""
    return cdist(np.asarray(points, float).T, np.asarray(centers, float).T, "sqeuclidean")


def update_membership(points, centers, gamma):
    """Softmax memberships ``u_ij ~ exp(-gamma ||x_i - v_j||^2)``.

    Evaluated in log space with a per-row shift, and floored at the smallest
    normal float so every entry stays strictly positive.
    """
    if gamma <= 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    logits = -gamma * sq_distances(points, centers)
    logits -= logits.max(axis=1, keepdims=True)
    U = np.exp(logits - logsumexp(logits, axis=1, keepdims=True))
    np.maximum(U, _TINY, out=U)
    return U


def update_centers(points, membership, iteration=None):
    """Membership-weighted means ``v_j = sum_i u_ij x_i / sum_i u_ij``."""
    U = np.asarray(membership, float)
    mass = column_masses(U, EPS, iteration)
    return (np.asarray(points, float) @ U) / mass


def weighted_sse(points, membership, centers):
    return float(np.sum(membership * sq_distances(points, centers)))


def update_gamma(points, membership, centers, dim=None):
    """``gamma = (d n / 2) / sum_ij u_ij ||x_i - v_j||^2``, capped at ``GAMMA_MAX``."""
    pts = np.asarray(points, float)
    d = pts.shape[0] if dim is None else dim
    n = pts.shape[1]
    sse = weighted_sse(pts, membership, centers)
    if sse <= 0:
        return GAMMA_MAX
    return min(0.5 * d * n / sse, GAMMA_MAX)


def objective_degenerate(points, membership, centers, gamma, dim=None):
    """Adaptive FCM objective without the graph term (natural log)."""
    pts = np.asarray(points, float)
    d = pts.shape[0] if dim is None else dim
    n = pts.shape[1]
    U = np.asarray(membership, float)
    fit = gamma * weighted_sse(pts, U, centers)
    entropy = float(np.sum(xlogy(U, U)))
    return fit + entropy - 0.5 * n * d * np.log(gamma)


def hard_labels(membership):
    """Row-wise argmax; ties go to the lowest column."""
    return np.argmax(np.asarray(membership), axis=1)


def kmeans_plusplus(points, c, rng):
    """Indices of ``c`` distinct samples chosen by k-means++ seeding."""
    pts = np.asarray(points, float).T
    n = pts.shape[0]
    if not 1 <= c <= n:
        raise ValueError(f"need 1 <= c <= n, got c={c}, n={n}")
    chosen = [int(rng.integers(n))]
    closest = np.sum((pts - pts[chosen[0]]) ** 2, axis=1)
    for _ in range(1, c):
        weights = closest.copy()
        weights[chosen] = 0.0
        total = weights.sum()
        if total > 0:
            idx = int(rng.choice(n, p=weights / total))
        else:
            # every remaining point duplicates a chosen one
            free = np.setdiff1d(np.arange(n), chosen)
            idx = int(rng.choice(free))
        chosen.append(idx)
        closest = np.minimum(closest, np.sum((pts - pts[idx]) ** 2, axis=1))
    return np.array(chosen)


def init_membership(points, c, seed, gamma0=GAMMA_INIT):
    """Initial memberships from one softmax pass around k-means++ seeds."""
    rng = np.random.default_rng(seed)
    pts = np.asarray(points, float)
    seeds = kmeans_plusplus(pts, c, rng)
    return update_membership(pts, pts[:, seeds], gamma0)


def _rel_change(prev, cur):
    return abs(prev - cur) / max(abs(prev), _TINY)


def _fit_fuzzy(points, c, seed, max_iter, tol, gamma_fixed, record_labels):
    pts = np.asarray(points, float)
    d, n = pts.shape
    if not 1 <= c <= n:
        raise ValueError(f"need 1 <= c <= n, got c={c}, n={n}")
    U = init_membership(pts, c, seed)
    gamma = GAMMA_INIT if gamma_fixed is None else float(gamma_fixed)
    report = FitReport(U, None, gamma, label_trace=[] if record_labels else None)
    for it in range(1, max_iter + 1):
        start = time.perf_counter()
        V = update_centers(pts, U, iteration=it)
        if gamma_fixed is None:
            gamma = update_gamma(pts, U, V, d)
        U = update_membership(pts, V, gamma)
        J = objective_degenerate(pts, U, V, gamma, d)
        report.iter_times.append(time.perf_counter() - start)
        report.objective_trace.append(J)
        report.gamma_trace.append(gamma)
        if record_labels:
            report.label_trace.append(hard_labels(U))
        report.iterations = it
        if it > 1 and _rel_change(report.objective_trace[-2], J) < tol:
            report.converged = True
            break
    report.membership, report.centers, report.gamma = U, V, gamma
    return report


def fit_degenerate_afcm(points, c, seed=0, max_iter=100, tol=1e-6, record_labels=False):
    """Parameter-free adaptive FCM: centers, then gamma, then memberships.

    ``points`` is a :class:`~afcm.datasets.Dataset` or a ``(d, n)`` array.
    """
    pts = getattr(points, "features", points)
    return _fit_fuzzy(pts, c, seed, max_iter, tol, None, record_labels)


def fit_fcm_er(points, c, gamma_fixed, seed=0, max_iter=100, tol=1e-6, record_labels=False):
    """Entropy-regularised FCM with a fixed ``gamma`` (inverse regulariser)."""
    if gamma_fixed <= 0:
        raise ValueError(f"gamma_fixed must be positive, got {gamma_fixed}")
    pts = getattr(points, "features", points)
    return _fit_fuzzy(pts, c, seed, max_iter, tol, gamma_fixed, record_labels)


def kmeans(points, c, seed=0, max_iter=300):
    """Lloyd's algorithm from k-means++ seeds.

    Returns ``(labels, centers)`` with centers of shape ``(d, c)``. An
    emptied cluster is re-seeded with the point farthest from its center.
    """
    pts = np.asarray(getattr(points, "features", points), float)
    n = pts.shape[1]
    rng = np.random.default_rng(seed)
    V = pts[:, kmeans_plusplus(pts, c, rng)].copy()
    labels = None
    for _ in range(max_iter):
        dist = sq_distances(pts, V)
        new = np.argmin(dist, axis=1)
        counts = np.bincount(new, minlength=c)
        for j in np.flatnonzero(counts == 0):
            own = dist[np.arange(n), new]
            far = int(np.argmax(own))
            new[far] = j
            dist[far, :] = 0.0
            counts = np.bincount(new, minlength=c)
        if labels is not None and np.array_equal(new, labels):
            break
        labels = new
        for j in range(c):
            V[:, j] = pts[:, labels == j].mean(axis=1)
    return labels, V


def kmeans_sse(points, labels, centers):
    pts = np.asarray(points, float)
    return float(np.sum((pts - centers[:, labels]) ** 2))


__all__ = [
    "DegenerateClusterError", "FitReport", "GAMMA_MAX", "fit_degenerate_afcm",
    "fit_fcm_er", "hard_labels", "init_membership", "kmeans", "kmeans_plusplus",
    "objective_degenerate", "update_centers", "update_gamma", "update_membership",
]
