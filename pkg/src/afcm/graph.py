"""k-NN Gaussian affinity graphs and the two Laplacians used by AFCM."""

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

EPS = 1e-12


class DegenerateClusterError(ArithmeticError):
    """A cluster's total membership fell below the mass floor."""

    def __init__(self, message, cluster=None, iteration=None):
        super().__init__(message)
        self.cluster = cluster
        self.iteration = iteration


@dataclass(frozen=True)
class AffinityGraph:
    weights: np.ndarray
    k: int
    sigma: float


@dataclass(frozen=True)
class NormalizedLaplacian:
    matrix: np.ndarray
    degrees: np.ndarray


@dataclass(frozen=True)
class AnchorLaplacian:
    matrix: np.ndarray
    column_masses: np.ndarray


def _as_points(data):
    feats = getattr(data, "features", data)
    return np.asarray(feats, dtype=float)


def knn_affinity(data, k, sigma=2.0, symmetrize="max"):
    """Gaussian-weighted k-nearest-neighbour graph.

    ``w_ij = exp(-||x_i - x_j||^2 / (2 sigma^2))`` when ``x_j`` is one of the
    ``k`` nearest neighbours of ``x_i`` (self excluded, ties to the lower
    index), else 0. The directed graph is made undirected with the
    elementwise max, or the mean when ``symmetrize="mean"``.

    ``data`` is a :class:`~afcm.datasets.Dataset` or a ``(d, n)`` array.
    """
    pts = _as_points(data)
    n = pts.shape[1]
    if not 1 <= k <= n - 1:
        raise ValueError(f"k must be in [1, {n - 1}], got {k}")
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    if symmetrize not in ("max", "mean"):
        raise ValueError(f"unknown symmetrization {symmetrize!r}")

    sq = cdist(pts.T, pts.T, "sqeuclidean")
    if not np.all(np.isfinite(sq)):
        raise ValueError("non-finite pairwise distances")
    np.fill_diagonal(sq, np.inf)
    # stable sort keeps the lower index first among equal distances
    nbrs = np.argsort(sq, axis=1, kind="stable")[:, :k]
    rows = np.repeat(np.arange(n), k)
    cols = nbrs.ravel()

    directed = np.zeros((n, n))
    directed[rows, cols] = np.exp(-sq[rows, cols] / (2.0 * sigma ** 2))
    if symmetrize == "max":
        W = np.maximum(directed, directed.T)
    else:
        W = 0.5 * (directed + directed.T)
    np.fill_diagonal(W, 0.0)
    return AffinityGraph(W, int(k), float(sigma))


def normalized_laplacian(graph):
    """``D^{-1/2} (D - W) D^{-1/2}`` with degrees floored at ``EPS``."""
    W = getattr(graph, "weights", graph)
    W = np.asarray(W, dtype=float)
    deg = W.sum(axis=1)
    safe = np.maximum(deg, EPS)
    inv_sqrt = 1.0 / np.sqrt(safe)
    L = np.diag(safe) - W
    M = inv_sqrt[:, None] * L * inv_sqrt[None, :]
    return NormalizedLaplacian(0.5 * (M + M.T), deg)


def column_masses(membership, floor=EPS, iteration=None):
    """Column sums of ``U``; raises :class:`DegenerateClusterError` below ``floor``."""
    mass = np.asarray(membership).sum(axis=0)
    bad = np.flatnonzero(mass < floor)
    if bad.size:
        where = "" if iteration is None else f" at iteration {iteration}"
        raise DegenerateClusterError(
            f"cluster {bad[0]} has membership mass {mass[bad[0]]:.3g}{where}",
            cluster=int(bad[0]), iteration=iteration)
    return mass


def anchor_laplacian(membership):
    """``I - U B U^T`` with ``B = diag(1 / column sums of U)``."""
    U = np.asarray(getattr(membership, "memberships", membership), dtype=float)
    mass = column_masses(U)
    S = (U / mass) @ U.T
    S = 0.5 * (S + S.T)
    return AnchorLaplacian(np.eye(U.shape[0]) - S, mass)


def anchor_adjacency(membership):
    """Anchor-graph weights ``w_ij = sum_k u_ik u_jk / sum_l u_lk``."""
    U = np.asarray(getattr(membership, "memberships", membership), dtype=float)
    return (U / column_masses(U)) @ U.T
