"""Adaptive fuzzy c-means with graph embedding, and two-stage spectral baselines.

The embedding ``X~`` is a ``(dim, n)`` matrix with orthonormal rows. Each
AFCM iteration re-solves it as the ``dim`` smallest eigenvectors of
``gamma (I - U B U^T) + lam * L_hat`` and then runs the fuzzy c-means
updates (centers, gamma, memberships) inside the embedded space.
"""

import time
from dataclasses import asdict, dataclass

import numpy as np
import scipy.linalg
from scipy.special import xlogy

from .clustering import (
    GAMMA_INIT, FitReport, _rel_change, fit_degenerate_afcm, hard_labels,
    init_membership, kmeans, sq_distances, update_centers, update_gamma,
    update_membership,
)
from .graph import anchor_laplacian, knn_affinity, normalized_laplacian


class EigenSolverError(RuntimeError):
    pass


@dataclass(frozen=True)
class AfcmConfig:
    c: int
    lam: float = 1.0
    k: int = 5
    sigma: float = 2.0
    max_iter: int = 100
    tol: float = 1e-6
    seed: int = 0
    dim: int | None = None
    symmetrize: str = "max"

    def __post_init__(self):
        if self.c < 1:
            raise ValueError(f"c must be >= 1, got {self.c}")
        if not self.lam > 0:
            raise ValueError(f"lam must be positive, got {self.lam}")
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.sigma <= 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")

    @property
    def embed_dim(self):
        return self.c if self.dim is None else self.dim

    def to_dict(self):
        return asdict(self)


def _fix_signs(vecs):
    # make the largest-magnitude entry of each row positive
    idx = np.argmax(np.abs(vecs), axis=1)
    signs = np.sign(vecs[np.arange(vecs.shape[0]), idx])
    signs[signs == 0] = 1.0
    return vecs * signs[:, None]


def smallest_eigvecs(M, dim):
    """Orthonormal rows spanning the ``dim`` smallest eigenvectors of symmetric ``M``.

    Returns ``(eigenvalues, vectors)`` with vectors of shape ``(dim, n)``.
    """
    n = M.shape[0]
    if not 1 <= dim <= n:
        raise ValueError(f"dim must be in [1, {n}], got {dim}")
    try:
        vals, vecs = scipy.linalg.eigh(M, subset_by_index=[0, dim - 1])
    except (np.linalg.LinAlgError, ValueError) as exc:
        finite = bool(np.all(np.isfinite(M)))
        asym = float(np.max(np.abs(M - M.T))) if finite else float("nan")
        norm = float(np.linalg.norm(M, 2)) if finite else float("nan")
        raise EigenSolverError(
            f"symmetric eigensolver failed on {n}x{n} matrix "
            f"(finite={finite}, max asymmetry={asym:.3g}, 2-norm={norm:.3g}): {exc}") from exc
    return vals, _fix_signs(vecs.T)


def embedding_matrix(membership, gamma, lam, laplacian):
    L = getattr(laplacian, "matrix", laplacian)
    A = anchor_laplacian(membership).matrix
    return gamma * A + lam * L


def update_embedding(membership, gamma, lam, laplacian, dim):
    """Optimal orthonormal embedding for fixed memberships, gamma and graph."""
    M = embedding_matrix(membership, gamma, lam, laplacian)
    return smallest_eigvecs(M, dim)[1]


def spectral_embed(laplacian, c):
    """The ``c`` smallest eigenvectors of a Laplacian, as rows."""
    L = np.asarray(getattr(laplacian, "matrix", laplacian), float)
    return smallest_eigvecs(L, c)[1]


def objective_full(embedding, membership, centers, gamma, lam, laplacian):
    """AFCM objective: fuzzy scatter + graph smoothness + entropy - log-scale term."""
    Xe = np.asarray(embedding, float)
    dim, n = Xe.shape
    U = np.asarray(membership, float)
    L = np.asarray(getattr(laplacian, "matrix", laplacian), float)
    scatter = float(np.sum(U * sq_distances(Xe, centers)))
    smooth = float(np.einsum("ij,jk,ik->", Xe, L, Xe))
    entropy = float(np.sum(xlogy(U, U)))
    return gamma * scatter + lam * smooth + entropy - 0.5 * n * dim * np.log(gamma)


def build_laplacian(data, k, sigma=2.0, symmetrize="max"):
    return normalized_laplacian(knn_affinity(data, k, sigma, symmetrize))


def fit_afcm(data, config, laplacian=None, record_labels=False):
    """Run the full AFCM alternation.

    ``data`` is a :class:`~afcm.datasets.Dataset` or a ``(d, n)`` array. A
    precomputed normalized Laplacian may be passed to share it across runs
    with the same graph settings. The returned report carries the final
    embedding in ``report.embedding``.
    """
    pts = np.asarray(getattr(data, "features", data), float)
    n = pts.shape[1]
    c, dim, lam = config.c, config.embed_dim, config.lam
    if not 1 <= c <= n:
        raise ValueError(f"need 1 <= c <= n, got c={c}, n={n}")
    if laplacian is None:
        laplacian = build_laplacian(pts, config.k, config.sigma, config.symmetrize)

    U = init_membership(pts, c, config.seed)
    gamma = GAMMA_INIT
    report = FitReport(U, None, gamma, label_trace=[] if record_labels else None)
    for it in range(1, config.max_iter + 1):
        start = time.perf_counter()
        Xe = update_embedding(U, gamma, lam, laplacian, dim)
        V = update_centers(Xe, U, iteration=it)
        gamma = update_gamma(Xe, U, V, dim)
        U = update_membership(Xe, V, gamma)
        J = objective_full(Xe, U, V, gamma, lam, laplacian)
        report.iter_times.append(time.perf_counter() - start)
        report.objective_trace.append(J)
        report.gamma_trace.append(gamma)
        if record_labels:
            report.label_trace.append(hard_labels(U))
        report.iterations = it
        if it > 1 and _rel_change(report.objective_trace[-2], J) < config.tol:
            report.converged = True
            break
    report.membership, report.centers, report.gamma = U, V, gamma
    report.embedding = Xe
    return report


def ablation1(data, c, k, sigma=2.0, seed=0, laplacian=None):
    """Spectral embedding followed by k-means. Returns labels."""
    if laplacian is None:
        laplacian = build_laplacian(data, k, sigma)
    emb = spectral_embed(laplacian, c)
    return kmeans(emb, c, seed=seed)[0]


def ablation2(data, c, k, sigma=2.0, seed=0, laplacian=None, max_iter=100, tol=1e-6):
    """Spectral embedding followed by degenerate AFCM. Returns labels."""
    if laplacian is None:
        laplacian = build_laplacian(data, k, sigma)
    emb = spectral_embed(laplacian, c)
    return fit_degenerate_afcm(emb, c, seed=seed, max_iter=max_iter, tol=tol).labels


def spectral_clustering(data, c, k, sigma=2.0, seed=0, laplacian=None):
    """Normalised spectral clustering with row-normalised embedding (Ng-Jordan-Weiss)."""
    if laplacian is None:
        laplacian = build_laplacian(data, k, sigma)
    emb = spectral_embed(laplacian, c)
    norms = np.linalg.norm(emb, axis=0)
    emb = emb / np.where(norms > 0, norms, 1.0)
    return kmeans(emb, c, seed=seed)[0]
