"""scikit-learn compatible wrappers.

Estimators take ``X`` with samples as rows, like the rest of scikit-learn,
and expose fitted state through trailing-underscore attributes.
"""

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import afcm as _afcm
from . import clustering as _cl
from ._validation import (
    check_n_clusters, check_n_neighbors, check_positive, resolve_seed,
    validate_samples,
)


class _FuzzyMixin:
    def _store(self, report):
        self.membership_ = report.membership
        self.labels_ = report.labels
        self.cluster_centers_ = report.centers.T
        self.gamma_ = report.gamma
        self.objective_trace_ = np.asarray(report.objective_trace)
        self.gamma_trace_ = np.asarray(report.gamma_trace)
        self.n_iter_ = report.iterations
        self.converged_ = report.converged
        self.report_ = report


class DegenerateAFCM(_FuzzyMixin, ClusterMixin, TransformerMixin, BaseEstimator):
    """Entropy-regularised fuzzy c-means that learns its own fuzziness.

    Parameters
    ----------
    n_clusters : int
    max_iter : int
    tol : float
        Stop when the relative objective change drops below ``tol``.
    random_state : int, RandomState or None
        Seed for the k-means++ initialisation.

    Attributes
    ----------
    membership_ : ndarray of shape (n_samples, n_clusters)
    labels_ : ndarray of shape (n_samples,)
    cluster_centers_ : ndarray of shape (n_clusters, n_features)
    gamma_ : float
        Learned scale (inverse entropy weight).
    objective_trace_ : ndarray
    """

    def __init__(self, n_clusters=2, max_iter=100, tol=1e-6, random_state=None):
        self.n_clusters = n_clusters
        self.max_iter = max_iter
        self.tol = tol
        self.random_state = random_state

    def _run(self, X, seed):
        return _cl.fit_degenerate_afcm(X.T, self.n_clusters, seed=seed,
                                       max_iter=self.max_iter, tol=self.tol)

    def fit(self, X, y=None):
        X = validate_samples(X)
        check_n_clusters(self.n_clusters, X.shape[0])
        self.n_features_in_ = X.shape[1]
        self._store(self._run(X, resolve_seed(self.random_state)))
        return self

    def predict_proba(self, X):
        """Memberships of new samples under the fitted centers and scale."""
        check_is_fitted(self, "cluster_centers_")
        X = validate_samples(X)
        return _cl.update_membership(X.T, self.cluster_centers_.T, self.gamma_)

    def predict(self, X):
        return _cl.hard_labels(self.predict_proba(X))

    def transform(self, X):
        """Squared distances to each center."""
        check_is_fitted(self, "cluster_centers_")
        X = validate_samples(X)
        return _cl.sq_distances(X.T, self.cluster_centers_.T)


class EntropyFCM(DegenerateAFCM):
    """Entropy-regularised fuzzy c-means with a fixed scale ``gamma``.

    ``gamma`` multiplies the squared distances, so it is the reciprocal of
    the usual entropy weight.
    """

    def __init__(self, n_clusters=2, gamma=1.0, max_iter=100, tol=1e-6, random_state=None):
        super().__init__(n_clusters, max_iter, tol, random_state)
        self.gamma = gamma

    def _run(self, X, seed):
        check_positive(self.gamma, "gamma")
        return _cl.fit_fcm_er(X.T, self.n_clusters, self.gamma, seed=seed,
                              max_iter=self.max_iter, tol=self.tol)


class AFCM(_FuzzyMixin, ClusterMixin, BaseEstimator):
    """Adaptive fuzzy c-means with graph embedding.

    Clusters in a learned orthonormal embedding that balances fuzzy
    within-cluster scatter against smoothness over a k-NN Gaussian graph.
    Transductive: there is no ``predict`` for unseen samples.

    Parameters
    ----------
    n_clusters : int
    lam : float
        Weight of the graph smoothness term.
    n_neighbors : int
        ``k`` of the k-NN graph.
    sigma : float
        Gaussian kernel width.
    embed_dim : int or None
        Embedding dimension; defaults to ``n_clusters``.
    max_iter, tol : see :class:`DegenerateAFCM`.
    symmetrize : {"max", "mean"}
        How directed k-NN weights are made symmetric.
    random_state : int, RandomState or None

    Attributes
    ----------
    embedding_ : ndarray of shape (n_samples, embed_dim)
    membership_, labels_, cluster_centers_, gamma_, objective_trace_
        As in :class:`DegenerateAFCM`; centers live in the embedded space.
    """

    def __init__(self, n_clusters=2, lam=1.0, n_neighbors=5, sigma=2.0, embed_dim=None,
                 max_iter=100, tol=1e-6, symmetrize="max", random_state=None):
        self.n_clusters = n_clusters
        self.lam = lam
        self.n_neighbors = n_neighbors
        self.sigma = sigma
        self.embed_dim = embed_dim
        self.max_iter = max_iter
        self.tol = tol
        self.symmetrize = symmetrize
        self.random_state = random_state

    def fit(self, X, y=None):
        X = validate_samples(X, min_samples=2)
        n = X.shape[0]
        config = _afcm.AfcmConfig(
            c=check_n_clusters(self.n_clusters, n),
            lam=check_positive(self.lam, "lam"),
            k=check_n_neighbors(self.n_neighbors, n),
            sigma=check_positive(self.sigma, "sigma"),
            max_iter=self.max_iter, tol=self.tol,
            seed=resolve_seed(self.random_state),
            dim=self.embed_dim, symmetrize=self.symmetrize)
        self.n_features_in_ = X.shape[1]
        report = _afcm.fit_afcm(X.T, config)
        self._store(report)
        self.embedding_ = report.embedding.T
        return self

    def fit_transform(self, X, y=None):
        return self.fit(X).embedding_


class TwoStageSpectral(ClusterMixin, BaseEstimator):
    """Spectral embedding of the k-NN graph, then a separate clustering stage.

    ``second_stage="kmeans"`` gives the k-means pipeline and
    ``"degenerate_afcm"`` the adaptive FCM pipeline. ``normalize_rows``
    rescales each embedded sample to unit length first (Ng-Jordan-Weiss).
    """

    def __init__(self, n_clusters=2, n_neighbors=5, sigma=2.0, second_stage="kmeans",
                 normalize_rows=False, random_state=None):
        self.n_clusters = n_clusters
        self.n_neighbors = n_neighbors
        self.sigma = sigma
        self.second_stage = second_stage
        self.normalize_rows = normalize_rows
        self.random_state = random_state

    def fit(self, X, y=None):
        X = validate_samples(X, min_samples=2)
        n = X.shape[0]
        c = check_n_clusters(self.n_clusters, n)
        k = check_n_neighbors(self.n_neighbors, n)
        seed = resolve_seed(self.random_state)
        L = _afcm.build_laplacian(X.T, k, check_positive(self.sigma, "sigma"))
        emb = _afcm.spectral_embed(L, c)
        if self.normalize_rows:
            norms = np.linalg.norm(emb, axis=0)
            emb = emb / np.where(norms > 0, norms, 1.0)
        if self.second_stage == "kmeans":
            self.labels_ = _cl.kmeans(emb, c, seed=seed)[0]
        elif self.second_stage == "degenerate_afcm":
            self.labels_ = _cl.fit_degenerate_afcm(emb, c, seed=seed).labels
        else:
            raise ValueError(f"unknown second_stage {self.second_stage!r}")
        self.embedding_ = emb.T
        self.n_features_in_ = X.shape[1]
        return self
