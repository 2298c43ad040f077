"""Adaptive fuzzy c-means with graph embedding (AFCM) and its baselines."""

from .afcm import (
    AfcmConfig, ablation1, ablation2, fit_afcm, objective_full, spectral_clustering,
    spectral_embed, update_embedding,
)
from .clustering import (
    FitReport, fit_degenerate_afcm, fit_fcm_er, hard_labels, kmeans, objective_degenerate,
    update_centers, update_gamma, update_membership,
)
from .datasets import (
    Dataset, gen_three_rings, gen_two_spirals, load_csv, load_iris, minmax_normalize,
)
from .estimators import AFCM, DegenerateAFCM, EntropyFCM, TwoStageSpectral
from .graph import (
    DegenerateClusterError, anchor_laplacian, knn_affinity, normalized_laplacian,
)
from .metrics import accuracy, ari, nmi

__version__ = "0.1.0"

__all__ = [
    "AFCM", "AfcmConfig", "Dataset", "DegenerateAFCM", "DegenerateClusterError", "EntropyFCM",
    "FitReport", "TwoStageSpectral", "ablation1", "ablation2", "accuracy", "anchor_laplacian",
    "ari", "fit_afcm", "fit_degenerate_afcm", "fit_fcm_er", "gen_three_rings", "gen_two_spirals",
    "hard_labels", "kmeans", "knn_affinity", "load_csv", "load_iris", "minmax_normalize", "nmi",
    "normalized_laplacian", "objective_degenerate", "objective_full", "spectral_clustering",
    "spectral_embed", "update_centers", "update_embedding", "update_gamma", "update_membership",
]
