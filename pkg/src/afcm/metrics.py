"""External clustering scores: ACC (optimal matching), NMI and ARI."""

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.special import comb


def _check_pair(pred, truth):
    pred = np.asarray(pred).ravel()
    truth = np.asarray(truth).ravel()
    if pred.shape != truth.shape:
        raise ValueError(f"length mismatch: {pred.size} predicted vs {truth.size} true labels")
    if pred.size == 0:
        raise ValueError("empty labelings")
    return pred, truth


def contingency(pred, truth):
    """Counts table, rows = predicted clusters, columns = true classes."""
    pred, truth = _check_pair(pred, truth)
    _, p = np.unique(pred, return_inverse=True)
    _, t = np.unique(truth, return_inverse=True)
    table = np.zeros((p.max() + 1, t.max() + 1), dtype=np.int64)
    np.add.at(table, (p, t), 1)
    return table


def accuracy(pred, truth):
    """Fraction of samples matched under the best cluster-to-class map."""
    table = contingency(pred, truth)
    size = max(table.shape)
    padded = np.zeros((size, size), dtype=np.int64)
    padded[:table.shape[0], :table.shape[1]] = table
    rows, cols = linear_sum_assignment(padded, maximize=True)
    return padded[rows, cols].sum() / table.sum()


def _entropy(counts):
    p = counts[counts > 0] / counts.sum()
    return float(-np.sum(p * np.log(p)))


def nmi(pred, truth):
    """Mutual information over the arithmetic mean of the two entropies.

    Returns 1 for identical partitions and 0 when exactly one side has
    zero entropy.
    """
    table = contingency(pred, truth)
    n = table.sum()
    h_pred = _entropy(table.sum(axis=1))
    h_true = _entropy(table.sum(axis=0))
    if h_pred == 0 or h_true == 0:
        return 1.0 if h_pred == h_true else 0.0
    nz = table > 0
    pij = table[nz] / n
    outer = np.outer(table.sum(axis=1), table.sum(axis=0))[nz] / n ** 2
    mi = float(np.sum(pij * np.log(pij / outer)))
    return max(0.0, mi / (0.5 * (h_pred + h_true)))


def ari(pred, truth):
    """Adjusted Rand index from pair counts."""
    table = contingency(pred, truth)
    n = table.sum()
    sum_cells = comb(table, 2).sum()
    sum_rows = comb(table.sum(axis=1), 2).sum()
    sum_cols = comb(table.sum(axis=0), 2).sum()
    total = comb(n, 2)
    expected = sum_rows * sum_cols / total if total else 0.0
    max_index = 0.5 * (sum_rows + sum_cols)
    if max_index == expected:
        # both partitions trivial in the same way (all singletons or one cluster)
        return 1.0
    return float((sum_cells - expected) / (max_index - expected))


def score_all(pred, truth):
    return {"acc": float(accuracy(pred, truth)),
            "nmi": float(nmi(pred, truth)),
            "ari": float(ari(pred, truth))}
