import itertools

import numpy as np


def random_simplex(rng, n, c, concentration=1.0):
    return rng.dirichlet(np.full(c, concentration), size=n)


def double_sum_sse(X, U):
    """sum_ij u_ij ||x_i - v_j||^2 with weighted-mean centers, by explicit loops."""
    d, n = X.shape
    c = U.shape[1]
    total = 0.0
    for j in range(c):
        v = sum(U[i, j] * X[:, i] for i in range(n)) / sum(U[i, j] for i in range(n))
        for i in range(n):
            diff = X[:, i] - v
            total += U[i, j] * float(diff @ diff)
    return total


def blobs(rng, per_cluster, centers, spread):
    pts = [rng.normal(loc=c, scale=spread, size=(per_cluster, len(c))) for c in centers]
    labels = np.repeat(np.arange(len(centers)), per_cluster)
    return np.vstack(pts).T, labels


def brute_force_accuracy(pred, truth):
    """Best matched fraction over every injective cluster-to-class relabeling."""
    p_ids = sorted(set(pred))
    t_ids = sorted(set(truth))
    counts = {}
    for p, t in zip(pred, truth):
        counts[p, t] = counts.get((p, t), 0) + 1
    best = 0
    if len(p_ids) <= len(t_ids):
        for perm in itertools.permutations(t_ids, len(p_ids)):
            best = max(best, sum(counts.get((p, t), 0) for p, t in zip(p_ids, perm)))
    else:
        for perm in itertools.permutations(p_ids, len(t_ids)):
            best = max(best, sum(counts.get((p, t), 0) for p, t in zip(perm, t_ids)))
    return best / len(pred)


def pair_counting_ari(pred, truth):
    """ARI from the four pair counts over all n(n-1)/2 sample pairs."""
    a = b = c = d = 0
    n = len(pred)
    for i, j in itertools.combinations(range(n), 2):
        same_p = pred[i] == pred[j]
        same_t = truth[i] == truth[j]
        if same_p and same_t:
            a += 1
        elif same_p:
            b += 1
        elif same_t:
            c += 1
        else:
            d += 1
    denom = (a + b) * (b + d) + (a + c) * (c + d)
    return 1.0 if denom == 0 else 2.0 * (a * d - b * c) / denom
