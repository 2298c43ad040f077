import numbers

import numpy as np
from sklearn.utils import check_array, check_random_state


def validate_samples(X, min_samples=1):
    """Finite float matrix with samples as rows."""
    return check_array(X, dtype=np.float64, ensure_min_samples=min_samples,
                       ensure_all_finite=True)


def check_n_clusters(n_clusters, n_samples):
    if not isinstance(n_clusters, numbers.Integral) or not 1 <= n_clusters <= n_samples:
        raise ValueError(
            f"n_clusters must be an integer in [1, {n_samples}], got {n_clusters!r}")
    return int(n_clusters)


def check_n_neighbors(n_neighbors, n_samples):
    if not isinstance(n_neighbors, numbers.Integral) or not 1 <= n_neighbors <= n_samples - 1:
        raise ValueError(
            f"n_neighbors must be an integer in [1, {n_samples - 1}], got {n_neighbors!r}")
    return int(n_neighbors)


def check_positive(value, name):
    if not isinstance(value, numbers.Real) or not value > 0:
        raise ValueError(f"{name} must be a positive number, got {value!r}")
    return float(value)


def resolve_seed(random_state):
    """Integer seed for the numpy Generator-based core.

    Integers pass through unchanged so results match the functional API.
    """
    if isinstance(random_state, numbers.Integral):
        return int(random_state)
    return int(check_random_state(random_state).randint(np.iinfo(np.int32).max))
