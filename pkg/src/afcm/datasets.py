"""Dataset container, CSV ingestion, min-max scaling and toy generators.

Features are stored column-major, ``(n_features, n_samples)``, so that a
sample is a column ``features[:, i]``. Use :attr:`Dataset.X` for the usual
scikit-learn ``(n_samples, n_features)`` view.
"""

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class DatasetError(ValueError):
    """Raised when a dataset cannot be parsed or violates its invariants."""


@dataclass(frozen=True)
class Dataset:
    features: np.ndarray
    labels: np.ndarray | None = None
    name: str = "dataset"
    label_names: tuple = field(default=())

    def __post_init__(self):
        feats = np.array(self.features, dtype=float)
        if feats.ndim != 2 or feats.shape[0] < 1 or feats.shape[1] < 1:
            raise DatasetError(
                f"features must be a non-empty (d, n) matrix, got shape {feats.shape}")
        if not np.all(np.isfinite(feats)):
            raise DatasetError("features contain non-finite entries")
        feats.setflags(write=False)
        object.__setattr__(self, "features", feats)
        if self.labels is not None:
            labels = np.array(self.labels, dtype=np.int64).ravel()
            if labels.shape[0] != feats.shape[1]:
                raise DatasetError(
                    f"{labels.shape[0]} labels for {feats.shape[1]} samples")
            if labels.size and labels.min() < 0:
                raise DatasetError("label ids must be nonnegative")
            labels.setflags(write=False)
            object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "label_names", tuple(self.label_names))

    @property
    def n_samples(self) -> int:
        return self.features.shape[1]

    @property
    def n_features(self) -> int:
        return self.features.shape[0]

    @property
    def n_classes(self) -> int:
        return 0 if self.labels is None else len(np.unique(self.labels))

    @property
    def X(self) -> np.ndarray:
        """Samples as rows, ``(n_samples, n_features)``."""
        return self.features.T

    @classmethod
    def from_samples(cls, X, labels=None, name="dataset", label_names=()):
        """Build from a row-per-sample matrix."""
        return cls(np.asarray(X, dtype=float).T, labels, name, label_names)


def encode_labels(raw):
    """Map arbitrary label values to dense ids 0..c-1 by first appearance."""
    ids = {}
    out = np.empty(len(raw), dtype=np.int64)
    for i, value in enumerate(raw):
        out[i] = ids.setdefault(value, len(ids))
    return out, tuple(ids)


def _is_number(text):
    try:
        float(text)
    except ValueError:
        return False
    return True


def load_csv(path, label_column=None, name=None):
    """Read a comma-separated file with one sample per row.

    Parameters
    ----------
    path : str or Path
    label_column : int, str or None
        Column holding class labels, selected by zero-based index (negative
        indices count from the end) or by header name. Removed from the
        features and stored as dense integer labels.
    name : str, optional
        Dataset tag; defaults to the file stem.

    A header row is detected when any cell of the first row is not numeric.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        rows = [row for row in csv.reader(fh) if row and any(c.strip() for c in row)]
    if not rows:
        raise DatasetError(f"{path}: empty file")

    header = None
    first = [c.strip() for c in rows[0]]
    # label cells may be text, so a row is a header only where it is
    # non-numeric in a column that is numeric in the next row
    if len(rows) == 1:
        is_header = not any(_is_number(c) for c in first)
    else:
        is_header = any(not _is_number(c) and _is_number(d.strip())
                        for c, d in zip(first, rows[1]))
    if is_header:
        header = first
        rows = rows[1:]
    if not rows:
        raise DatasetError(f"{path}: no data rows")

    width = len(rows[0])
    for r, row in enumerate(rows):
        if len(row) != width:
            raise DatasetError(
                f"{path}: ragged row {r}: {len(row)} columns, expected {width}")

    label_idx = None
    if label_column is not None:
        if isinstance(label_column, str) and not label_column.lstrip("-").isdigit():
            if header is None or label_column not in header:
                raise DatasetError(f"{path}: no column named {label_column!r}")
            label_idx = header.index(label_column)
        else:
            label_idx = int(label_column)
            if not -width <= label_idx < width:
                raise DatasetError(f"{path}: label column {label_idx} out of range")
            label_idx %= width

    feature_cols = [j for j in range(width) if j != label_idx]
    if not feature_cols:
        raise DatasetError(f"{path}: no feature columns")
    offset = 1 if header is not None else 0
    data = np.empty((len(rows), len(feature_cols)))
    for r, row in enumerate(rows):
        for k, j in enumerate(feature_cols):
            try:
                value = float(row[j])
            except ValueError:
                raise DatasetError(
                    f"{path}: cannot parse {row[j]!r} at row {r + offset}, "
                    f"column {j}") from None
            if not np.isfinite(value):
                raise DatasetError(
                    f"{path}: non-finite value at row {r + offset}, column {j}")
            data[r, k] = value

    labels, label_names = None, ()
    if label_idx is not None:
        labels, label_names = encode_labels([row[label_idx].strip() for row in rows])
    return Dataset.from_samples(data, labels, name or path.stem, label_names)


def save_csv(data, path, header=True):
    """Write ``data`` row-per-sample, with labels (if any) as the last column."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        if header:
            cols = [f"x{j}" for j in range(data.n_features)]
            writer.writerow(cols + (["label"] if data.labels is not None else []))
        for i in range(data.n_samples):
            row = [repr(float(v)) for v in data.features[:, i]]
            if data.labels is not None:
                row.append(int(data.labels[i]))
            writer.writerow(row)
    return path


def minmax_normalize(data):
    """Rescale every feature row to [0, 1]; constant rows become zeros."""
    feats = data.features
    lo = feats.min(axis=1, keepdims=True)
    span = feats.max(axis=1, keepdims=True) - lo
    safe = np.where(span > 0, span, 1.0)
    scaled = np.where(span > 0, (feats - lo) / safe, 0.0)
    return Dataset(scaled, data.labels, data.name, data.label_names)


def load_iris():
    """The 150-sample, 4-feature, 3-class Iris data bundled with scikit-learn."""
    from sklearn.datasets import load_iris as _sk_iris

    bunch = _sk_iris()
    return Dataset.from_samples(bunch.data, bunch.target, "iris",
                                tuple(bunch.target_names))


def gen_two_spirals(samples_per_cluster=500, noise=0.0, seed=0):
    """Two interlocking Archimedean spirals, the second rotated by pi.

    Angles are drawn uniformly from [0.5 pi, 3.5 pi] and the radius grows
    linearly with the angle, so the arms sit ``pi`` apart radially.
    """
    if samples_per_cluster < 1:
        raise DatasetError("samples_per_cluster must be >= 1")
    if noise < 0:
        raise DatasetError("noise must be nonnegative")
    rng = np.random.default_rng(seed)
    m = int(samples_per_cluster)
    t = rng.uniform(0.5 * np.pi, 3.5 * np.pi, size=m)
    arm = np.vstack([t * np.cos(t), t * np.sin(t)])
    pts = np.hstack([arm, -arm])
    if noise > 0:
        pts = pts + rng.normal(scale=noise, size=pts.shape)
    labels = np.repeat([0, 1], m)
    return Dataset(pts, labels, "two_spirals")


def gen_three_rings(samples_per_cluster=300, radii=(1.0, 2.0, 3.0), noise=0.05, seed=0):
    """Three concentric rings with radial Gaussian jitter of std ``noise``."""
    if samples_per_cluster < 1:
        raise DatasetError("samples_per_cluster must be >= 1")
    radii = tuple(float(r) for r in radii)
    if len(radii) != 3 or radii[0] <= 0 or not (radii[0] < radii[1] < radii[2]):
        raise DatasetError(f"radii must be three strictly increasing positive values, got {radii}")
    if noise < 0:
        raise DatasetError("noise must be nonnegative")
    rng = np.random.default_rng(seed)
    m = int(samples_per_cluster)
    cols = []
    for r in radii:
        theta = rng.uniform(0.0, 2 * np.pi, size=m)
        rad = r + (rng.normal(scale=noise, size=m) if noise > 0 else 0.0)
        cols.append(np.vstack([rad * np.cos(theta), rad * np.sin(theta)]))
    return Dataset(np.hstack(cols), np.repeat([0, 1, 2], m), "three_rings")
