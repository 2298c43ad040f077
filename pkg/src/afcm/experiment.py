"""Seeded repeated trials over parameter grids, with CSV/JSON/SVG exports."""

import csv
import itertools
import json
import logging
import os
import time
import typing
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import afcm as _afcm
from . import clustering as _cl
from .datasets import gen_three_rings, gen_two_spirals, load_csv, load_iris, minmax_normalize
from .graph import DegenerateClusterError
from .metrics import accuracy, score_all

log = logging.getLogger(__name__)

ALGORITHMS = ("afcm", "degenerate_afcm", "fcm_er", "kmeans", "spectral", "ablation1", "ablation2")
DEFAULT_K = (3, 4, 5, 6, 8, 10, 12)
DEFAULT_LAM = (1e-1, 1e1, 1e2, 1e3, 1e4, 1e5, 1e6)
DEFAULT_GAMMA = (1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3, 1e4)
OUTPUT_ENV = "AFCM_OUTPUT_DIR"
TOYS = {"two_spirals": gen_two_spirals, "spirals": gen_two_spirals,
        "three_rings": gen_three_rings, "rings": gen_three_rings}


def default_output_dir():
    return os.environ.get(OUTPUT_ENV, "afcm_results")


@dataclass
class ExperimentConfig:
    dataset: str = "iris"
    label_column: str | None = None
    algorithm: str = "afcm"
    n_clusters: int | None = None
    k_list: tuple = DEFAULT_K
    lam_list: tuple = DEFAULT_LAM
    gamma_list: tuple = DEFAULT_GAMMA
    sigma: float = 2.0
    repeats: int = 10
    seeds: tuple | None = None
    max_iter: int = 100
    tol: float = 1e-6
    normalize: bool = True
    output_dir: str = field(default_factory=default_output_dir)
    symmetrize: str = "max"
    embed_dim: int | None = None
    toy_samples: int | None = None
    toy_noise: float | None = None
    toy_seed: int = 0
    svg: bool = False
    scatter: bool = True

    def __post_init__(self):
        self.algorithm = self.algorithm.replace("-", "_")
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; choose from {ALGORITHMS}")
        for name in ("k_list", "lam_list", "gamma_list"):
            values = tuple(getattr(self, name))
            if not values:
                raise ValueError(f"{name} must not be empty")
            setattr(self, name, values)
        if self.repeats < 1:
            raise ValueError("repeats must be >= 1")
        if self.seeds is not None:
            self.seeds = tuple(int(s) for s in self.seeds)
            if not self.seeds:
                raise ValueError("seeds must not be empty")

    @property
    def seed_list(self):
        return self.seeds if self.seeds is not None else tuple(range(self.repeats))

    def echo(self):
        out = asdict(self)
        for key, value in out.items():
            if isinstance(value, tuple):
                out[key] = list(value)
        return out


_LIST_KEYS = {"k_list": int, "lam_list": float, "gamma_list": float, "seeds": int}
_BOOL_WORDS = {"1": True, "true": True, "yes": True, "on": True,
               "0": False, "false": False, "no": False, "off": False}


def coerce_config_value(key, text):
    """Parse a string into the type of ``ExperimentConfig.<key>``."""
    if key in _LIST_KEYS:
        conv = _LIST_KEYS[key]
        return tuple(conv(float(v)) for v in str(text).replace(";", ",").split(",") if v.strip())
    hints = typing.get_type_hints(ExperimentConfig)
    if key not in hints:
        raise KeyError(f"unknown config key {key!r}")
    kinds = typing.get_args(hints[key]) or (hints[key],)
    text = str(text).strip()
    if type(None) in kinds and text.lower() in ("", "none", "null"):
        return None
    if bool in kinds:
        try:
            return _BOOL_WORDS[text.lower()]
        except KeyError:
            raise ValueError(f"{key}: expected a boolean, got {text!r}") from None
    if int in kinds:
        return int(float(text))
    if float in kinds:
        return float(text)
    return text


def read_config_file(path):
    """Flat ``key = value`` file; ``#`` starts a comment."""
    values = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        values[key] = coerce_config_value(key, value)
    return values


def load_dataset(config):
    name = config.dataset
    key = name.lower().replace("-", "_")
    if key == "iris":
        data = load_iris()
    elif key in TOYS:
        kwargs = {"seed": config.toy_seed}
        if config.toy_samples is not None:
            kwargs["samples_per_cluster"] = config.toy_samples
        if config.toy_noise is not None:
            kwargs["noise"] = config.toy_noise
        data = TOYS[key](**kwargs)
    else:
        data = load_csv(name, config.label_column)
    return minmax_normalize(data) if config.normalize else data


@dataclass
class TrialReport:
    trial_id: str
    cell_id: str
    algorithm: str
    params: dict
    seed: int
    metrics: dict | None
    iterations: int | None = None
    gamma: float | None = None
    objective_trace: list = field(default_factory=list)
    gamma_trace: list = field(default_factory=list)
    acc_trace: list = field(default_factory=list)
    iter_times: list = field(default_factory=list)
    converged: bool | None = None
    wall_time: float = 0.0
    error: str | None = None
    labels: list | None = None
    config: dict | None = None

    def to_dict(self):
        return asdict(self)


def grid_cells(config, algorithm=None):
    """``(cell_id, params)`` for every grid point of ``algorithm``."""
    algo = algorithm or config.algorithm
    if algo == "afcm":
        combos = [{"k": k, "lam": lam} for k, lam in itertools.product(config.k_list, config.lam_list)]
    elif algo == "fcm_er":
        combos = [{"gamma": g} for g in config.gamma_list]
    elif algo in ("spectral", "ablation1", "ablation2"):
        combos = [{"k": k} for k in config.k_list]
    else:
        combos = [{}]
    return [(cell_name(algo, p), p) for p in combos]


def cell_name(algorithm, params):
    parts = [algorithm]
    for key in ("k", "lam", "gamma"):
        if key in params:
            parts.append(f"{key}{params[key]:g}")
    return "_".join(parts)


class _LaplacianCache:
    def __init__(self, data, sigma, symmetrize):
        self.data, self.sigma, self.symmetrize = data, sigma, symmetrize
        self._store = {}

    def get(self, k):
        if k not in self._store:
            self._store[k] = _afcm.build_laplacian(self.data, k, self.sigma, self.symmetrize)
        return self._store[k]


def run_trial(data, config, algorithm, params, seed, cache=None):
    """One seeded fit; degenerate clusters are recorded, not raised."""
    c = config.n_clusters or data.n_classes
    if c < 1:
        raise ValueError("n_clusters must be given for unlabeled data")
    cache = cache or _LaplacianCache(data, config.sigma, config.symmetrize)
    cell = cell_name(algorithm, params)
    trial = TrialReport(f"{cell}_s{seed}", cell, algorithm, dict(params), int(seed), None,
                        config=config.echo())
    start = time.perf_counter()
    report = None
    try:
        if algorithm == "afcm":
            cfg = _afcm.AfcmConfig(c=c, lam=params["lam"], k=params["k"], sigma=config.sigma,
                                   max_iter=config.max_iter, tol=config.tol, seed=seed,
                                   dim=config.embed_dim, symmetrize=config.symmetrize)
            report = _afcm.fit_afcm(data, cfg, laplacian=cache.get(params["k"]), record_labels=True)
        elif algorithm == "degenerate_afcm":
            report = _cl.fit_degenerate_afcm(data, c, seed=seed, max_iter=config.max_iter,
                                             tol=config.tol, record_labels=True)
        elif algorithm == "fcm_er":
            report = _cl.fit_fcm_er(data, c, params["gamma"], seed=seed,
                                    max_iter=config.max_iter, tol=config.tol, record_labels=True)
        elif algorithm == "kmeans":
            labels = _cl.kmeans(data, c, seed=seed, max_iter=max(config.max_iter, 300))[0]
        elif algorithm == "spectral":
            labels = _afcm.spectral_clustering(data, c, params["k"], seed=seed,
                                               laplacian=cache.get(params["k"]))
        elif algorithm == "ablation1":
            labels = _afcm.ablation1(data, c, params["k"], seed=seed, laplacian=cache.get(params["k"]))
        elif algorithm == "ablation2":
            labels = _afcm.ablation2(data, c, params["k"], seed=seed, laplacian=cache.get(params["k"]),
                                     max_iter=config.max_iter, tol=config.tol)
        else:
            raise ValueError(f"unknown algorithm {algorithm!r}")
    except DegenerateClusterError as exc:
        trial.error = f"degenerate cluster: {exc}"
        trial.wall_time = time.perf_counter() - start
        log.warning("%s failed: %s", trial.trial_id, exc)
        return trial
    trial.wall_time = time.perf_counter() - start

    if report is not None:
        labels = report.labels
        trial.iterations = report.iterations
        trial.gamma = float(report.gamma)
        trial.objective_trace = [float(v) for v in report.objective_trace]
        trial.gamma_trace = [float(v) for v in report.gamma_trace]
        trial.iter_times = [float(v) for v in report.iter_times]
        trial.converged = report.converged
        if data.labels is not None:
            trial.acc_trace = [100.0 * float(accuracy(lab, data.labels)) for lab in report.label_trace]
    trial.labels = [int(v) for v in labels]
    if data.labels is not None:
        trial.metrics = {key: 100.0 * val for key, val in score_all(labels, data.labels).items()}
    return trial


def summarize(trials):
    """One row per cell: mean and population std of each metric."""
    rows = {}
    for t in trials:
        rows.setdefault(t.cell_id, {"algorithm": t.algorithm, "params": t.params, "trials": []})
        rows[t.cell_id]["trials"].append(t)
    summary = []
    for cell_id, info in rows.items():
        ok = [t for t in info["trials"] if t.error is None and t.metrics is not None]
        row = {"cell_id": cell_id, "algorithm": info["algorithm"],
               "k": info["params"].get("k", ""), "lam": info["params"].get("lam", ""),
               "gamma": info["params"].get("gamma", ""),
               "n_trials": len(info["trials"]), "n_failed": len(info["trials"]) - len(ok)}
        for metric in ("acc", "nmi", "ari"):
            vals = np.array([t.metrics[metric] for t in ok])
            row[f"{metric}_mean"] = float(vals.mean()) if vals.size else float("nan")
            row[f"{metric}_std_pop"] = float(vals.std()) if vals.size else float("nan")
        summary.append(row)
    return summary


def best_cell(summary, algorithm=None):
    """Highest mean ACC; ties to higher NMI, then smaller lam, then smaller k."""
    rows = [r for r in summary if (algorithm is None or r["algorithm"] == algorithm)
            and not np.isnan(r["acc_mean"])]
    if not rows:
        return None

    def key(r):
        lam = r["lam"] if r["lam"] != "" else 0.0
        k = r["k"] if r["k"] != "" else 0
        return (-r["acc_mean"], -r["nmi_mean"], lam, k)
    return min(rows, key=key)


def _run_cells(data, config, algorithms):
    cache = _LaplacianCache(data, config.sigma, config.symmetrize)
    trials = []
    for algo in algorithms:
        for cell_id, params in grid_cells(config, algo):
            for seed in config.seed_list:
                trials.append(run_trial(data, config, algo, params, seed, cache))
            log.info("finished cell %s", cell_id)
    return trials


def run_experiment(config, data=None, write=True):
    """Run every grid cell of ``config.algorithm`` for every seed.

    Returns ``(summary_rows, trials, best_row)``; writes artifacts under
    ``config.output_dir`` unless ``write`` is false.
    """
    data = data if data is not None else load_dataset(config)
    trials = _run_cells(data, config, [config.algorithm])
    summary = summarize(trials)
    best = best_cell(summary)
    if write:
        emit_outputs(trials, summary, config, data)
    return summary, trials, best


def run_ablation(config, data=None, write=True):
    """The two-stage pipelines (ablation1, ablation2) and AFCM side by side on shared seeds.

    Each method reports its best cell over its own grid. Returns
    ``(table_rows, summary_rows, trials)``.
    """
    data = data if data is not None else load_dataset(config)
    methods = ("ablation1", "ablation2", "afcm")
    trials = _run_cells(data, config, methods)
    summary = summarize(trials)
    table = [best_cell(summary, m) for m in methods]
    if write:
        emit_outputs(trials, summary, config, data)
        write_summary_csv([r for r in table if r is not None],
                          Path(config.output_dir) / "ablation.csv")
    return table, summary, trials


SUMMARY_COLUMNS = ("cell_id", "algorithm", "k", "lam", "gamma", "n_trials", "n_failed",
                   "acc_mean", "acc_std_pop", "nmi_mean", "nmi_std_pop", "ari_mean", "ari_std_pop")


def write_summary_csv(summary, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SUMMARY_COLUMNS)
        for row in summary:
            writer.writerow([_fmt(row[c]) for c in SUMMARY_COLUMNS])
    return path


def _fmt(value):
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def emit_outputs(trials, summary, config, data, svg=None):
    """Write summary, per-trial JSON, traces, scatter exports and optional SVG."""
    if not trials:
        raise ValueError("no trial reports to write")
    out = Path(config.output_dir)
    (out / "trials").mkdir(parents=True, exist_ok=True)
    write_summary_csv(summary, out / "summary.csv")
    svg = config.svg if svg is None else svg
    two_d = data.n_features == 2
    for t in trials:
        (out / "trials" / f"{t.trial_id}.json").write_text(json.dumps(t.to_dict(), indent=1))
        if t.objective_trace:
            with (out / f"trace_{t.trial_id}.csv").open("w", newline="") as fh:
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow(["iteration", "objective", "acc"])
                for i, obj in enumerate(t.objective_trace):
                    acc = t.acc_trace[i] if i < len(t.acc_trace) else ""
                    writer.writerow([i + 1, repr(obj), _fmt(acc)])
            if svg:
                write_curve_svg(t.objective_trace, out / f"trace_{t.trial_id}.svg",
                                title=f"objective, {t.trial_id}")
        if two_d and t.labels is not None and config.scatter:
            write_scatter_csv(data, t.labels, out / f"scatter_{t.trial_id}.csv")
            if svg:
                write_scatter_svg(data.features, t.labels, out / f"scatter_{t.trial_id}.svg",
                                  title=t.trial_id)
    return out


def write_scatter_csv(data, labels, path):
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["x", "y", "predicted", "true"])
        for i in range(data.n_samples):
            truth = "" if data.labels is None else int(data.labels[i])
            writer.writerow([repr(float(data.features[0, i])), repr(float(data.features[1, i])),
                             int(labels[i]), truth])
    return path


_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
            "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")


def _svg_frame(width, height, title, body):
    return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
            f'viewBox="0 0 {width} {height}">\n<rect width="100%" height="100%" fill="white"/>\n'
            f'<text x="{width / 2}" y="16" text-anchor="middle" font-size="12" '
            f'font-family="sans-serif">{title}</text>\n{body}</svg>\n')


def _scale(values, lo_px, hi_px):
    values = np.asarray(values, float)
    lo, hi = values.min(), values.max()
    span = hi - lo if hi > lo else 1.0
    return lo_px + (values - lo) / span * (hi_px - lo_px)


def write_scatter_svg(points, labels, path, title="", size=400):
    """Points coloured by label; best-effort, no plotting dependency."""
    pts = np.asarray(points, float)
    xs = _scale(pts[0], 20, size - 20)
    ys = _scale(pts[1], size - 20, 30)
    dots = "".join(
        f'<circle cx="{x:.1f}" cy="{y:.1f}" r="1.8" fill="{_PALETTE[int(l) % len(_PALETTE)]}"/>\n'
        for x, y, l in zip(xs, ys, labels))
    Path(path).write_text(_svg_frame(size, size, title, dots))
    return path


def write_curve_svg(values, path, title="", width=480, height=300):
    vals = np.asarray(values, float)
    xs = _scale(np.arange(len(vals)), 40, width - 20)
    ys = _scale(vals, height - 30, 30) if len(vals) > 1 else np.full(1, height / 2)
    pts = " ".join(f"{x:.1f},{y:.1f}" for x, y in zip(xs, ys))
    body = (f'<polyline fill="none" stroke="#1f77b4" stroke-width="1.5" points="{pts}"/>\n'
            f'<text x="40" y="{height - 8}" font-size="10" font-family="sans-serif">'
            f'iterations: {len(vals)}, final: {vals[-1]:.6g}</text>\n')
    Path(path).write_text(_svg_frame(width, height, title, body))
    return path
