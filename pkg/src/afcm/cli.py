"""Command-line entry point: ``afcm <subcommand> [options]``.

Subcommands: fit, grid, ablation, gen-toy, verify-equivalence, metrics.
Options may come from a flat ``key = value`` file given with ``--config``;
flags on the command line override the file.
"""

import argparse
import csv
import logging
import sys
from dataclasses import fields
from pathlib import Path

import numpy as np

from . import experiment as ex
from .datasets import gen_three_rings, gen_two_spirals, save_csv
from .ggmm import verify_equivalence
from .graph import knn_affinity, normalized_laplacian
from .metrics import score_all


def _csv_list(conv):
    def parse(text):
        return tuple(conv(float(v)) for v in text.replace(";", ",").split(",") if v.strip())
    return parse


def _add_experiment_args(p, single=False):
    p.add_argument("--config", help="flat key = value config file")
    p.add_argument("--data", dest="dataset", help="CSV path, or iris / two_spirals / three_rings")
    p.add_argument("--label-column", help="label column name or index in the CSV")
    p.add_argument("--algorithm", choices=[a.replace("_", "-") for a in ex.ALGORITHMS]
                   + list(ex.ALGORITHMS))
    p.add_argument("--clusters", dest="n_clusters", type=int)
    if single:
        p.add_argument("--k", dest="k_list", type=lambda s: (int(s),))
        p.add_argument("--lam", dest="lam_list", type=lambda s: (float(s),))
        p.add_argument("--gamma", dest="gamma_list", type=lambda s: (float(s),))
    else:
        p.add_argument("--k-list", type=_csv_list(int))
        p.add_argument("--lam-list", type=_csv_list(float))
        p.add_argument("--gamma-list", type=_csv_list(float))
    p.add_argument("--sigma", type=float)
    p.add_argument("--repeats", type=int)
    p.add_argument("--seeds", type=_csv_list(int))
    p.add_argument("--max-iter", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--normalize", action=argparse.BooleanOptionalAction, default=None)
    p.add_argument("--out", dest="output_dir",
                   help=f"output directory (default ${ex.OUTPUT_ENV} or ./afcm_results)")
    p.add_argument("--symmetrize", choices=["max", "mean"])
    p.add_argument("--embed-dim", type=int)
    p.add_argument("--toy-samples", type=int)
    p.add_argument("--toy-noise", type=float)
    p.add_argument("--toy-seed", type=int)
    p.add_argument("--svg", action=argparse.BooleanOptionalAction, default=None)


def build_config(args, **overrides):
    values = ex.read_config_file(args.config) if args.config else {}
    names = {f.name for f in fields(ex.ExperimentConfig)}
    for name in names:
        value = getattr(args, name, None)
        if value is not None:
            values[name] = value
    values.update(overrides)
    return ex.ExperimentConfig(**values)


def _print_summary(summary, best, stream=None):
    stream = stream or sys.stdout
    stream.write("cell, n, ACC mean(std), NMI mean(std), ARI mean(std)  [x100, population std]\n")
    for row in summary:
        stream.write(f"{row['cell_id']}, {row['n_trials'] - row['n_failed']}/{row['n_trials']}, "
                     f"{row['acc_mean']:.2f}({row['acc_std_pop']:.2f}), "
                     f"{row['nmi_mean']:.2f}({row['nmi_std_pop']:.2f}), "
                     f"{row['ari_mean']:.2f}({row['ari_std_pop']:.2f})\n")
    if best is not None:
        stream.write(f"best: {best['cell_id']} ACC {best['acc_mean']:.2f}\n")


def cmd_fit(args):
    config = build_config(args)
    data = ex.load_dataset(config)
    summary, trials, best = ex.run_experiment(config, data=data)
    if args.dump_graph and config.algorithm in ("afcm", "spectral", "ablation1", "ablation2"):
        out = Path(config.output_dir)
        for k in config.k_list:
            graph = knn_affinity(data, k, config.sigma, config.symmetrize)
            np.savetxt(out / f"affinity_k{k}.csv", graph.weights, delimiter=",")
            np.savetxt(out / f"laplacian_k{k}.csv", normalized_laplacian(graph).matrix, delimiter=",")
    _print_summary(summary, best)
    return 0


def cmd_grid(args):
    config = build_config(args)
    summary, _, best = ex.run_experiment(config)
    _print_summary(summary, best)
    return 0


def cmd_ablation(args):
    config = build_config(args)
    table, _, _ = ex.run_ablation(config)
    _print_summary([r for r in table if r is not None], None)
    return 0


def cmd_gen_toy(args):
    if args.kind in ("spirals", "two_spirals", "two-spirals"):
        data = gen_two_spirals(args.samples or 500, args.noise or 0.0, args.seed)
    else:
        data = gen_three_rings(args.samples or 300, tuple(args.radii),
                               0.05 if args.noise is None else args.noise, args.seed)
    path = save_csv(data, args.out)
    print(f"wrote {data.n_samples} samples to {path}")
    return 0


def cmd_verify(args):
    worst = verify_equivalence(args.instances, args.seed)
    print(f"max elementwise discrepancy over {args.instances} instances: {worst:.3e}")
    return 0 if worst <= args.threshold else 1


def _read_labels(path, column):
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if rows and not rows[0][column].strip().lstrip("-").isdigit():
        rows = rows[1:]
    return [r[column].strip() for r in rows]


def cmd_metrics(args):
    pred = _read_labels(args.pred, args.pred_column)
    truth = _read_labels(args.truth, args.truth_column)
    scores = score_all(pred, truth)
    for key in ("acc", "nmi", "ari"):
        print(f"{key.upper()}: {100 * scores[key]:.2f}")
    return 0


def make_parser():
    parser = argparse.ArgumentParser(prog="afcm", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="run one parameter setting over the configured seeds")
    _add_experiment_args(p, single=True)
    p.add_argument("--dump-graph", action="store_true",
                   help="also write the affinity and normalized Laplacian as dense CSV")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("grid", help="grid search with repeated seeded trials")
    _add_experiment_args(p)
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("ablation", help="two-stage pipelines against AFCM")
    _add_experiment_args(p)
    p.set_defaults(func=cmd_ablation)

    p = sub.add_parser("gen-toy", help="write a synthetic toy dataset as CSV")
    p.add_argument("kind", choices=["spirals", "two_spirals", "rings", "three_rings"])
    p.add_argument("--samples", type=int, help="samples per cluster")
    p.add_argument("--noise", type=float)
    p.add_argument("--radii", type=float, nargs=3, default=(1.0, 2.0, 3.0))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_toy)

    p = sub.add_parser("verify-equivalence",
                       help="compare mixture posteriors with closed-form memberships")
    p.add_argument("--instances", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threshold", type=float, default=1e-10)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("metrics", help="ACC / NMI / ARI between two label files")
    p.add_argument("--pred", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--pred-column", type=int, default=-1)
    p.add_argument("--truth-column", type=int, default=-1)
    p.set_defaults(func=cmd_metrics)
    return parser


def main(argv=None):
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
