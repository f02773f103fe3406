"""Command-line entry points: simulate | fit | eval."""

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from . import baselines, io, mixture, simulate as sim, tree
from .config import ConfigError, load_config_file, merge_config

USAGE_EXIT = 2
RUNTIME_EXIT = 1


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="cortree",
        description="Clustering of multi-sample count histograms with "
        "correlated dyadic-tree kernels.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="generate the two-group synthetic data")
    p_sim.add_argument("--n", type=int, default=200, help="number of samples")
    p_sim.add_argument("--bins", type=int, default=1000)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--group1-frac", type=float, default=0.6)
    p_sim.add_argument("--count-low", type=int, default=None)
    p_sim.add_argument("--count-high", type=int, default=None)
    p_sim.add_argument(
        "--low-count",
        action="store_true",
        help=f"use the low-count total range {sim.LOW_COUNT_RANGE}",
    )
    p_sim.add_argument("--out-counts", required=True, help="output counts CSV")
    p_sim.add_argument("--out-truth", required=True, help="output truth labels CSV")

    p_fit = sub.add_parser("fit", help="run the Gibbs sampler on a count matrix")
    p_fit.add_argument("--counts", required=True, help="input counts CSV")
    p_fit.add_argument("--out-dir", required=True)
    p_fit.add_argument("--config", default=None, help="key=value config file")
    p_fit.add_argument("--k", type=int, default=None, help="truncation level K")
    p_fit.add_argument("--depth", type=int, default=None)
    p_fit.add_argument("--cor-layers", type=int, default=None)
    p_fit.add_argument("--burn-in", type=int, default=None)
    p_fit.add_argument("--keep", type=int, default=None)
    p_fit.add_argument("--alpha0", type=float, default=None)
    p_fit.add_argument("--sigma2-mu", type=float, default=None)
    p_fit.add_argument("--seed", type=int, default=None)
    p_fit.add_argument("--threads", type=int, default=None)
    p_fit.add_argument(
        "--init",
        default=None,
        help="pam | kmeans | file:<labels.csv> | discretize:<scores.csv>",
    )
    p_fit.add_argument("--ind-tree", action="store_true", default=None)
    p_fit.add_argument("--trace-psi", action="store_true", default=None)
    p_fit.add_argument("--report-min-size", type=int, default=None)

    p_eval = sub.add_parser("eval", help="ARI between two label files")
    p_eval.add_argument("truth", help="reference labels CSV")
    p_eval.add_argument("predicted", help="predicted labels CSV")
    return parser


def _cmd_simulate(args):
    low, high = (args.count_low, args.count_high)
    if args.low_count:
        if low is not None or high is not None:
            raise ConfigError("--low-count conflicts with --count-low/--count-high")
        low, high = sim.LOW_COUNT_RANGE
    if low is None:
        low = 4_000
    if high is None:
        high = 10_000
    try:
        spec = sim.SimSpec(
            n=args.n,
            bins=args.bins,
            group1_frac=args.group1_frac,
            count_range=(low, high),
        ).validate()
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    rng = np.random.default_rng(args.seed)
    counts, truth = sim.simulate(spec, rng)
    io.write_counts(args.out_counts, counts)
    io.write_labels(args.out_truth, truth.labels)
    print(f"wrote {counts.shape[0]}x{counts.shape[1]} counts to {args.out_counts}")
    return 0


def initial_labels(init, counts, k, rng):
    """Resolve the init spec into a label vector.

    pam/kmeans run on the raw count rows. Rough initial partitions work
    better here than polished ones: normalizing first produces tight
    depth-based subclusters that the sampler is reluctant to merge.
    """
    features = counts.astype(float)
    if init == "pam":
        return baselines.pam(features, k, rng).labels
    if init == "kmeans":
        return baselines.kmeans(features, k, rng).labels
    if init.startswith("file:"):
        return io.read_labels(init[len("file:") :])
    if init.startswith("discretize:"):
        scores = io.read_float_matrix(init[len("discretize:") :]).ravel()
        return baselines.discretize_scores(scores, k).labels
    raise ConfigError(f"unknown init {init!r}")


def _cmd_fit(args):
    flag_overrides = {
        "n_clusters": args.k,
        "depth": args.depth,
        "cor_layers": args.cor_layers,
        "burn_in": args.burn_in,
        "n_keep": args.keep,
        "alpha0": args.alpha0,
        "sigma2_mu": args.sigma2_mu,
        "seed": args.seed,
        "threads": args.threads,
        "init": args.init,
        "ind_tree": args.ind_tree,
        "trace_psi": args.trace_psi,
        "report_min_size": args.report_min_size,
    }
    file_overrides = load_config_file(args.config) if args.config else None
    config = merge_config(file_overrides, flag_overrides).validate()

    counts = io.read_counts(args.counts)
    layout = tree.build_layout(counts.shape[1], config.depth)
    if config.cor_layers > layout.depth:
        raise ConfigError(
            f"correlated layers {config.cor_layers} exceed depth {layout.depth}"
        )
    rng = np.random.default_rng(config.seed)
    init = initial_labels(config.init, counts, config.n_clusters, rng)
    if init.size != counts.shape[0]:
        raise io.IoError(
            f"init labels length {init.size} != {counts.shape[0]} samples"
        )
    if init.min() < 0 or init.max() >= config.n_clusters:
        raise ConfigError("init labels outside [0, K)")

    started = time.perf_counter()
    result = mixture.fit(counts, init, config, rng, layout=layout)
    elapsed = time.perf_counter() - started

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    io.write_labels(out / "labels.csv", result.labels)
    io.write_float_matrix(out / "pi_trace.csv", result.trace.pi_trace, "pi")
    dens = mixture.posterior_mean_densities(result, layout)
    io.write_float_matrix(out / "cluster_means.csv", dens, "bin")
    if result.trace.psi_samples is not None:
        flat = result.trace.psi_samples.reshape(result.trace.psi_samples.shape[0], -1)
        io.write_float_matrix(out / "psi_trace.csv", flat, "psi")

    lines = [
        f"n_samples={counts.shape[0]}",
        f"n_bins={counts.shape[1]}",
        f"depth={layout.depth}",
        f"cor_layers={config.cor_layers}",
        f"K={config.n_clusters}",
        f"mode={'ind-tree' if config.ind_tree else 'cor-tree'}",
        f"seed={config.seed}",
        f"iterations={config.burn_in}+{config.n_keep}",
        f"occupied_clusters={len(result.occupied)}",
    ]
    for cid in result.occupied:
        lines.append(f"cluster_{cid}_size={result.sizes[cid]}")
    if result.small_clusters.size:
        flagged = ",".join(str(c) for c in result.small_clusters)
        lines.append(
            f"small_clusters_below_{config.report_min_size}={flagged}"
        )
    (out / "summary.txt").write_text("\n".join(lines) + "\n")
    print("\n".join(lines))
    print(f"wall_time_s={elapsed:.2f}")
    return 0


def _cmd_eval(args):
    truth = io.read_labels(args.truth)
    pred = io.read_labels(args.predicted)
    value = baselines.ari(truth, pred)
    rows, cols, table = baselines.contingency_table(truth, pred)
    print(f"ARI={value:.6f}")
    print("contingency (rows=truth, cols=predicted):")
    print("      " + " ".join(f"{c:>6d}" for c in cols))
    for r, row in zip(rows, table):
        print(f"{r:>5d} " + " ".join(f"{v:>6d}" for v in row))
    return 0


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command == "fit":
            return _cmd_fit(args)
        return _cmd_eval(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except (io.IoError, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return RUNTIME_EXIT


if __name__ == "__main__":
    sys.exit(main())
