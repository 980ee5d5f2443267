#!/usr/bin/env python3
"""
Command-line interface for the cuckoo threshold experiments.

Subcommands:
    threshold     analytic c_k*, xi*, lambda_2 for a range of k
    core          2-core of a hypergraph read from a text file
    sweep         offline success rate over a grid of loads (trial CSV + summary CSV)
    estimate      empirical threshold by bisection
    core-stats    empirical core size vs. the asymptotic prediction
    dupe-check    duplicate edge pairs in the multigraph model
    oracle-check  matching vs. brute-force Hall violations on small graphs
    analysis      tabulate threshold, lambda2, corefrac, I, f or h
    table         fill a cuckoo table online (random walk) or offline (matching)

Data goes to stdout or --out; progress goes to stderr.
Exit codes: 0 success, 1 invariant violation or counterexample, 2 usage error.
"""

import argparse
import csv
import datetime
import sys

import numpy as np

from cuckoo_thresholds import analytic
from cuckoo_thresholds.cuckoo_table import CuckooTable, build_offline
from cuckoo_thresholds.experiments import (
    ANALYSIS_FUNCTIONS,
    THRESHOLD_TABLE_HEADER,
    analysis_rows,
    core_stats_experiment,
    duplicate_edge_experiment,
    estimate_threshold,
    items_for_load,
    oracle_check,
    sweep,
    threshold_rows,
)
from cuckoo_thresholds.hypergraph import core_hypergraph, peel_core, read_hypergraph, write_hypergraph
from cuckoo_thresholds.orientation import is_orientable
from cuckoo_thresholds.sim_utils import (
    ALL_MODELS,
    SWEEP_SUMMARY_HEADER,
    TRIAL_CSV_HEADER,
    default_max_steps,
    derive_seed,
    format_value,
    get_experiment_config,
    load_config,
    parse_float_list,
    parse_int_range,
)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2


# =============================================================================
# Output
# =============================================================================

def write_csv(header, rows, out, deterministic=False):
    """Write header and rows; rows hold raw values and go through format_value."""
    if not deterministic:
        stamp = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
        print(f"# generated {stamp}", file=out)
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(v) for v in row])


def output_csv(args, header, rows, label):
    """Write to --out if given (announcing it on stderr), else stdout."""
    if args.out:
        with open(args.out, "w", newline="") as f:
            write_csv(header, rows, f, args.deterministic)
        print(f"Writing {label} to {args.out}", file=sys.stderr)
    else:
        write_csv(header, rows, sys.stdout, args.deterministic)


def summary_path(out_path):
    """<out>_summary.csv next to the trial CSV."""
    summary = out_path.replace(".csv", "_summary.csv")
    if summary == out_path:
        summary = out_path + "_summary"
    return summary


# =============================================================================
# Subcommands
# =============================================================================

def cmd_threshold(args, config):
    rows = threshold_rows(parse_int_range(args.k))
    output_csv(args, THRESHOLD_TABLE_HEADER, rows, "thresholds")
    return EXIT_OK


def cmd_core(args, config):
    try:
        graph = read_hypergraph(args.input)
    except FileNotFoundError:
        sys.exit(f"Error: Hypergraph file not found: {args.input}")

    core = peel_core(graph)
    orientable = None if graph.multiset_edges else is_orientable(graph)
    header = ["n", "m", "k", "core_n2", "core_m2", "core_density", "orientable"]
    row = [graph.n, graph.m, graph.k, core.n2, core.m2, float(core.density), orientable]
    output_csv(args, header, [row], "core statistics")

    if args.core_out:
        write_hypergraph(core_hypergraph(graph, core), args.core_out)
        print(f"Core written to {args.core_out}", file=sys.stderr)
    return EXIT_OK


def cmd_sweep(args, config):
    result = sweep(
        args.k, args.n, args.c_min, args.c_max, args.step, args.trials,
        args.seed, model=args.model, workers=args.workers, verbose=True,
    )

    trial_rows = [record.csv_row(args.deterministic) for record in result.records]
    output_csv(args, TRIAL_CSV_HEADER, trial_rows, "trials")

    summary_rows = [
        [c, t, s, s / t, smoothed, density]
        for c, t, s, smoothed, density in zip(
            result.grid, result.trials, result.successes,
            result.smoothed_rates, result.mean_core_density,
        )
    ]
    if args.out:
        path = summary_path(args.out)
        with open(path, "w", newline="") as f:
            write_csv(SWEEP_SUMMARY_HEADER, summary_rows, f, args.deterministic)
        print(f"Sweep summary saved to {path}", file=sys.stderr)
    else:
        print("\nSweep summary:", file=sys.stderr)
        write_csv(SWEEP_SUMMARY_HEADER, summary_rows, sys.stderr, deterministic=True)

    midpoint = result.midpoint
    if midpoint is not None:
        print(f"Estimated transition midpoint: c = {midpoint:.5f}", file=sys.stderr)
    return EXIT_OK


def cmd_estimate(args, config):
    print(f"Estimating threshold: k={args.k}, n={args.n}, {args.trials} trials per midpoint...",
          file=sys.stderr)
    estimate = estimate_threshold(
        args.k, args.n, args.trials, args.tolerance, args.seed,
        model=args.model, workers=args.workers, verbose=True,
    )
    c_star = analytic.threshold_c_star(args.k).c_star
    header = ["k", "n", "trials", "tolerance", "estimate", "c_star", "deviation"]
    row = [args.k, args.n, args.trials, float(args.tolerance), estimate, c_star, estimate - c_star]
    output_csv(args, header, [row], "threshold estimate")
    return EXIT_OK


def cmd_core_stats(args, config):
    summary = core_stats_experiment(args.k, args.n, args.c, args.trials, args.seed,
                                    model=args.model)
    header = [
        "k", "n", "c", "model", "trials",
        "mean_n2", "std_n2", "predicted_n2", "dev_n2",
        "mean_m2", "std_m2", "predicted_m2", "dev_m2",
        "min_core_density", "max_core_density",
    ]
    row = [
        summary.k, summary.n, float(summary.c), summary.model, summary.trials,
        summary.mean_n2, summary.std_n2, summary.predicted_n2, summary.dev_n2,
        summary.mean_m2, summary.std_m2, summary.predicted_m2, summary.dev_m2,
        float(min(summary.densities)), float(max(summary.densities)),
    ]
    output_csv(args, header, [row], "core statistics")
    return EXIT_OK


def cmd_dupe_check(args, config):
    summary = duplicate_edge_experiment(args.k, args.n, args.c, args.trials, args.seed, m=args.m)
    header = ["k", "n", "m", "trials", "mean_pairs", "bound", "passed"]
    row = [summary.k, summary.n, summary.m, len(summary.counts), summary.mean,
           float(summary.bound), summary.passed]
    output_csv(args, header, [row], "duplicate edge statistics")
    if not summary.passed:
        print(f"Error: mean duplicate pairs {summary.mean} exceeds twice the bound "
              f"{summary.bound}", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_oracle_check(args, config):
    print(f"Checking {args.trials} instances: k={args.k}, n <= {args.n_max}...", file=sys.stderr)
    report = oracle_check(args.k, args.n_max, args.trials, args.seed, verbose=True)
    header = ["k", "n_max", "checked", "passed"]
    output_csv(args, header, [[report.k, report.n_max, report.checked, report.passed]],
               "oracle report")
    if not report.passed:
        print(f"Counterexample after {report.checked} instances: {report.detail}", file=sys.stderr)
        print(report.counterexample, file=sys.stderr, end="")
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_analysis(args, config):
    header, rows = analysis_rows(
        args.func,
        parse_int_range(args.k),
        betas=parse_float_list(args.beta) if args.beta else (),
        qs=parse_float_list(args.q) if args.q else (),
        zs=parse_float_list(args.z) if args.z else (),
        cs=parse_float_list(args.c) if args.c else (),
        xi=args.xi,
    )
    output_csv(args, header, rows, f"{args.func} table")
    errors = sum(1 for row in rows if row[-1] is not None)
    if errors:
        print(f"{errors} row(s) outside the function's domain", file=sys.stderr)
    return EXIT_OK


def cmd_table(args, config):
    factor = config["table"]["max_steps_factor"]
    max_steps = args.max_steps if args.max_steps is not None else default_max_steps(args.n, factor)
    count = items_for_load(args.load, args.n)
    rng = np.random.default_rng(derive_seed(args.seed, 0))
    items = [int(x) for x in rng.integers(0, 2**64, size=count, dtype=np.uint64)]

    if args.offline:
        table, success = build_offline(args.n, args.k, args.seed, items, max_steps=max_steps)
    else:
        table = CuckooTable(capacity=args.n, k=args.k, seed=args.seed, max_steps=max_steps)
        for item in items:
            table.insert(item)
        success = table.stats["failures"] == 0

    header = ["n", "k", "load", "mode", "items", "inserted", "failures",
              "evictions", "load_factor", "success"]
    row = [
        args.n, args.k, float(args.load), "offline" if args.offline else "random-walk",
        count, table.stats["inserts"], table.stats["failures"], table.stats["evictions"],
        table.load_factor(), success,
    ]
    output_csv(args, header, [row], "table statistics")
    return EXIT_OK


# =============================================================================
# Main
# =============================================================================

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="Path to config YAML (default: built-in defaults)")
    common.add_argument("--seed", type=int, help="Master seed (default from config: 0)")
    common.add_argument("--trials", type=int, help="Trials per point (default from config: 20)")
    common.add_argument("--model", choices=ALL_MODELS,
                        help="Random k-graph model (default from config: simple)")
    common.add_argument("--workers", type=int, help="Worker processes (default from config: 1)")
    common.add_argument("--out", help="Output CSV file path (default: stdout)")
    common.add_argument("--deterministic", action="store_true",
                        help="Omit the timestamp line and write elapsed_ms as 0")

    parser = argparse.ArgumentParser(
        prog="cuckoo-thresholds",
        description="Load thresholds of k-ary cuckoo hashing: analytic values and simulations",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("threshold", parents=[common], help="Analytic thresholds c_k*")
    p.add_argument("--k", default="2..10", help="k range, e.g. 3..10 or 3,5 (default: 2..10)")
    p.set_defaults(handler=cmd_threshold)

    p = sub.add_parser("core", parents=[common], help="2-core of a hypergraph file")
    p.add_argument("--in", dest="input", required=True, help="Hypergraph text file")
    p.add_argument("--core-out", help="Write the core's edges to this file")
    p.set_defaults(handler=cmd_core)

    p = sub.add_parser("sweep", parents=[common], help="Success rate over a load grid")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--c-min", type=float, required=True)
    p.add_argument("--c-max", type=float, required=True)
    p.add_argument("--step", type=float, required=True)
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser("estimate", parents=[common], help="Empirical threshold by bisection")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--tolerance", type=float, default=0.002)
    p.set_defaults(handler=cmd_estimate)

    p = sub.add_parser("core-stats", parents=[common], help="Core size vs. prediction")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--c", type=float, required=True)
    p.set_defaults(handler=cmd_core_stats)

    p = sub.add_parser("dupe-check", parents=[common], help="Duplicate edges in the multigraph model")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--c", type=float, default=0.9)
    p.add_argument("--m", type=int, help="Edge count (default: floor(c n))")
    p.set_defaults(handler=cmd_dupe_check)

    p = sub.add_parser("oracle-check", parents=[common], help="Matching vs. brute-force oracle")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n-max", type=int, default=10)
    p.set_defaults(handler=cmd_oracle_check)

    p = sub.add_parser("analysis", parents=[common], help="Tabulate an analytic function")
    p.add_argument("func", choices=ANALYSIS_FUNCTIONS)
    p.add_argument("--k", default="3", help="k range (default: 3)")
    p.add_argument("--beta", help="Comma-separated beta values (f, h)")
    p.add_argument("--q", help="Comma-separated q values (f)")
    p.add_argument("--z", help="Comma-separated z values (I)")
    p.add_argument("--c", help="Comma-separated loads (corefrac)")
    p.add_argument("--xi", type=float, help="Poisson parameter (default: xi*(k))")
    p.set_defaults(handler=cmd_analysis)

    p = sub.add_parser("table", parents=[common], help="Fill a cuckoo hash table")
    p.add_argument("--n", type=int, required=True, help="Capacity (slots)")
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--load", type=float, required=True, help="Items per slot")
    p.add_argument("--max-steps", type=int, help="Random-walk budget (default: ceil(factor ln(n+1)))")
    p.add_argument("--offline", action="store_true", help="Build by matching instead of random walk")
    p.set_defaults(handler=cmd_table)

    return parser


def apply_config_defaults(args, config):
    """Fill flags left unset from the config's experiments section."""
    exp_conf = get_experiment_config(config)
    if args.seed is None:
        args.seed = exp_conf["master_seed"]
    if args.trials is None:
        args.trials = exp_conf["trials"]
    if args.model is None:
        args.model = exp_conf["model"]
    if args.workers is None:
        args.workers = exp_conf["workers"]
    return args


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    config = load_config(args.config)
    apply_config_defaults(args, config)

    if args.model not in ALL_MODELS:
        parser.error(f"unknown model {args.model!r} in config")
    if args.trials < 1:
        parser.error("--trials must be >= 1")

    try:
        return args.handler(args, config)
    except ValueError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
