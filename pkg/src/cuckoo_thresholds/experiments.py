#!/usr/bin/env python3
"""
Monte Carlo experiments around the cuckoo load threshold.

Each trial generates a random k-graph with floor(c n) edges, peels its
2-core and runs a maximum matching. The drivers on top of run_trial:
- sweep():                  success rate over a grid of loads
- estimate_threshold():     bisection on c toward 50% success
- core_stats_experiment():  empirical core size vs. the asymptotic prediction
- duplicate_edge_experiment(): repeated edges in the multigraph model
- oracle_check():           matching vs. brute-force Hall violations
- analysis_rows():          tabulation of the analytic functions

Trial seeds derive from (master_seed, trial index), so results do not depend
on the number of worker processes.
"""

import io
import math
import multiprocessing
import sys
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import isotonic_regression
from scipy.stats import binomtest

from cuckoo_thresholds import analytic
from cuckoo_thresholds.hypergraph import (
    duplicate_edge_pairs,
    edge_probability,
    gen_binomial,
    gen_multigraph,
    gen_poisson_cloning,
    gen_simple,
    peel_core,
    write_hypergraph,
)
from cuckoo_thresholds.orientation import brute_force_dense_subset, is_orientable, max_matching
from cuckoo_thresholds.sim_utils import (
    MATCHABLE_MODELS,
    MODEL_BINOMIAL,
    MODEL_CLONING,
    MODEL_MULTIGRAPH,
    MODEL_SIMPLE,
    derive_seed,
    make_c_grid,
)

# Largest vertex count for which oracle_check enumerates every subset
ORACLE_MAX_VERTICES = 14

ANALYSIS_FUNCTIONS = ("threshold", "lambda2", "corefrac", "I", "f", "h")

ANALYSIS_HEADERS = {
    "threshold": ["k", "xi_star", "c_star", "residual", "error"],
    "lambda2": ["k", "x_min", "lambda2", "error"],
    "corefrac": ["k", "c", "x_bar", "n2_fraction", "m2_fraction", "error"],
    "I": ["k", "z", "xi", "t_z", "I", "error"],
    "f": ["k", "beta", "q", "xi", "f", "error"],
    "h": ["k", "beta", "xi", "h", "error"],
}

THRESHOLD_TABLE_HEADER = ["k", "xi_star", "c_star", "residual", "lambda2", "one_minus_exp_neg_k"]


# =============================================================================
# Domain Types
# =============================================================================

@dataclass
class TrialRecord:
    """One offline-assignment trial; m is the number of generated items."""
    k: int
    n: int
    c: float
    seed: int
    model: str
    orientable: bool
    matching_size: int
    core_n2: int
    core_m2: int
    elapsed_ms: float
    m: int = 0

    @property
    def core_density(self):
        return self.core_m2 / self.core_n2 if self.core_n2 else 0.0

    def csv_row(self, deterministic=False):
        """Values in TRIAL_CSV_HEADER order; elapsed_ms is 0 when deterministic."""
        elapsed = 0.0 if deterministic else self.elapsed_ms
        return [
            self.k, self.n, float(self.c), self.seed, self.model, bool(self.orientable),
            self.matching_size, self.core_n2, self.core_m2, float(elapsed),
        ]


@dataclass
class SweepResult:
    """
    Per-load success counts of a sweep.

    success rates are noisy; smoothed_rates is their weighted isotonic
    (non-increasing) fit, and midpoint / transition_window read off it.
    """
    k: int
    n: int
    model: str
    grid: list
    trials: list
    successes: list
    mean_core_density: list
    records: list = field(default_factory=list)

    @property
    def success_rates(self):
        return [s / t if t else 0.0 for s, t in zip(self.successes, self.trials)]

    @property
    def smoothed_rates(self):
        if not self.grid:
            return []
        fit = isotonic_regression(
            np.asarray(self.success_rates, dtype=float),
            weights=np.asarray(self.trials, dtype=float),
            increasing=False,
        )
        return [float(v) for v in fit.x]

    def crossing(self, level):
        """
        Load at which the smoothed success rate falls through `level`,
        by linear interpolation between grid points; None if it never does.
        """
        rates = self.smoothed_rates
        if not rates or rates[0] < level or rates[-1] >= level:
            return None
        for i in range(1, len(rates)):
            if rates[i] < level:
                c0, c1 = self.grid[i - 1], self.grid[i]
                r0, r1 = rates[i - 1], rates[i]
                return c0 + (r0 - level) / (r0 - r1) * (c1 - c0)
        return None

    @property
    def midpoint(self):
        """Estimated transition midpoint (smoothed success rate 1/2)."""
        return self.crossing(0.5)

    def transition_window(self, high=0.9, low=0.1):
        """Width of the load interval over which success drops from `high` to `low`."""
        c_high = self.crossing(high)
        c_low = self.crossing(low)
        if c_high is None or c_low is None:
            return None
        return c_low - c_high


@dataclass
class CoreStatsSummary:
    """Empirical core fractions across trials next to the asymptotic prediction."""
    k: int
    n: int
    c: float
    model: str
    n2_fractions: list
    m2_fractions: list
    densities: list
    predicted_n2: float
    predicted_m2: float

    @property
    def trials(self):
        return len(self.n2_fractions)

    @property
    def mean_n2(self):
        return float(np.mean(self.n2_fractions))

    @property
    def mean_m2(self):
        return float(np.mean(self.m2_fractions))

    @property
    def std_n2(self):
        return float(np.std(self.n2_fractions, ddof=1)) if self.trials > 1 else 0.0

    @property
    def std_m2(self):
        return float(np.std(self.m2_fractions, ddof=1)) if self.trials > 1 else 0.0

    @property
    def dev_n2(self):
        return abs(self.mean_n2 - self.predicted_n2)

    @property
    def dev_m2(self):
        return abs(self.mean_m2 - self.predicted_m2)


@dataclass
class DuplicateSummary:
    """Duplicate edge pairs in the multigraph model vs. the m^2 / C(n,k) bound."""
    k: int
    n: int
    m: int
    counts: list
    bound: float

    @property
    def mean(self):
        return float(np.mean(self.counts)) if self.counts else 0.0

    @property
    def passed(self):
        return self.mean <= 2.0 * self.bound


@dataclass
class OracleReport:
    """Outcome of oracle_check; counterexample is the instance in text format."""
    k: int
    n_max: int
    checked: int
    passed: bool
    counterexample: str = None
    detail: str = ""


# =============================================================================
# Trials
# =============================================================================

def items_for_load(c, n):
    """floor(c n), robust to representation error in c (0.29 * 100 -> 29)."""
    return int(math.floor(round(c * n, 9)))


def generate(model, n, c, k, seed):
    """Random k-graph of the given model at load c (for cloning: lambda = c k)."""
    if model == MODEL_MULTIGRAPH:
        return gen_multigraph(n, items_for_load(c, n), k, seed)
    if model == MODEL_SIMPLE:
        return gen_simple(n, items_for_load(c, n), k, seed)
    if model == MODEL_BINOMIAL:
        return gen_binomial(n, edge_probability(n, c, k), k, seed)
    if model == MODEL_CLONING:
        graph, _ = gen_poisson_cloning(n, c * k, k, seed)
        return graph
    raise ValueError(f"Unknown model {model!r}")


def run_trial(k, n, c, seed, model=MODEL_SIMPLE):
    """
    One offline trial: generate, peel the core, match.

    Args:
        k: Choices per item
        n: Table size (vertices)
        c: Load; the graph gets floor(c n) edges (binomial: p = ck / C(n-1, k-1))
        seed: Trial seed
        model: multigraph, simple or binomial

    Returns:
        TrialRecord

    Raises:
        ValueError for a cloning model, n < k, or a simple graph asked for more
        edges than C(n, k).
    """
    if model not in MATCHABLE_MODELS:
        raise ValueError(
            f"run_trial: model must be one of {', '.join(MATCHABLE_MODELS)}, got {model!r}"
        )
    if n < k:
        raise ValueError(f"run_trial: n ({n}) must be at least k ({k})")
    if model == MODEL_SIMPLE and items_for_load(c, n) > math.comb(n, k):
        raise ValueError(
            f"run_trial: load {c} needs {items_for_load(c, n)} distinct edges, "
            f"but only C({n},{k}) = {math.comb(n, k)} exist"
        )

    start = time.perf_counter()
    graph = generate(model, n, c, k, seed)
    core = peel_core(graph)
    matching_size, _ = max_matching(graph)
    elapsed_ms = (time.perf_counter() - start) * 1000.0

    return TrialRecord(
        k=k, n=n, c=c, seed=int(seed), model=model,
        orientable=matching_size == graph.m,
        matching_size=matching_size,
        core_n2=core.n2, core_m2=core.m2,
        elapsed_ms=elapsed_ms, m=graph.m,
    )


def _trial_task(task):
    k, n, c, seed, model = task
    return run_trial(k, n, c, seed, model)


def run_trials(tasks, workers=1):
    """
    Run (k, n, c, seed, model) tasks, in order.

    With workers > 1 a process pool evaluates them; imap keeps the results
    in task order.
    """
    tasks = list(tasks)
    if workers <= 1 or len(tasks) < 2:
        return [_trial_task(task) for task in tasks]
    chunksize = max(1, len(tasks) // (4 * workers))
    with multiprocessing.Pool(workers) as pool:
        return list(pool.imap(_trial_task, tasks, chunksize=chunksize))


# =============================================================================
# Sweep
# =============================================================================

def init_summary_stats():
    """Initialize the per-load counters of a sweep."""
    return {
        "trials": 0,
        "successes": 0,
        "sum_core_density": 0.0,
    }


def update_summary_stats(record, stats):
    """Update the counters of record.c with one trial."""
    s = stats[record.c]
    s["trials"] += 1
    if record.orientable:
        s["successes"] += 1
    s["sum_core_density"] += record.core_density


def calculate_summary(s):
    """Final per-load rates."""
    s["success_rate"] = s["successes"] / s["trials"] if s["trials"] > 0 else None
    s["mean_core_density"] = s["sum_core_density"] / s["trials"] if s["trials"] > 0 else None


def sweep(k, n, c_min, c_max, step, trials_per_c, master_seed, model=MODEL_SIMPLE,
          workers=1, verbose=False):
    """
    Success rate of offline assignment over the loads c_min, c_min + step, ..., c_max.

    Trial t at grid point i uses derive_seed(master_seed, i * trials_per_c + t).

    Returns:
        SweepResult holding every TrialRecord in grid order.
    """
    if trials_per_c < 1:
        raise ValueError(f"sweep: trials_per_c must be >= 1, got {trials_per_c}")
    grid = make_c_grid(c_min, c_max, step)
    tasks = [
        (k, n, c, derive_seed(master_seed, i * trials_per_c + t), model)
        for i, c in enumerate(grid)
        for t in range(trials_per_c)
    ]
    if verbose:
        print(f"Running sweep: k={k}, n={n}, {len(grid)} loads x {trials_per_c} trials "
              f"({model}, {workers} worker(s))...", file=sys.stderr)

    records = run_trials(tasks, workers)

    stats = {c: init_summary_stats() for c in grid}
    for record in records:
        update_summary_stats(record, stats)
    for s in stats.values():
        calculate_summary(s)

    if verbose:
        print(f"Processed {len(records)} trials", file=sys.stderr)

    return SweepResult(
        k=k, n=n, model=model, grid=grid,
        trials=[stats[c]["trials"] for c in grid],
        successes=[stats[c]["successes"] for c in grid],
        mean_core_density=[stats[c]["mean_core_density"] for c in grid],
        records=records,
    )


# =============================================================================
# Threshold Estimation
# =============================================================================

def wilson_interval(successes, trials, confidence=0.95):
    """Wilson score interval for a success probability."""
    if trials < 1:
        raise ValueError(f"wilson_interval: trials must be >= 1, got {trials}")
    ci = binomtest(int(successes), int(trials)).proportion_ci(
        confidence_level=confidence, method="wilson"
    )
    return float(ci.low), float(ci.high)


def estimate_threshold(k, n, trials, tolerance, master_seed, model=MODEL_SIMPLE,
                       workers=1, verbose=False):
    """
    Bisection for the load at which offline assignment succeeds half the time.

    Starts from [1/2, 1]. Each midpoint runs `trials` trials (seeds
    derive_seed(master_seed, iteration * trials + t)); the interval moves up
    when at least half succeed. The Wilson interval of every midpoint is
    logged but does not steer the search.

    Returns:
        Midpoint of the final interval (width <= tolerance).
    """
    if tolerance < 1.0 / n:
        raise ValueError(f"estimate_threshold: tolerance must be >= 1/n = {1.0 / n}, got {tolerance}")
    if trials < 1:
        raise ValueError(f"estimate_threshold: trials must be >= 1, got {trials}")

    lo, hi = 0.5, 1.0
    iteration = 0
    while hi - lo > tolerance:
        mid = (lo + hi) / 2.0
        tasks = [
            (k, n, mid, derive_seed(master_seed, iteration * trials + t), model)
            for t in range(trials)
        ]
        successes = sum(1 for record in run_trials(tasks, workers) if record.orientable)
        if verbose:
            low, high = wilson_interval(successes, trials)
            print(f"  c={mid:.6f}: {successes}/{trials} orientable "
                  f"(95% Wilson [{low:.3f}, {high:.3f}])", file=sys.stderr)
        if 2 * successes >= trials:
            lo = mid
        else:
            hi = mid
        iteration += 1
    return (lo + hi) / 2.0


# =============================================================================
# Core and Duplicate Statistics
# =============================================================================

def core_stats_experiment(k, n, c, trials, master_seed, model=MODEL_SIMPLE):
    """
    Core size n2/n and m2/n across trials vs. core_fractions(c, k).

    model may also be "cloning" (Poisson cloning with lambda = c k).
    """
    if trials < 1:
        raise ValueError(f"core_stats_experiment: trials must be >= 1, got {trials}")
    predicted_n2, predicted_m2 = analytic.core_fractions(c, k)

    n2_fractions, m2_fractions, densities = [], [], []
    for t in range(trials):
        graph = generate(model, n, c, k, derive_seed(master_seed, t))
        core = peel_core(graph)
        n2_fractions.append(core.n2 / n)
        m2_fractions.append(core.m2 / n)
        densities.append(core.density)

    return CoreStatsSummary(
        k=k, n=n, c=c, model=model,
        n2_fractions=n2_fractions, m2_fractions=m2_fractions, densities=densities,
        predicted_n2=predicted_n2, predicted_m2=predicted_m2,
    )


def duplicate_edge_experiment(k, n, c, trials, master_seed, m=None):
    """
    Count duplicate edge pairs in multigraph samples.

    Args:
        m: Edge count; defaults to floor(c n)

    Returns:
        DuplicateSummary with bound m^2 / C(n, k); passed iff mean <= 2 * bound.
    """
    if m is None:
        m = items_for_load(c, n)
    counts = [
        duplicate_edge_pairs(gen_multigraph(n, m, k, derive_seed(master_seed, t)))
        for t in range(trials)
    ]
    bound = m * m / math.comb(n, k)
    return DuplicateSummary(k=k, n=n, m=m, counts=counts, bound=bound)


# =============================================================================
# Oracle Check
# =============================================================================

def oracle_cells(k, n_max):
    """(n, m) cells covered by oracle_check: k <= n <= n_max, 0 <= m <= ceil(1.5 n)."""
    return [(n, m) for n in range(k, n_max + 1) for m in range(math.ceil(1.5 * n) + 1)]


def oracle_instance(model, n, m, k, seed):
    """
    Oracle graph of a matchable model with about m edges.

    simple caps m at C(n, k); binomial uses p = m / C(n, k).
    """
    if model == MODEL_MULTIGRAPH:
        return gen_multigraph(n, m, k, seed)
    total = math.comb(n, k)
    if model == MODEL_SIMPLE:
        return gen_simple(n, min(m, total), k, seed)
    if model == MODEL_BINOMIAL:
        return gen_binomial(n, min(1.0, m / total), k, seed)
    raise ValueError(
        f"oracle_instance: model must be one of {', '.join(MATCHABLE_MODELS)}, got {model!r}"
    )


def oracle_check(k, n_max, trials, master_seed, orientable=is_orientable, verbose=False,
                 models=MATCHABLE_MODELS):
    """
    Compare orientable() with the brute-force search for an over-dense subset.

    `trials` random graphs are spread round-robin over oracle_cells, each cell
    visited once per model in turn; instance i uses derive_seed(master_seed, i).
    By Hall's theorem a graph is orientable iff no vertex set U has more than
    |U| edges inside it.

    Returns:
        OracleReport; on the first disagreement it carries the instance.
    """
    if not k <= n_max <= ORACLE_MAX_VERTICES:
        raise ValueError(f"oracle_check: need k <= n_max <= {ORACLE_MAX_VERTICES}, got n_max={n_max}")
    instances = [(model, n, m) for n, m in oracle_cells(k, n_max) for model in models]

    for i in range(trials):
        model, n, m = instances[i % len(instances)]
        graph = oracle_instance(model, n, m, k, derive_seed(master_seed, i))
        claimed = bool(orientable(graph))
        witness = brute_force_dense_subset(graph, strict=True)
        if claimed == (witness is None):
            if verbose and (i + 1) % 500 == 0:
                print(f"Checked {i + 1}/{trials} instances", file=sys.stderr)
            continue

        buf = io.StringIO()
        write_hypergraph(graph, buf)
        if witness is None:
            detail = "orientable() says False but no over-dense subset exists"
        else:
            detail = (f"orientable() says True but U={sorted(witness.vertex_set)} "
                      f"spans {witness.e_U} edges")
        return OracleReport(k=k, n_max=n_max, checked=i + 1, passed=False,
                            counterexample=buf.getvalue(), detail=detail)

    return OracleReport(k=k, n_max=n_max, checked=trials, passed=True)


# =============================================================================
# Analytic Tables
# =============================================================================

def _xi_for(k, xi):
    return analytic.solve_xi_star(k) if xi is None else xi


def _analysis_row(func, k, value, xi):
    if func == "threshold":
        sol = analytic.threshold_c_star(k)
        return [k, sol.xi_star, sol.c_star, sol.residual]
    if func == "lambda2":
        x_min = analytic.lambda2_argmin(k)
        return [k, x_min, analytic.lambda2(k)]
    if func == "corefrac":
        n2, m2 = analytic.core_fractions(value, k)
        return [k, value, analytic.largest_fixed_point_xbar(value, k), n2, m2]
    if func == "I":
        ev = analytic.rate_I_eval(value, _xi_for(k, xi))
        return [k, value, ev.xi, ev.t_z, ev.value]
    if func == "h":
        xi_k = _xi_for(k, xi)
        return [k, value, xi_k, analytic.h_beta(value, k, xi_k)]
    raise ValueError(f"Unknown analysis function {func!r}")


def analysis_rows(func, ks, betas=(), qs=(), zs=(), cs=(), xi=None):
    """
    Tabulate an analytic function over a grid.

    Args:
        func: threshold, lambda2, corefrac, I, f or h
        ks: k values
        betas, qs, zs, cs: grid for the function's other argument(s);
            f uses the product betas x qs
        xi: Poisson parameter for I, f and h; defaults to xi*(k)

    Returns:
        (header, rows). A domain error fills the row's value columns with
        None and puts the message in the error column.
    """
    if func not in ANALYSIS_FUNCTIONS:
        raise ValueError(f"analysis: function must be one of {', '.join(ANALYSIS_FUNCTIONS)}")
    header = ANALYSIS_HEADERS[func]

    if func in ("threshold", "lambda2"):
        points = [(k, None) for k in ks]
    elif func == "corefrac":
        points = [(k, c) for k in ks for c in cs]
    elif func == "I":
        points = [(k, z) for k in ks for z in zs]
    elif func == "h":
        points = [(k, beta) for k in ks for beta in betas]
    else:
        points = [(k, (beta, q)) for k in ks for beta in betas for q in qs]

    rows = []
    for k, value in points:
        try:
            if func == "f":
                beta, q = value
                xi_k = _xi_for(k, xi)
                row = [k, beta, q, xi_k, analytic.f_beta_q(beta, q, k, xi_k)]
            else:
                row = _analysis_row(func, k, value, xi)
            rows.append(row + [None])
        except (ValueError, ArithmeticError) as e:
            if func in ("threshold", "lambda2"):
                keys = [k]
            elif func == "f":
                keys = [k, value[0], value[1]]
            else:
                keys = [k, value]
            rows.append(keys + [None] * (len(header) - len(keys) - 1) + [str(e)])
    return header, rows


def threshold_rows(ks):
    """k, xi*, c_k*, residual, lambda_2 and 1 - e^{-k} for each k."""
    rows = []
    for k in ks:
        sol = analytic.threshold_c_star(k)
        lam = analytic.lambda2(k) if k >= 3 else None
        rows.append([k, sol.xi_star, sol.c_star, sol.residual, lam, -math.expm1(-k)])
    return rows
