#!/usr/bin/env python3
"""
Closed-form and fixed-point quantities behind the k-ary cuckoo load threshold.

Contains functions for:
- The threshold itself (xi*, c_k*) and the core-emergence point lambda_2
- Core sizes in the random k-graph (largest fixed point x_bar, core fractions)
- The 2-truncated Poisson mean and its large-deviation rate function I(z)
- The entropy-based exponents f(beta, q) and h(beta) used to rule out
  1-dense subsets below the threshold

All functions are pure and evaluated in double precision. Every scalar root
is found by plain bisection (the objectives are monotone).
"""

import math
from dataclasses import dataclass

from scipy.optimize import bisect, minimize_scalar
from scipy.special import entr, xlogy


# =============================================================================
# Constants
# =============================================================================

# Bisection settings shared by every scalar solve
ROOT_XTOL = 1e-12
ROOT_MAXITER = 200

# Fixed-point iteration for x_bar
FIXED_POINT_TOL = 1e-14
FIXED_POINT_MAXITER = 1_000_000

# Below this x_bar is reported as 0 (empty core)
EMPTY_CORE_CUTOFF = 1e-10

# z - 2 below this is treated as the boundary point z = 2
RATE_BOUNDARY_EPS = 1e-13

# Below this the series for e^x - 1 - x is used
_SERIES_CUTOFF = 0.1

# Above this e^x terms are rewritten with e^{-x} so they cannot overflow
LARGE_ARGUMENT = 30.0


# =============================================================================
# Domain Types
# =============================================================================

@dataclass(frozen=True)
class ThresholdSolution:
    """
    Analytic load threshold for k choices.

    For k = 2 the threshold is the closed value 1/2, reported with
    xi_star = 0 and limit_case = True (the xi -> 0+ limit of the k >= 3 formula).
    """
    k: int
    xi_star: float
    c_star: float
    residual: float
    limit_case: bool = False


@dataclass(frozen=True)
class RateFunctionEval:
    """One evaluation of I(z) for a 2-truncated Poisson with parameter xi."""
    z: float
    xi: float
    t_z: float
    value: float


# =============================================================================
# Elementary Helpers
# =============================================================================

def expm1mx(x):
    """
    e^x - 1 - x without cancellation near 0.

    Uses the Taylor series x^2/2! + x^3/3! + ... for |x| < 0.1 and
    expm1(x) - x otherwise.
    """
    if abs(x) < _SERIES_CUTOFF:
        term = x * x / 2.0
        total = term
        j = 2
        while abs(term) > 1e-18 * abs(total) and j < 30:
            j += 1
            term *= x / j
            total += term
        return total
    return math.expm1(x) - x


def log_expm1mx(x):
    """
    ln(e^x - 1 - x), finite for every x > 0.

    Above LARGE_ARGUMENT it is evaluated as x + log1p(-(1 + x) e^{-x}).
    """
    if x <= 0:
        raise ValueError(f"log_expm1mx: x must be positive, got {x}")
    if x > LARGE_ARGUMENT:
        return x + math.log1p(-(1.0 + x) * math.exp(-x))
    return math.log(expm1mx(x))


def one_minus_exp_neg(x):
    """1 - e^{-x}, accurate for small x."""
    return -math.expm1(-x)


def _check_k(k, minimum, name):
    if int(k) != k or k < minimum:
        raise ValueError(f"{name}: k must be an integer >= {minimum}, got {k}")


def _solve_increasing(func, target, lo, hi, xtol=ROOT_XTOL):
    """Bisection for func(x) = target with func increasing on [lo, hi]."""
    return bisect(lambda x: func(x) - target, lo, hi, xtol=xtol, maxiter=ROOT_MAXITER)


# =============================================================================
# Threshold
# =============================================================================

def truncated_poisson_mean(xi):
    """
    Mean of a Poisson(xi) variable conditioned on being at least 2.

    mu = xi (e^xi - 1) / (e^xi - xi - 1); increasing in xi, tends to 2 as xi -> 0+.

    Args:
        xi: Poisson parameter, xi >= 0 (xi = 0 returns the limit 2)

    Returns:
        float > 2 for xi > 0.
    """
    if xi < 0:
        raise ValueError(f"truncated_poisson_mean: xi must be positive, got {xi}")
    if xi == 0:
        return 2.0
    if xi > 1.0:
        tail = math.exp(-xi)
        return xi * (1.0 - tail) / (1.0 - (1.0 + xi) * tail)
    return xi * math.expm1(xi) / expm1mx(xi)


def solve_xi_star(k):
    """
    Solve k = xi (e^xi - 1) / (e^xi - 1 - xi) for xi.

    The right-hand side increases from 2 (xi -> 0+) and exceeds xi, so the
    root lies in (0, k + 2).

    Raises:
        ValueError for k < 3. The k = 2 threshold has no root here and is
        handled as a limit case by threshold_c_star.
    """
    if int(k) != k or k < 3:
        raise ValueError(
            f"solve_xi_star: k must be an integer >= 3, got {k}; "
            f"k = 2 is the xi -> 0 limit case returned by threshold_c_star"
        )
    return _solve_increasing(truncated_poisson_mean, float(k), 0.0, k + 2.0)


def threshold_c_star(k):
    """
    Load threshold c_k* = xi* / (k (1 - e^{-xi*})^{k-1}).

    Args:
        k: Number of choices per item, k >= 2

    Returns:
        ThresholdSolution. For k = 2 this is exactly 1/2.
    """
    _check_k(k, 2, "threshold_c_star")
    k = int(k)
    if k == 2:
        return ThresholdSolution(k=2, xi_star=0.0, c_star=0.5, residual=0.0, limit_case=True)

    xi = solve_xi_star(k)
    c_star = xi / (k * one_minus_exp_neg(xi) ** (k - 1))
    residual = abs(k - truncated_poisson_mean(xi))
    return ThresholdSolution(k=k, xi_star=xi, c_star=c_star, residual=residual)


# =============================================================================
# Core of the Random k-Graph
# =============================================================================

def _log_core_objective(x, k):
    # ln of x / (1 - e^{-x})^{k-1}; the power underflows for large k
    return math.log(x) - (k - 1) * math.log(one_minus_exp_neg(x))


def lambda2_argmin(k):
    """Minimiser of x / (1 - e^{-x})^{k-1} over x > 0."""
    _check_k(k, 3, "lambda2_argmin")
    result = minimize_scalar(
        _log_core_objective, args=(k,), bounds=(1e-6, k + 20.0),
        method="bounded", options={"xatol": 1e-10, "maxiter": 500},
    )
    return float(result.x)


def lambda2(k):
    """
    Mean degree ck at which a non-empty core first appears.

    lambda_2 = min_{x > 0} x / (1 - e^{-x})^{k-1}.
    """
    return math.exp(_log_core_objective(lambda2_argmin(k), k))


def largest_fixed_point_xbar(c, k):
    """
    Largest root of x = (1 - e^{-x c k})^{k-1} in [0, 1].

    Iterates x <- (1 - e^{-x c k})^{k-1} from x = 1. The map is increasing and
    maps [0, 1] into itself, so the iterates decrease to the largest fixed point.

    Args:
        c: Load (items per slot), c > 0
        k: Choices per item, k >= 3

    Returns:
        x_bar, or 0.0 when ck <= lambda_2 (empty core).
    """
    if c <= 0:
        raise ValueError(f"largest_fixed_point_xbar: c must be positive, got {c}")
    _check_k(k, 3, "largest_fixed_point_xbar")

    ck = c * k
    x = 1.0
    for _ in range(FIXED_POINT_MAXITER):
        x_next = one_minus_exp_neg(x * ck) ** (k - 1)
        if abs(x - x_next) < FIXED_POINT_TOL:
            x = x_next
            break
        x = x_next
        if x < EMPTY_CORE_CUTOFF:
            break
    return 0.0 if x < EMPTY_CORE_CUTOFF else x


def core_fractions(c, k):
    """
    Asymptotic core size as fractions of n.

    With xi = x_bar * c * k:
        vertices: 1 - e^{-xi} - xi e^{-xi}
        edges:    xi (1 - e^{-xi}) / k

    Returns:
        (vertex_fraction, edge_fraction); (0.0, 0.0) for an empty core.
    """
    x_bar = largest_fixed_point_xbar(c, k)
    if x_bar == 0.0:
        return 0.0, 0.0
    xi = x_bar * c * k
    vertex_fraction = one_minus_exp_neg(xi) - xi * math.exp(-xi)
    edge_fraction = xi * one_minus_exp_neg(xi) / k
    return vertex_fraction, edge_fraction


# =============================================================================
# Rate Function of the 2-Truncated Poisson Mean
# =============================================================================

def solve_Tz(z):
    """
    The unique T > 0 with z = T (e^T - 1) / (e^T - T - 1).

    Raises:
        ValueError for z <= 2 (use rate_I, which handles z = 2 as a limit).
    """
    if z <= 2:
        raise ValueError(f"solve_Tz: z must exceed 2, got {z}; I(2) is a closed form in rate_I")
    # T_z ~ 3 (z - 2) near the boundary; keep the tolerance relative there
    xtol = min(ROOT_XTOL, (z - 2.0) * 1e-4)
    # mu(T) > T, so the root lies below z
    return _solve_increasing(truncated_poisson_mean, z, 0.0, float(z), xtol=xtol)


def rate_I(z, xi):
    """
    Large-deviation rate I(z) for the sample mean of 2-truncated Poisson(xi).

    I(z) = z (ln T_z - ln xi) - ln(e^{T_z} - T_z - 1) + ln(e^xi - xi - 1)   (z > 2)
    I(2) = ln 2 - 2 ln xi + ln(e^xi - xi - 1)

    Returns:
        float, non-negative, zero at z = truncated_poisson_mean(xi).
    """
    return rate_I_eval(z, xi).value


def rate_I_eval(z, xi):
    """rate_I returning the full RateFunctionEval (t_z is 0 at z = 2)."""
    if xi <= 0:
        raise ValueError(f"rate_I: xi must be positive, got {xi}")
    if z < 2:
        raise ValueError(f"rate_I: z must be >= 2, got {z}")

    log_norm = log_expm1mx(xi)
    if z - 2.0 < RATE_BOUNDARY_EPS:
        value = math.log(2.0) - 2.0 * math.log(xi) + log_norm
        return RateFunctionEval(z=z, xi=xi, t_z=0.0, value=value)

    t_z = solve_Tz(z)
    value = z * (math.log(t_z) - math.log(xi)) - log_expm1mx(t_z) + log_norm
    return RateFunctionEval(z=z, xi=xi, t_z=t_z, value=value)


def truncated_poisson_log_mgf(t, xi):
    """
    c(t) = ln E[e^{tX}] for X 2-truncated Poisson(xi).

    E[e^{tX}] = (e^{xi e^t} - xi e^t - 1) / (e^xi - xi - 1).
    """
    return log_expm1mx(xi * math.exp(t)) - log_expm1mx(xi)


def rate_I_legendre(z, xi, t_bounds=None):
    """
    I(z) as the Legendre transform sup_t (t z - c(t)), maximised numerically.

    Independent of the T_z parameterisation; used to cross-check rate_I.
    The default search interval keeps xi e^t below 700 so e^{xi e^t} stays finite.
    """
    if z < 2:
        raise ValueError(f"rate_I_legendre: z must be >= 2, got {z}")
    if t_bounds is None:
        t_bounds = (-30.0, math.log(700.0 / xi))
    result = minimize_scalar(
        lambda t: truncated_poisson_log_mgf(t, xi) - t * z,
        bounds=t_bounds, method="bounded", options={"xatol": 1e-12, "maxiter": 1000},
    )
    return -float(result.fun)


# =============================================================================
# Entropy Exponents
# =============================================================================

def entropy_H(x):
    """Natural-log entropy -x ln x - (1-x) ln(1-x), with H(0) = H(1) = 0."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"entropy_H: x must lie in [0, 1], got {x}")
    return float(entr(x) + entr(1.0 - x))


def _log_nonfull_patterns(k):
    # ln(2^k - k - 1): colourings of an edge with neither 0 nor exactly 1 blue clone excluded
    return math.log(2 ** k - k - 1)


def f_beta_q(beta, q, k, xi):
    """
    Exponent f(beta, q) bounding inclusion-maximal 1-dense sets of the core.

    f = 2H(beta) + (1-beta) ln(2^k-k-1) - k H(q) - (1-beta) I(k(1-q)/(1-beta))

    Args:
        beta: Fraction of core vertices in the set, 0 < beta < 1
        q: Fraction of core degree in the set, beta <= q <= 1 - 2(1-beta)/k
        k: Choices per item, k >= 3
        xi: Poisson parameter of the core degrees (xi*(k) at the threshold)

    Raises:
        ValueError if the argument of I falls below 2.
    """
    _check_k(k, 3, "f_beta_q")
    if not (0.0 < beta < 1.0 and 0.0 < q < 1.0):
        raise ValueError(f"f_beta_q: beta and q must lie in (0, 1), got beta={beta}, q={q}")

    z = k * (1.0 - q) / (1.0 - beta)
    if z < 2.0 - 1e-12:
        raise ValueError(
            f"f_beta_q: k(1-q)/(1-beta) = {z} is below 2; need q <= 1 - 2(1-beta)/k"
        )
    z = max(z, 2.0)
    return (2.0 * entropy_H(beta) + (1.0 - beta) * _log_nonfull_patterns(k)
            - k * entropy_H(q) - (1.0 - beta) * rate_I(z, xi))


def critical_point_f(beta, q0, k, xi):
    """
    f(beta, q0) at a critical point in q, with T_0 eliminated.

    Valid for beta <= q0 <= 1 - 2(1-beta)/k. Increasing in q0 for beta >= 0.7.
    """
    _check_k(k, 3, "critical_point_f")
    inner = k * q0 - xi * (1.0 - beta)
    if inner <= 0 or not 0.0 < q0 < 1.0:
        raise ValueError(
            f"critical_point_f: need 0 < q0 < 1 and k q0 > xi (1 - beta), "
            f"got q0={q0}, beta={beta}, xi={xi}"
        )
    log_ratio = _log_nonfull_patterns(k) - log_expm1mx(xi)
    return (2.0 * entropy_H(beta) + (1.0 - beta) * log_ratio + k * math.log(q0)
            + (1.0 - beta) * (2.0 * math.log(xi) + math.log(1.0 - q0) - math.log(q0)
                              - math.log(inner))
            + xlogy(1.0 - beta, 1.0 - beta))


def h_beta(beta, k, xi):
    """
    h(beta) = f(beta, q0) at q0 = 1 - 2(1-beta)/k.

    h = 2H(beta) + (1-beta) ln((2^k-k-1)/(e^xi-xi-1)) + k ln((k-2+2beta)/k)
        + (1-beta) (2 ln xi + ln(2(1-beta)^2) - ln(k-2+2beta) - ln(k-2+2beta-xi(1-beta)))

    Convex on [0.7, 1] with h(1) = 0.

    Raises:
        ValueError when k - 2 + 2beta - xi(1-beta) <= 0 (xi far above k).
    """
    _check_k(k, 3, "h_beta")
    if not 0.0 <= beta <= 1.0:
        raise ValueError(f"h_beta: beta must lie in [0, 1], got {beta}")

    span = k - 2.0 + 2.0 * beta
    inner = span - xi * (1.0 - beta)
    if inner <= 0 or xi <= 0:
        raise ValueError(
            f"h_beta: log of non-positive argument (k - 2 + 2beta - xi(1-beta) = {inner}); "
            f"xi = {xi} is outside the sensible range (k - 1, k)"
        )
    gap = 1.0 - beta
    log_ratio = _log_nonfull_patterns(k) - log_expm1mx(xi)
    return (2.0 * entropy_H(beta) + gap * log_ratio + k * math.log(span / k)
            + gap * (2.0 * math.log(xi) + math.log(2.0) - math.log(span) - math.log(inner))
            + 2.0 * xlogy(gap, gap))


def f_upper_boundary(beta, k, xi):
    """
    f(beta, 1 - 2(1-beta)/k): the q-boundary where the complement has mean degree 2.

    2H(beta) + (1-beta) ln(2^k-k-1) - k H((k-2+2beta)/k) - (1-beta) I(2)
    """
    _check_k(k, 3, "f_upper_boundary")
    q = (k - 2.0 + 2.0 * beta) / k
    return (2.0 * entropy_H(beta) + (1.0 - beta) * _log_nonfull_patterns(k)
            - k * entropy_H(q) - (1.0 - beta) * rate_I(2.0, xi))


def small_dense_exponent(u, k):
    """First-moment exponent 2H(u) + k u ln u for 1-dense sets of un vertices."""
    if not 0.0 < u < 1.0:
        raise ValueError(f"small_dense_exponent: u must lie in (0, 1), got {u}")
    return 2.0 * entropy_H(u) + k * u * math.log(u)


def h_large_k_bound(k):
    """Upper bound 0.33 + 0.3 ln((2^k-k-1)/(e^{k-1}-k)) on h(0.7); negative for k >= 7."""
    _check_k(k, 3, "h_large_k_bound")
    log_denominator = (k - 1) + math.log1p(-k * math.exp(1 - k))
    return 0.33 + 0.3 * (_log_nonfull_patterns(k) - log_denominator)
