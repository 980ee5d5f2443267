#!/usr/bin/env python3
"""
Shared utilities for the cuckoo threshold tools.

Contains common functions for:
- Configuration loading
- Seed derivation (stream splitting)
- Random graph model names and CSV constants
- Value formatting for CSV output
- Parsing of k ranges and c grids from the command line
"""

import copy
import math
import sys

import numpy as np
import yaml


# =============================================================================
# Constants
# =============================================================================

# Random k-graph models
MODEL_MULTIGRAPH = "multigraph"   # H*_{n,m,k}: independent uniform edges
MODEL_SIMPLE = "simple"           # H_{n,m,k}: m distinct uniform edges
MODEL_BINOMIAL = "binomial"       # H_{n,p,k}: each k-tuple with probability p
MODEL_CLONING = "cloning"         # Poisson cloning model, may repeat vertices in an edge

ALL_MODELS = (MODEL_MULTIGRAPH, MODEL_SIMPLE, MODEL_BINOMIAL, MODEL_CLONING)

# Models whose edges always have k distinct vertices (matchable)
MATCHABLE_MODELS = (MODEL_MULTIGRAPH, MODEL_SIMPLE, MODEL_BINOMIAL)

# Trial CSV header (bit-exact)
TRIAL_CSV_HEADER = [
    "k", "n", "c", "seed", "model", "orientable",
    "matching_size", "core_n2", "core_m2", "elapsed_ms",
]

SWEEP_SUMMARY_HEADER = [
    "c", "trials", "successes", "success_rate", "smoothed_rate", "mean_core_density",
]

# Significant digits for floats in CSV output (lossless round-trip)
FLOAT_DIGITS = 17

# Largest subset enumeration the brute-force oracles accept
MAX_ENUMERATION_VERTICES = 24

DEFAULT_CONFIG = {
    "experiments": {
        "master_seed": 0,
        "model": MODEL_SIMPLE,
        "workers": 1,
        "trials": 20,
    },
    "table": {
        "max_steps_factor": 100,
    },
}


# =============================================================================
# Configuration
# =============================================================================

def load_config(config_path):
    """
    Load configuration from YAML file and merge it over the defaults.

    Expected format (all keys optional):
        experiments:
            master_seed: 0
            model: simple
            workers: 4
            trials: 20
        table:
            max_steps_factor: 100

    Returns dict with 'experiments' and 'table' sections. A config_path of
    None returns the built-in defaults.
    """
    config = copy.deepcopy(DEFAULT_CONFIG)
    if config_path is None:
        return config

    try:
        with open(config_path, "r") as f:
            loaded = yaml.safe_load(f) or {}
    except FileNotFoundError:
        sys.exit(f"Error: Config file not found: {config_path}\n"
                 f"Copy config.example.yaml and adjust it.")
    except Exception as e:
        sys.exit(f"Error loading config file: {e}")

    if not isinstance(loaded, dict):
        sys.exit(f"Error: Config file {config_path} must contain a mapping")

    for section, defaults in config.items():
        values = loaded.get(section) or {}
        for key in defaults:
            if key in values:
                defaults[key] = values[key]
    return config


def get_experiment_config(config):
    """Extract experiment defaults from config dict."""
    exp_conf = config.get("experiments", {})
    defaults = DEFAULT_CONFIG["experiments"]
    return {key: exp_conf.get(key, value) for key, value in defaults.items()}


def default_max_steps(capacity, factor=100):
    """Random-walk step budget: ceil(factor * ln(n + 1))."""
    return math.ceil(factor * math.log(capacity + 1))


# =============================================================================
# Seeds
# =============================================================================

def derive_seed(master_seed, index):
    """
    Derive the seed of trial `index` from a master seed.

    Uses numpy's SeedSequence hashing, so the result depends only on
    (master_seed, index) and not on which worker runs the trial.

    Returns:
        Non-negative integer below 2**64.
    """
    seq = np.random.SeedSequence([int(master_seed), int(index)])
    return int(seq.generate_state(1, dtype=np.uint64)[0])


def make_rng(seed):
    """Return a PCG64 generator; an existing Generator is passed through."""
    return np.random.default_rng(seed)


# =============================================================================
# Utility Functions
# =============================================================================

def format_value(val):
    """Format a value for CSV output."""
    if val is None:
        return "NULL"
    elif isinstance(val, (bool, np.bool_)):
        return "1" if val else "0"
    elif isinstance(val, (float, np.floating)):
        return f"{float(val):.{FLOAT_DIGITS}g}"
    else:
        return str(val)


def parse_int_range(range_str):
    """
    Parse a range string like "3..10", "3,5,7" or "4" to a list of ints.

    Args:
        range_str: Inclusive range "a..b", a comma list, or a single integer

    Returns:
        list of ints in the given order.

    Raises:
        ValueError if the string is malformed or the range is empty.
    """
    text = str(range_str).strip()
    try:
        if ".." in text:
            lo_str, hi_str = text.split("..", 1)
            lo, hi = int(lo_str), int(hi_str)
            if lo > hi:
                raise ValueError(f"empty range {text!r}")
            return list(range(lo, hi + 1))
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise ValueError(f"Invalid integer range {text!r}: {e}") from None


def parse_float_list(list_str):
    """Parse "0.7,0.8" or "0.7" to a list of floats."""
    try:
        return [float(part) for part in str(list_str).split(",") if part.strip()]
    except ValueError:
        raise ValueError(f"Invalid float list {list_str!r}") from None


def make_c_grid(c_min, c_max, step):
    """
    Build the load grid c_min, c_min + step, ..., c_max (inclusive).

    Grid points are rounded to 12 decimals so that repeated additions do not
    leak floating-point drift into CSV output.
    """
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    if c_min > c_max:
        raise ValueError(f"c_min ({c_min}) must not exceed c_max ({c_max})")
    count = int(math.floor((c_max - c_min) / step + 1e-9)) + 1
    return [round(c_min + i * step, 12) for i in range(count)]
