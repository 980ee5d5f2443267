"""Tests for the random k-graph generators, peeling and the text format."""

import io
import math
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cuckoo_thresholds import analytic
from cuckoo_thresholds.hypergraph import (
    Hypergraph,
    core_hypergraph,
    degree_sequence,
    duplicate_edge_pairs,
    edge_probability,
    gen_binomial,
    gen_from_degrees,
    gen_multigraph,
    gen_poisson_cloning,
    gen_simple,
    gen_truncated_core_model,
    induced_edge_count,
    peel_core,
    read_hypergraph,
    subset_density,
    write_hypergraph,
)


@st.composite
def small_graphs(draw, multiset=False):
    """Random k-graphs with up to 12 vertices and 20 edges."""
    k = draw(st.integers(min_value=2, max_value=4))
    n = draw(st.integers(min_value=k, max_value=12))
    m = draw(st.integers(min_value=0, max_value=20))
    seed = draw(st.integers(min_value=0, max_value=2**32 - 1))
    if multiset:
        graph, _ = gen_poisson_cloning(n, draw(st.floats(0.5, 4.0)), k, seed)
        return graph
    return gen_multigraph(n, m, k, seed)


def _same_core(a, b):
    return (np.array_equal(a.vertices, b.vertices)
            and np.array_equal(a.edge_indices, b.edge_indices))


# =============================================================================
# Hypergraph
# =============================================================================

def test_edges_are_sorted_and_read_only():
    graph = Hypergraph(n=5, k=3, edges=[[4, 0, 2]])
    assert graph.edge_list() == [(0, 2, 4)]
    with pytest.raises(ValueError):
        graph.edges[0, 0] = 1


def test_rejects_out_of_range_and_repeated_vertices():
    with pytest.raises(ValueError):
        Hypergraph(n=3, k=3, edges=[[0, 1, 3]])
    with pytest.raises(ValueError):
        Hypergraph(n=3, k=3, edges=[[0, 1, 1]])
    assert Hypergraph(n=3, k=3, edges=[[0, 1, 1]], multiset_edges=True).m == 1


def test_rejects_edges_of_wrong_arity():
    with pytest.raises(ValueError, match=r"shape \(m, 3\)"):
        Hypergraph(n=6, k=3, edges=[[0, 1], [2, 3], [4, 5]])
    with pytest.raises(ValueError, match="shape"):
        Hypergraph(n=6, k=3, edges=[0, 1, 2])
    assert Hypergraph(n=6, k=3, edges=np.empty((0, 3), dtype=np.int64)).m == 0


def test_density_and_simplicity(double_edge, k4_3graph):
    assert k4_3graph.density == 1.0
    assert k4_3graph.is_simple()
    assert not double_edge.is_simple()


# =============================================================================
# Generators
# =============================================================================

@pytest.mark.parametrize("generator", [gen_multigraph, gen_simple])
def test_single_possible_edge(generator):
    assert generator(3, 1, 3, seed=7).edge_list() == [(0, 1, 2)]


def test_empty_multigraph():
    assert gen_multigraph(10, 0, 3, seed=1).m == 0


def test_simple_takes_whole_universe():
    graph = gen_simple(4, 4, 3, seed=3)
    assert sorted(graph.edge_list()) == list(combinations(range(4), 3))


def test_simple_rejects_too_many_edges():
    with pytest.raises(ValueError):
        gen_simple(4, 5, 3, seed=0)


def test_generators_reject_n_below_k():
    with pytest.raises(ValueError):
        gen_multigraph(2, 1, 3, seed=0)


@pytest.mark.parametrize("n, m", [(100, 90), (1000, 900), (30, 3000)])
def test_simple_edges_distinct(n, m):
    graph = gen_simple(n, m, 3, seed=11)
    assert graph.m == m
    assert graph.is_simple()
    assert not (np.diff(graph.edges, axis=1) == 0).any()


def test_generators_deterministic():
    a = gen_multigraph(1000, 900, 3, seed=42)
    b = gen_multigraph(1000, 900, 3, seed=42)
    c = gen_multigraph(1000, 900, 3, seed=43)
    assert np.array_equal(a.edges, b.edges)
    assert not np.array_equal(a.edges, c.edges)


def test_simple_edge_inclusion_uniform():
    # a fixed tuple appears with probability m / C(n,k)
    n, m, k, seeds = 20, 100, 3, 4000
    target = (0, 1, 2)
    hits = sum(target in set(gen_simple(n, m, k, seed).edge_list()) for seed in range(seeds))
    p = m / math.comb(n, k)
    sigma = math.sqrt(seeds * p * (1 - p))
    assert abs(hits - seeds * p) <= 4 * sigma


def test_multigraph_vertex_frequency_uniform():
    graph = gen_multigraph(50, 20000, 3, seed=5)
    counts = np.bincount(graph.edges.ravel(), minlength=50)
    expected = 3 * 20000 / 50
    assert np.abs(counts - expected).max() <= 5 * math.sqrt(expected)


def test_binomial_extremes():
    assert gen_binomial(4, 0.0, 3, seed=0).m == 0
    assert sorted(gen_binomial(4, 1.0, 3, seed=0).edge_list()) == list(combinations(range(4), 3))


def test_binomial_mean_edge_count():
    n, c, k, seeds = 10_000, 0.9, 3, 200
    p = edge_probability(n, c, k)
    counts = [gen_binomial(n, p, k, seed).m for seed in range(seeds)]
    mean = p * math.comb(n, k)
    assert mean == pytest.approx(c * n, rel=1e-9)
    sigma = math.sqrt(mean * (1 - p) / seeds)
    assert abs(np.mean(counts) - mean) <= 3 * sigma


def test_binomial_rejects_bad_probability():
    with pytest.raises(ValueError):
        gen_binomial(10, 1.5, 3, seed=0)


def test_from_degrees_drops_leftover_clones():
    graph, degrees = gen_from_degrees([2, 2, 1, 2], 3, seed=9)
    assert degrees.total == 7
    assert degrees.unmatched_clones == 1
    assert graph.m == 2
    assert graph.multiset_edges


def test_poisson_cloning_zero_rate():
    graph, degrees = gen_poisson_cloning(50, 0.0, 3, seed=1)
    assert graph.m == 0
    assert degrees.total == 0


def test_poisson_cloning_mean_degree():
    n, lam = 100_000, 2.7
    _, degrees = gen_poisson_cloning(n, lam, 3, seed=2)
    assert abs(degrees.degrees.mean() - lam) <= 3 * math.sqrt(lam / n)
    assert degrees.total % 3 == degrees.unmatched_clones


def test_truncated_core_model_min_degree_two():
    for seed in range(5):
        _, degrees = gen_truncated_core_model(500, 2.0, 3, seed)
        assert degrees.degrees.min() >= 2


def test_truncated_core_model_mean_degree():
    xi = analytic.solve_xi_star(3)
    n2 = 100_000
    _, degrees = gen_truncated_core_model(n2, xi, 3, seed=4)
    # variance of a 2-truncated Poisson(xi*) is below 2
    assert abs(degrees.degrees.mean() - 3.0) <= 3 * math.sqrt(2.0 / n2)


def test_truncated_core_model_total_degree_variance():
    xi = analytic.solve_xi_star(3)
    n2 = 2000
    totals = [gen_truncated_core_model(n2, xi, 3, seed)[1].total for seed in range(40)]
    assert 0.01 <= np.var(totals, ddof=1) / n2 <= 100


# =============================================================================
# Structural Queries
# =============================================================================

def test_degree_sequence_examples():
    graph = Hypergraph(n=4, k=3, edges=[[0, 1, 2]])
    assert degree_sequence(graph).degrees.tolist() == [1, 1, 1, 0]
    assert degree_sequence(Hypergraph(n=4, k=3, edges=[])).degrees.tolist() == [0, 0, 0, 0]


@given(small_graphs())
def test_degree_sum_is_km(graph):
    assert degree_sequence(graph).total == graph.k * graph.m


def test_peel_single_edge_is_empty(single_edge):
    core = peel_core(single_edge)
    assert core.n2 == 0 and core.m2 == 0
    assert core.density == 0.0


def test_peel_double_edge_keeps_both(double_edge):
    core = peel_core(double_edge)
    assert core.vertices.tolist() == [0, 1, 2]
    assert core.edge_indices.tolist() == [0, 1]


def test_peel_k4_keeps_everything(k4_3graph):
    core = peel_core(k4_3graph)
    assert (core.n2, core.m2) == (4, 4)


@given(small_graphs())
def test_core_has_min_degree_two(graph):
    core = peel_core(graph)
    sub = core_hypergraph(graph, core)
    degrees = degree_sequence(sub).degrees
    assert (degrees[core.vertices] >= 2).all()
    assert set(np.flatnonzero(degrees).tolist()) <= set(core.vertices.tolist())


@given(small_graphs())
def test_peeling_idempotent(graph):
    core = peel_core(graph)
    again = peel_core(core_hypergraph(graph, core))
    assert again.n2 == core.n2
    assert again.m2 == core.m2


@given(small_graphs(), st.integers(min_value=0, max_value=1000))
def test_peeling_order_independent(graph, order_seed):
    assert _same_core(peel_core(graph), peel_core(graph, rng=order_seed))


@given(small_graphs(multiset=True))
def test_peeling_handles_multiset_edges(graph):
    core = peel_core(graph)
    sub = core_hypergraph(graph, core)
    degrees = degree_sequence(sub).degrees
    assert (degrees[core.vertices] >= 2).all()


def test_subset_density_examples(single_edge, k4_3graph):
    assert subset_density(single_edge, {0, 1, 2}) == Fraction(1, 3)
    assert subset_density(single_edge, {0, 1}) == 0
    assert subset_density(k4_3graph, range(4)) == 1
    with pytest.raises(ValueError):
        subset_density(single_edge, set())


def test_induced_edge_count(k4_3graph):
    assert induced_edge_count(k4_3graph, {0, 1, 2}) == 1
    assert induced_edge_count(k4_3graph, {0, 1, 2, 3}) == 4


def test_duplicate_pairs():
    graph = Hypergraph(n=4, k=3, edges=[[0, 1, 2]] * 3 + [[1, 2, 3]])
    assert duplicate_edge_pairs(graph) == 3
    assert duplicate_edge_pairs(Hypergraph(n=3, k=3, edges=[[0, 1, 2]])) == 0


# =============================================================================
# Text Format
# =============================================================================

def test_write_then_read_preserves_graph(k4_3graph, tmp_path):
    path = tmp_path / "k4.txt"
    write_hypergraph(k4_3graph, path)
    graph = read_hypergraph(path)
    assert (graph.n, graph.m, graph.k) == (4, 4, 3)
    assert np.array_equal(graph.edges, k4_3graph.edges)


def test_read_skips_comments_and_detects_multiset():
    text = "# cloning output\n3 2 3\n0 1 2\n\n0 0 1\n"
    graph = read_hypergraph(io.StringIO(text))
    assert graph.multiset_edges
    assert graph.m == 2


@pytest.mark.parametrize("text, message", [
    ("", "header"),
    ("3 1\n0 1 2\n", "line 1"),
    ("3 1 3\n0 1\n", "line 2"),
    ("3 1 3\n2 1 0\n", "ascending"),
    ("3 2 3\n0 1 2\n", "declares 2"),
    ("3 1 3\n0 x 2\n", "non-integer"),
])
def test_read_rejects_malformed(text, message):
    with pytest.raises(ValueError, match=message):
        read_hypergraph(io.StringIO(text))


# =============================================================================
# Model Agreement
# =============================================================================

@pytest.mark.slow
def test_cloning_core_matches_prediction():
    n, c, k = 100_000, 0.95, 3
    graph, _ = gen_poisson_cloning(n, c * k, k, seed=12)
    predicted, _ = analytic.core_fractions(c, k)
    assert abs(peel_core(graph).n2 / n - predicted) <= 0.01


@pytest.mark.slow
def test_multigraph_and_binomial_cores_agree():
    n, c, k = 100_000, 0.95, 3
    a = peel_core(gen_multigraph(n, math.floor(c * n), k, seed=1))
    b = peel_core(gen_binomial(n, edge_probability(n, c, k), k, seed=2))
    assert abs(a.n2 - b.n2) / n <= 0.01


@pytest.mark.slow
def test_multigraph_duplicate_pairs_match_expectation():
    n, m, k = 20, 10_000, 3
    counts = [duplicate_edge_pairs(gen_multigraph(n, m, k, seed)) for seed in range(100)]
    # expected pairs: C(m,2) / C(n,k)
    expected = math.comb(m, 2) / math.comb(n, k)
    assert np.mean(counts) == pytest.approx(expected, rel=0.02)
