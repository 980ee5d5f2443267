#!/usr/bin/env python3
"""
Random k-graphs and their structural queries.

Vertices are table locations 0..n-1 and each edge is the sorted k-tuple of
locations chosen by one item. Generators:
- gen_multigraph:           H*_{n,m,k}, independent uniform edges (repeats allowed)
- gen_simple:               H_{n,m,k}, m distinct uniform edges
- gen_binomial:             H_{n,p,k}, each k-tuple present with probability p
- gen_poisson_cloning:      Poisson cloning model (edges may repeat a vertex)
- gen_truncated_core_model: clones from 2-truncated Poisson degrees

Every generator is a pure function of its parameters and seed.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from cuckoo_thresholds.sim_utils import make_rng


# =============================================================================
# Constants
# =============================================================================

# gen_simple samples from the full list of k-subsets when C(n,k) is at most
# SMALL_UNIVERSE, or when more than half of at most SUBSET_ENUMERATION_LIMIT
# subsets are requested; otherwise it rejects duplicates
SMALL_UNIVERSE = 4096
SUBSET_ENUMERATION_LIMIT = 1 << 20

# Above this C(n,k) the binomial edge count is drawn from an approximation
EXACT_BINOMIAL_LIMIT = 1 << 62

# Expected edge counts above this use the normal instead of the Poisson approximation
POISSON_APPROX_LIMIT = 1e7


# =============================================================================
# Domain Types
# =============================================================================

@dataclass(frozen=True, eq=False)
class Hypergraph:
    """
    A k-graph on vertices 0..n-1.

    edges is a read-only (m, k) integer array; every row is sorted ascending.
    With multiset_edges False every row has k distinct vertices.
    """
    n: int
    k: int
    edges: np.ndarray
    multiset_edges: bool = False

    def __post_init__(self):
        if self.k < 2:
            raise ValueError(f"Hypergraph: edge arity k must be >= 2, got {self.k}")
        if self.n < 0:
            raise ValueError(f"Hypergraph: vertex count must be >= 0, got {self.n}")

        edges = np.array(self.edges, dtype=np.int64)
        if edges.size == 0:
            edges = edges.reshape(0, self.k)
        elif edges.ndim != 2 or edges.shape[1] != self.k:
            raise ValueError(
                f"Hypergraph: edges must have shape (m, {self.k}), got {edges.shape}"
            )
        edges.sort(axis=1)
        if edges.size and (edges.min() < 0 or edges.max() >= self.n):
            raise ValueError(f"Hypergraph: vertex index outside 0..{self.n - 1}")
        if not self.multiset_edges and self.k > 1 and edges.size:
            if (np.diff(edges, axis=1) == 0).any():
                raise ValueError("Hypergraph: edge repeats a vertex; set multiset_edges=True")
        edges.setflags(write=False)
        object.__setattr__(self, "edges", edges)

    @property
    def m(self):
        return int(self.edges.shape[0])

    @property
    def density(self):
        """Edges per vertex."""
        return self.m / self.n if self.n else 0.0

    def is_simple(self):
        """True if no two edges coincide."""
        if self.m < 2:
            return True
        return len(np.unique(self.edges, axis=0)) == self.m

    def edge_list(self):
        """Edges as a list of tuples."""
        return [tuple(row) for row in self.edges.tolist()]


@dataclass(frozen=True, eq=False)
class DegreeSequence:
    """
    Vertex degrees (incidence counts).

    For cloning-model output these are the drawn degrees d(v); unmatched_clones
    counts the D mod k clones left out of the k-matching.
    """
    degrees: np.ndarray
    total: int
    unmatched_clones: int = 0


@dataclass(frozen=True, eq=False)
class CoreSubgraph:
    """Vertices and edge indices (into the parent's edge array) surviving 2-core peeling."""
    vertices: np.ndarray
    edge_indices: np.ndarray
    n2: int
    m2: int

    @property
    def density(self):
        return self.m2 / self.n2 if self.n2 else 0.0


# =============================================================================
# Generators
# =============================================================================

def _check_params(n, k):
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if n < k:
        raise ValueError(f"need n >= k, got n={n}, k={k}")


def _sample_distinct_rows(rng, n, k, m):
    """m uniform k-subsets of 0..n-1 as sorted rows, rejecting rows with a repeat."""
    rows = rng.integers(0, n, size=(m, k), dtype=np.int64)
    while True:
        rows.sort(axis=1)
        bad = (np.diff(rows, axis=1) == 0).any(axis=1)
        redraw = int(bad.sum())
        if redraw == 0:
            return rows
        rows[bad] = rng.integers(0, n, size=(redraw, k), dtype=np.int64)


def gen_multigraph(n, m, k, seed):
    """
    H*_{n,m,k}: m independent uniform k-subsets (edges may coincide).

    Args:
        n: Number of vertices (table locations)
        m: Number of edges (items), m >= 0
        k: Edge arity (choices per item)
        seed: int seed or numpy Generator

    Returns:
        Hypergraph with multiset_edges False.
    """
    _check_params(n, k)
    if m < 0:
        raise ValueError(f"gen_multigraph: m must be >= 0, got {m}")
    rng = make_rng(seed)
    return Hypergraph(n=n, k=k, edges=_sample_distinct_rows(rng, n, k, m))


def gen_simple(n, m, k, seed):
    """
    H_{n,m,k}: m pairwise-distinct uniform k-subsets.

    Small universes (or requests for most of a moderate one) are enumerated
    and sampled without replacement; otherwise duplicates are rejected
    against a hash set.
    """
    _check_params(n, k)
    total = math.comb(n, k)
    if m < 0 or m > total:
        raise ValueError(f"gen_simple: need 0 <= m <= C(n,k) = {total}, got m={m}")
    rng = make_rng(seed)

    dense_request = 2 * m > total and total <= SUBSET_ENUMERATION_LIMIT
    if dense_request or total <= SMALL_UNIVERSE:
        universe = np.array(list(combinations(range(n), k)), dtype=np.int64).reshape(-1, k)
        chosen = rng.choice(total, size=m, replace=False)
        return Hypergraph(n=n, k=k, edges=universe[chosen])

    seen = set()
    edges = []
    while len(edges) < m:
        batch = _sample_distinct_rows(rng, n, k, m - len(edges))
        for row in map(tuple, batch.tolist()):
            if row not in seen:
                seen.add(row)
                edges.append(row)
    return Hypergraph(n=n, k=k, edges=np.array(edges, dtype=np.int64).reshape(-1, k))


def gen_binomial(n, p, k, seed):
    """
    H_{n,p,k}: every k-tuple is an edge independently with probability p.

    The edge count M ~ Binomial(C(n,k), p) is drawn first (exactly while
    C(n,k) <= 2^62, otherwise from the Poisson or normal approximation), then M
    distinct uniform edges. Conditioned on M the model is uniform over simple
    graphs, so this is the same distribution.
    """
    _check_params(n, k)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"gen_binomial: p must lie in [0, 1], got {p}")
    rng = make_rng(seed)
    total = math.comb(n, k)

    if total <= EXACT_BINOMIAL_LIMIT:
        edge_count = int(rng.binomial(total, p))
    else:
        mean = total * p
        if mean <= POISSON_APPROX_LIMIT:
            edge_count = int(rng.poisson(mean))
        else:
            edge_count = int(round(rng.normal(mean, math.sqrt(mean * (1.0 - p)))))
        edge_count = min(max(edge_count, 0), total)
    return gen_simple(n, edge_count, k, rng)


def edge_probability(n, c, k):
    """p = ck / C(n-1, k-1), giving cn expected edges in H_{n,p,k}."""
    return min(1.0, c * k / math.comb(n - 1, k - 1))


def gen_from_degrees(degrees, k, seed):
    """
    H_{d,k}: a uniformly random k-matching of clones, contracted to vertices.

    Vertex v gets d(v) clones; all clones are shuffled and grouped in
    consecutive blocks of k. The D mod k leftover clones stay unmatched.

    Returns:
        (Hypergraph with multiset_edges True, DegreeSequence of the given degrees)
    """
    if k < 2:
        raise ValueError(f"gen_from_degrees: k must be >= 2, got {k}")
    degrees = np.asarray(degrees, dtype=np.int64)
    if degrees.size and degrees.min() < 0:
        raise ValueError("gen_from_degrees: degrees must be non-negative")
    rng = make_rng(seed)

    n = int(degrees.size)
    clones = np.repeat(np.arange(n, dtype=np.int64), degrees)
    rng.shuffle(clones)
    total = int(clones.size)
    unmatched = total % k
    edges = clones[:total - unmatched].reshape(-1, k)

    graph = Hypergraph(n=n, k=k, edges=edges, multiset_edges=True)
    return graph, DegreeSequence(degrees=degrees, total=total, unmatched_clones=unmatched)


def gen_poisson_cloning(n, lam, k, seed):
    """Poisson cloning model: i.i.d. Poisson(lam) degrees, then gen_from_degrees."""
    if lam < 0:
        raise ValueError(f"gen_poisson_cloning: lambda must be >= 0, got {lam}")
    rng = make_rng(seed)
    degrees = rng.poisson(lam, size=n).astype(np.int64)
    return gen_from_degrees(degrees, k, rng)


def gen_truncated_core_model(n2, Lambda, k, seed):
    """
    Core model: i.i.d. 2-truncated Poisson(Lambda) degrees, then gen_from_degrees.

    Degrees below 2 are redrawn until every vertex has degree >= 2.
    """
    if Lambda <= 0:
        raise ValueError(f"gen_truncated_core_model: Lambda must be positive, got {Lambda}")
    if n2 < 1:
        raise ValueError(f"gen_truncated_core_model: n2 must be >= 1, got {n2}")
    rng = make_rng(seed)
    degrees = rng.poisson(Lambda, size=n2).astype(np.int64)
    low = degrees < 2
    while low.any():
        degrees[low] = rng.poisson(Lambda, size=int(low.sum()))
        low = degrees < 2
    return gen_from_degrees(degrees, k, rng)


# =============================================================================
# Structural Queries
# =============================================================================

def degree_sequence(H):
    """Incidence counts per vertex (with multiplicity); total = k * m."""
    degrees = np.bincount(H.edges.ravel(), minlength=H.n).astype(np.int64)
    return DegreeSequence(degrees=degrees, total=int(degrees.sum()))


def peel_core(H, rng=None):
    """
    2-core: the maximum subgraph with minimum degree at least 2.

    Repeatedly deletes a vertex with fewer than 2 incidences together with
    every edge containing it. Linear time with incidence lists and a work
    queue. With rng given, vertices are taken from the queue in random order
    (the core does not depend on the order).

    Returns:
        CoreSubgraph; empty when nothing survives.
    """
    n, m, k = H.n, H.m, H.k
    flat = H.edges.ravel()
    counts = np.bincount(flat, minlength=n)
    degree = counts.tolist()
    # incidences sorted by vertex: edge ids of vertex v are edge_of[starts[v]:starts[v+1]]
    edge_of = (np.argsort(flat, kind="stable") // k).tolist()
    starts = np.concatenate(([0], np.cumsum(counts))).tolist()
    rows = H.edges.tolist()

    vertex_alive = [True] * n
    edge_alive = [True] * m
    queued = [d < 2 for d in degree]
    queue = [v for v in range(n) if queued[v]]
    picker = make_rng(rng) if rng is not None else None

    while queue:
        if picker is not None:
            i = int(picker.integers(len(queue)))
            queue[i], queue[-1] = queue[-1], queue[i]
        v = queue.pop()
        vertex_alive[v] = False
        for pos in range(starts[v], starts[v + 1]):
            e = edge_of[pos]
            if not edge_alive[e]:
                continue
            edge_alive[e] = False
            for u in rows[e]:
                degree[u] -= 1
                if vertex_alive[u] and not queued[u] and degree[u] < 2:
                    queued[u] = True
                    queue.append(u)

    vertices = np.flatnonzero(np.array(vertex_alive, dtype=bool)) if n else np.zeros(0, np.int64)
    edge_indices = np.flatnonzero(np.array(edge_alive, dtype=bool)) if m else np.zeros(0, np.int64)
    return CoreSubgraph(vertices=vertices, edge_indices=edge_indices,
                        n2=int(vertices.size), m2=int(edge_indices.size))


def core_hypergraph(H, core):
    """The core's edges as a Hypergraph on the parent's vertex set."""
    return Hypergraph(n=H.n, k=H.k, edges=H.edges[core.edge_indices],
                      multiset_edges=H.multiset_edges)


def induced_edge_count(H, U):
    """e_U: number of edges with every vertex in U."""
    if H.m == 0:
        return 0
    members = np.zeros(H.n, dtype=bool)
    members[list(U)] = True
    return int(members[H.edges].all(axis=1).sum())


def subset_density(H, U):
    """
    Exact density e_U / |U| of the subgraph induced by U.

    Raises:
        ValueError for an empty U.
    """
    U = set(int(v) for v in U)
    if not U:
        raise ValueError("subset_density: U must be non-empty")
    return Fraction(induced_edge_count(H, U), len(U))


def duplicate_edge_pairs(H):
    """Number of unordered pairs of edges on the same vertex set."""
    if H.m < 2:
        return 0
    _, counts = np.unique(H.edges, axis=0, return_counts=True)
    return int((counts * (counts - 1) // 2).sum())


# =============================================================================
# Text Format
# =============================================================================

def read_hypergraph(source):
    """
    Read the text hypergraph format.

    Line 1 is "n m k"; then m lines of k space-separated vertex indices,
    ascending within a line. Lines starting with '#' and blank lines are
    ignored. A line that repeats a vertex makes the graph a multiset graph.

    Args:
        source: Path or open text file

    Raises:
        ValueError naming the line number of a malformed line.
    """
    if hasattr(source, "read"):
        lines = source.read().splitlines()
    else:
        with open(source, "r") as f:
            lines = f.read().splitlines()

    header = None
    rows = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            values = [int(tok) for tok in line.split()]
        except ValueError:
            raise ValueError(f"line {lineno}: non-integer token in {raw!r}") from None
        if header is None:
            if len(values) != 3:
                raise ValueError(f"line {lineno}: header must be 'n m k', got {raw!r}")
            header = values
            continue
        if len(values) != header[2]:
            raise ValueError(f"line {lineno}: expected {header[2]} vertices, got {len(values)}")
        if values != sorted(values):
            raise ValueError(f"line {lineno}: vertices must be ascending")
        rows.append(values)

    if header is None:
        raise ValueError("empty hypergraph file: missing 'n m k' header")
    n, m, k = header
    if len(rows) != m:
        raise ValueError(f"header declares {m} edges, found {len(rows)}")

    edges = np.array(rows, dtype=np.int64).reshape(-1, k)
    multiset = bool(edges.size) and bool((np.diff(edges, axis=1) == 0).any())
    return Hypergraph(n=n, k=k, edges=edges, multiset_edges=multiset)


def write_hypergraph(H, target):
    """Write H in the text format to a path or open text file."""
    lines = [f"{H.n} {H.m} {H.k}"]
    lines.extend(" ".join(str(v) for v in row) for row in H.edges.tolist())
    text = "\n".join(lines) + "\n"
    if hasattr(target, "write"):
        target.write(text)
    else:
        with open(target, "w") as f:
            f.write(text)
