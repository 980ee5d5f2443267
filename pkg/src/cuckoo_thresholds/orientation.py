#!/usr/bin/env python3
"""
Orientability of k-graphs: can every item (edge) get its own location (vertex)?

max_matching solves this on the bipartite item-location graph with
scipy's Hopcroft-Karp. The brute-force oracles enumerate vertex subsets of
small graphs to find over-dense (Hall-violating) and 1-dense sets, which by
Hall's theorem characterise orientability exactly.
"""

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from cuckoo_thresholds.hypergraph import induced_edge_count
from cuckoo_thresholds.sim_utils import MAX_ENUMERATION_VERTICES


# Subsets examined per vectorised block
SUBSET_CHUNK = 1 << 18

KIND_OVER_DENSE = "over-dense"
KIND_EXACTLY_DENSE = "exactly-dense"


# =============================================================================
# Domain Types
# =============================================================================

@dataclass(frozen=True)
class Assignment:
    """Map from edge index to the vertex (location) its item occupies."""
    edge_to_vertex: dict

    def validate(self, H):
        """
        Check that every assigned vertex belongs to its edge and that no
        vertex is used twice.

        Raises:
            ValueError describing the first violation.
        """
        used = {}
        for edge, vertex in self.edge_to_vertex.items():
            if vertex not in H.edges[edge]:
                raise ValueError(f"edge {edge} assigned to vertex {vertex} outside the edge")
            if vertex in used:
                raise ValueError(f"vertex {vertex} assigned to edges {used[vertex]} and {edge}")
            used[vertex] = edge
        return True


@dataclass(frozen=True)
class DenseWitness:
    """A vertex set U with e_U > |U| (over-dense) or e_U = |U| (exactly-dense)."""
    vertex_set: frozenset
    e_U: int
    kind: str

    def verify(self, H):
        """Recompute e_U from H and check it against the stored count and kind."""
        e_U = induced_edge_count(H, self.vertex_set)
        size = len(self.vertex_set)
        expected_kind = KIND_OVER_DENSE if e_U > size else KIND_EXACTLY_DENSE
        return e_U == self.e_U and e_U >= size and self.kind == expected_kind


# =============================================================================
# Matching
# =============================================================================

def max_matching(H):
    """
    Maximum matching of items to locations.

    Builds the m x n bipartite incidence matrix (item i adjacent to its k
    locations) and runs Hopcroft-Karp, O(E sqrt(V)).

    Returns:
        (size, Assignment) where the Assignment covers exactly `size` edges.

    Raises:
        ValueError for multiset edges (cloning-model output). Use
        degree_sequence / peel_core for those graphs.
    """
    if H.multiset_edges:
        raise ValueError(
            "max_matching: graph has multiset edges (cloning model); items must choose "
            "distinct locations. Use the core and degree diagnostics for cloning graphs."
        )
    if H.m == 0:
        return 0, Assignment(edge_to_vertex={})

    rows = np.repeat(np.arange(H.m), H.k)
    cols = H.edges.ravel()
    data = np.ones(rows.size, dtype=np.int8)
    graph = csr_matrix((data, (rows, cols)), shape=(H.m, H.n))
    # perm_type="column": entry i is the column (location) matched to row (item) i
    match = maximum_bipartite_matching(graph, perm_type="column")

    edge_to_vertex = {int(e): int(v) for e, v in enumerate(match) if v >= 0}
    return len(edge_to_vertex), Assignment(edge_to_vertex=edge_to_vertex)


def is_orientable(H):
    """True iff every edge can be assigned a distinct vertex it contains."""
    size, _ = max_matching(H)
    return size == H.m


# =============================================================================
# Brute-Force Subset Oracles
# =============================================================================

def _edge_masks(H):
    if H.m == 0:
        return np.zeros(0, dtype=np.int64)
    return np.bitwise_or.reduce(np.left_shift(np.int64(1), H.edges), axis=1)


def _check_enumerable(H, name):
    if H.n > MAX_ENUMERATION_VERTICES:
        raise ValueError(
            f"{name}: subset enumeration limited to n <= {MAX_ENUMERATION_VERTICES}, got n={H.n}"
        )


def _smallest_subset(n, accept, min_size=1, max_size=None):
    """
    Smallest subset mask (ties: lowest mask) for which accept() holds.

    accept(subsets, sizes) receives an int64 array of subset masks and their
    popcounts and returns a boolean array.
    """
    max_size = n if max_size is None else max_size
    best = None
    for start in range(1, 1 << n, SUBSET_CHUNK):
        subsets = np.arange(start, min(start + SUBSET_CHUNK, 1 << n), dtype=np.int64)
        sizes = np.bitwise_count(subsets).astype(np.int64)
        ok = (sizes >= min_size) & (sizes <= max_size)
        if not ok.any():
            continue
        ok &= accept(subsets, sizes)
        if not ok.any():
            continue
        hits = np.flatnonzero(ok)
        pick = hits[np.argmin(sizes[hits])]
        candidate = (int(sizes[pick]), int(subsets[pick]))
        if best is None or candidate < best:
            best = candidate
    return None if best is None else best[1]


def _mask_to_set(mask):
    return frozenset(v for v in range(mask.bit_length()) if mask >> v & 1)


def _internal_edge_counts(subsets, masks):
    counts = np.zeros(subsets.size, dtype=np.int64)
    for mask in masks:
        counts += (subsets & mask) == mask
    return counts


def brute_force_dense_subset(H, strict):
    """
    Search every non-empty vertex subset for a dense one.

    Args:
        H: Hypergraph with n <= 24
        strict: True looks for e_U > |U| (a Hall violation), False for e_U >= |U|

    Returns:
        DenseWitness of minimum |U|, or None.
    """
    _check_enumerable(H, "brute_force_dense_subset")
    masks = _edge_masks(H)
    if masks.size == 0:
        return None

    def accept(subsets, sizes):
        internal = _internal_edge_counts(subsets, masks)
        return internal > sizes if strict else internal >= sizes

    mask = _smallest_subset(H.n, accept)
    if mask is None:
        return None
    U = _mask_to_set(mask)
    e_U = induced_edge_count(H, U)
    kind = KIND_OVER_DENSE if e_U > len(U) else KIND_EXACTLY_DENSE
    return DenseWitness(vertex_set=U, e_U=e_U, kind=kind)


def check_maximal_1dense_properties(H, U):
    """
    Structural signature of an inclusion-maximal 1-dense set:
    e_U = |U| and no edge meets U in exactly k - 1 vertices.
    """
    U = set(int(v) for v in U)
    if not U:
        return False
    if induced_edge_count(H, U) != len(U):
        return False
    if H.m == 0:
        return True
    members = np.zeros(H.n, dtype=bool)
    members[list(U)] = True
    hits = members[H.edges].sum(axis=1)
    return not bool((hits == H.k - 1).any())


def bad_subset_search_3graph(H, max_size):
    """
    Find a bad set of a 3-graph: e_U = |U| and no edge with exactly 2 vertices in U.

    Only sizes 4..max_size are searched; smaller sets cannot be bad in a
    simple 3-graph.

    Returns:
        frozenset of vertices (smallest such set), or None.

    Raises:
        ValueError if H is not a 3-graph or has more than 24 vertices.
    """
    if H.k != 3:
        raise ValueError(f"bad_subset_search_3graph: requires k = 3, got k = {H.k}")
    _check_enumerable(H, "bad_subset_search_3graph")
    masks = _edge_masks(H)
    if masks.size < 4:
        return None

    def accept(subsets, sizes):
        internal = _internal_edge_counts(subsets, masks)
        ok = internal == sizes
        for mask in masks:
            ok &= np.bitwise_count(subsets & mask) != 2
        return ok

    mask = _smallest_subset(H.n, accept, min_size=4, max_size=max_size)
    return None if mask is None else _mask_to_set(mask)
