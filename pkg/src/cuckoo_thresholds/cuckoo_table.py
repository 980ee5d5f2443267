#!/usr/bin/env python3
"""
A k-ary cuckoo hash table with one item per slot.

Each 64-bit item identifier gets k distinct pseudo-random locations derived
from (table seed, item). Two ways to fill the table:
- insert():        online random-walk insertion with evictions
- build_offline(): all items at once through a maximum matching, which
                   succeeds exactly when an assignment exists
"""

from dataclasses import dataclass, field

import numpy as np

from cuckoo_thresholds.hypergraph import Hypergraph
from cuckoo_thresholds.orientation import max_matching
from cuckoo_thresholds.sim_utils import default_max_steps

ITEM_MASK = (1 << 64) - 1


@dataclass
class InsertResult:
    """Outcome of one insert; steps counts displacements made by the walk."""
    success: bool
    steps: int = 0
    reason: str = ""


@dataclass
class CuckooTable:
    """
    Slots hold item identifiers or None.

    Invariants: a stored item sits in one of its own k locations, no slot holds
    two items, and lookup(x) is true iff x was inserted successfully.
    """
    capacity: int
    k: int
    seed: int
    max_steps: int = None
    slots: list = field(init=False)
    stats: dict = field(init=False)

    def __post_init__(self):
        if self.k < 2:
            raise ValueError(f"CuckooTable: k must be >= 2, got {self.k}")
        if self.capacity < self.k:
            raise ValueError(
                f"CuckooTable: capacity ({self.capacity}) must be at least k ({self.k})"
            )
        if self.max_steps is None:
            self.max_steps = default_max_steps(self.capacity)
        self.slots = [None] * self.capacity
        self.stats = {"inserts": 0, "evictions": 0, "failures": 0, "duplicates": 0}
        self._where = {}
        self._location_cache = {}
        self._walk_rng = np.random.default_rng([self.seed & ITEM_MASK, 0])

    # -------------------------------------------------------------------------
    # Locations
    # -------------------------------------------------------------------------

    def locations(self, item):
        """
        The k distinct slots of an item, in draw order.

        A PCG64 stream seeded with (seed, item) is rejection-sampled until k
        distinct indices in [0, capacity) appear.
        """
        item = int(item) & ITEM_MASK
        cached = self._location_cache.get(item)
        if cached is not None:
            return cached

        rng = np.random.default_rng([self.seed & ITEM_MASK, 1, item])
        chosen = []
        while len(chosen) < self.k:
            slot = int(rng.integers(self.capacity))
            if slot not in chosen:
                chosen.append(slot)
        cached = tuple(chosen)
        self._location_cache[item] = cached
        return cached

    # -------------------------------------------------------------------------
    # Online insertion
    # -------------------------------------------------------------------------

    def insert(self, item):
        """
        Random-walk insertion.

        Takes the lowest-index free location if there is one. Otherwise evicts
        the occupant of a uniformly random location (any of the k), places the
        item there and continues with the evicted item, for at most max_steps
        displacements. When the budget runs out the eviction path is unwound,
        so previously stored items keep their slots and only the new item is
        left out.

        Returns:
            InsertResult; a repeated insert of a stored item is a successful no-op.
        """
        item = int(item) & ITEM_MASK
        if item in self._where:
            self.stats["duplicates"] += 1
            return InsertResult(success=True)

        path = []  # (slot, previous occupant) for every displacement
        current = item
        for step in range(self.max_steps + 1):
            locs = self.locations(current)
            free = [slot for slot in locs if self.slots[slot] is None]
            if free:
                slot = min(free)
                self._place(current, slot)
                self.stats["inserts"] += 1
                self.stats["evictions"] += len(path)
                return InsertResult(success=True, steps=len(path))
            if step == self.max_steps:
                break
            slot = locs[int(self._walk_rng.integers(self.k))]
            evicted = self.slots[slot]
            path.append((slot, evicted))
            self._place(current, slot)
            current = evicted

        for slot, previous in reversed(path):
            self._place(previous, slot)
        self._where.pop(item, None)
        self.stats["failures"] += 1
        return InsertResult(success=False, steps=len(path), reason="steps_exhausted")

    def _place(self, item, slot):
        self.slots[slot] = item
        self._where[item] = slot

    # -------------------------------------------------------------------------
    # Queries
    # -------------------------------------------------------------------------

    def lookup(self, item):
        """Search the k locations of item."""
        item = int(item) & ITEM_MASK
        return any(self.slots[slot] == item for slot in self.locations(item))

    def load_factor(self):
        """Occupied slots / capacity."""
        occupied = sum(1 for entry in self.slots if entry is not None)
        return occupied / self.capacity

    def items(self):
        """Stored identifiers in slot order."""
        return [entry for entry in self.slots if entry is not None]

    def location_hypergraph(self, items):
        """Hypergraph whose edges are the location sets of the given items."""
        edges = [sorted(self.locations(item)) for item in items]
        return Hypergraph(n=self.capacity, k=self.k,
                          edges=np.array(edges, dtype=np.int64).reshape(-1, self.k))


# =============================================================================
# Offline construction
# =============================================================================

def build_offline(capacity, k, seed, items, max_steps=None):
    """
    Place all items at once by maximum matching on their location sets.

    Args:
        capacity: Number of slots n
        k: Choices per item
        seed: Table seed (determines every item's locations)
        items: Item identifiers; repeated identifiers are the same item

    Returns:
        (CuckooTable, success). On failure the table holds the matched subset.
    """
    table = CuckooTable(capacity=capacity, k=k, seed=seed, max_steps=max_steps)
    unique_items = list(dict.fromkeys(int(item) & ITEM_MASK for item in items))
    if not unique_items:
        return table, True

    graph = table.location_hypergraph(unique_items)
    size, assignment = max_matching(graph)
    for edge, slot in assignment.edge_to_vertex.items():
        table._place(unique_items[edge], slot)
    table.stats["inserts"] = size
    table.stats["failures"] = len(unique_items) - size
    return table, size == len(unique_items)


def lookup(table, item):
    return table.lookup(item)


def load_factor(table):
    return table.load_factor()
