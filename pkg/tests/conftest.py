"""Shared fixtures: small hand-checkable k-graphs."""

from itertools import combinations

import pytest
from hypothesis import HealthCheck, settings

from cuckoo_thresholds.hypergraph import Hypergraph

settings.register_profile(
    "default",
    max_examples=200,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture
def single_edge():
    """One edge {0,1,2} on three vertices."""
    return Hypergraph(n=3, k=3, edges=[[0, 1, 2]])


@pytest.fixture
def double_edge():
    """The edge {0,1,2} twice."""
    return Hypergraph(n=3, k=3, edges=[[0, 1, 2], [0, 1, 2]])


@pytest.fixture
def quadruple_edge():
    """Four copies of {0,1,2}: four items competing for three slots."""
    return Hypergraph(n=3, k=3, edges=[[0, 1, 2]] * 4)


@pytest.fixture
def k4_3graph():
    """All four 3-subsets of {0,1,2,3}: density exactly 1, orientable."""
    return Hypergraph(n=4, k=3, edges=list(combinations(range(4), 3)))
