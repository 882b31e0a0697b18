"""Shared fixtures and independent oracles.

The oracles here deliberately avoid the library's own algorithms: matchings
come from filtering edge combinations, simple paths from vertex-permutation
scans, and augmenting paths from the path oracle plus an alternation filter.
"""

from __future__ import annotations

import itertools

import pytest
from hypothesis import strategies as st

from matchwalk.graph import Graph


def brute_matchings(graph: Graph, k: int) -> list[tuple[int, ...]]:
    """All size-k matchings as sorted edge-id tuples, by combination filtering."""
    out = []
    for combo in itertools.combinations(range(graph.m), k):
        vertices = set()
        ok = True
        for eid in combo:
            u, v = graph.edges[eid]
            if u in vertices or v in vertices:
                ok = False
                break
            vertices.update((u, v))
        if ok:
            out.append(combo)
    return out


def brute_matching_number(graph: Graph) -> int:
    for k in range(graph.n // 2, -1, -1):
        if brute_matchings(graph, k):
            return k
    return 0


def brute_simple_paths(graph: Graph, max_edges: int) -> set[tuple[int, ...]]:
    """Canonical simple paths with 1..max_edges edges, by permutation scan."""
    found = set()
    for size in range(2, min(graph.n, max_edges + 1) + 1):
        for combo in itertools.combinations(range(graph.n), size):
            for perm in itertools.permutations(combo):
                if perm[0] > perm[-1]:
                    continue
                if all(graph.has_edge(a, b) for a, b in zip(perm, perm[1:])):
                    found.add(perm)
    return found


def brute_augmenting_paths(graph: Graph, matched_edge_ids, max_edges: int) -> set[tuple[int, ...]]:
    """Canonical augmenting paths up to max_edges edges, via the path oracle."""
    matched = set(matched_edge_ids)
    covered = set()
    for eid in matched:
        covered.update(graph.edges[eid])
    result = set()
    for path in brute_simple_paths(graph, max_edges):
        if len(path) % 2:
            continue  # augmenting paths have an odd number of edges
        if path[0] in covered or path[-1] in covered:
            continue
        good = True
        for i, (a, b) in enumerate(zip(path, path[1:])):
            eid = graph.edge_id(a, b)
            if (eid in matched) != (i % 2 == 1):
                good = False
                break
        if good:
            result.add(path)
    return result


@st.composite
def small_graphs(draw, max_n: int = 8, min_edges: int = 0):
    n = draw(st.integers(min_value=2, max_value=max_n))
    all_pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(all_pairs), unique=True, min_size=min_edges,
                           max_size=len(all_pairs)))
    return Graph.from_edges(n, chosen)


@pytest.fixture(scope="session")
def c4_plus_edge() -> Graph:
    return Graph.from_edges(6, [(0, 1), (1, 2), (2, 3), (0, 3), (4, 5)])
