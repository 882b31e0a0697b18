"""Deterministic graph builders used by experiments, demos, and tests."""

from __future__ import annotations

import numpy as np

from .graph import Graph


def path_graph(num_vertices: int) -> Graph:
    """Path on `num_vertices` vertices (num_vertices - 1 edges)."""
    return Graph.from_edges(num_vertices, ((i, i + 1) for i in range(num_vertices - 1)))


def cycle_graph(num_vertices: int) -> Graph:
    if num_vertices < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    edges = [(i, i + 1) for i in range(num_vertices - 1)] + [(0, num_vertices - 1)]
    return Graph.from_edges(num_vertices, edges)


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((i, j) for i in range(n) for j in range(i + 1, n)))


def disjoint_edges(m: int) -> Graph:
    """m disjoint edges; the down-up walk on this graph is the Bernoulli-Laplace chain."""
    return Graph.from_edges(2 * m, ((2 * i, 2 * i + 1) for i in range(m)))


def empty_graph(n: int = 0) -> Graph:
    return Graph(n, ())


def random_gnp(n: int, p: float, seed: int) -> Graph:
    """Erdos-Renyi G(n, p), deterministic per seed."""
    rng = np.random.default_rng(seed)
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return Graph.from_edges(n, edges)


def random_regular(n: int, d: int, seed: int, max_tries: int = 1000) -> Graph:
    """Random d-regular graph via the pairing model with rejection."""
    if (n * d) % 2 or d >= n:
        raise ValueError(f"no {d}-regular graph on {n} vertices")
    rng = np.random.default_rng(seed)
    stubs = np.repeat(np.arange(n), d)
    for _ in range(max_tries):
        perm = rng.permutation(stubs)
        pairs = {(min(a, b), max(a, b)) for a, b in zip(perm[::2], perm[1::2])}
        if len(pairs) == n * d // 2 and all(a != b for a, b in pairs):
            return Graph.from_edges(n, pairs)
    raise RuntimeError(f"failed to sample a {d}-regular graph in {max_tries} tries")


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def prism_graph() -> Graph:
    """Triangular prism: two triangles joined by a perfect matching."""
    tri1 = [(0, 1), (1, 2), (0, 2)]
    tri2 = [(3, 4), (4, 5), (3, 5)]
    rungs = [(0, 3), (1, 4), (2, 5)]
    return Graph.from_edges(6, tri1 + tri2 + rungs)


def cube_graph() -> Graph:
    """3-dimensional hypercube."""
    edges = [(i, i ^ (1 << b)) for i in range(8) for b in range(3) if i < i ^ (1 << b)]
    return Graph.from_edges(8, edges)
