"""Signed pairwise influence matrices of the uniform distribution on size-k
matchings, and their spectral / row-sum independence constants.

The ground set is the edge set of the graph.  Entry (i, j) is
P[j in S | i in S] - P[j in S | i not in S], computed by exact counting over
the enumerated state space.  Rows whose marginal is 0 or 1 have no defined
conditionals; they are zeroed and reported.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .graph import Graph
from .matching import _enumerate_masks, ids_of_mask


@dataclass
class InfluenceMatrix:
    """Exact influence matrix over the edge ground set.

    `exact` holds the rational entries; `entries` is the float view used for
    eigenvalue work.  `marginal_counts[i]` is the number of states containing
    edge i, out of `omega_size`.
    """

    graph: Graph
    k: int
    omega_size: int
    exact: tuple[tuple[Fraction, ...], ...]
    marginal_counts: tuple[int, ...]
    pair_counts: dict[tuple[int, int], int]
    degenerate_rows: frozenset[int]

    @property
    def ground_set_size(self) -> int:
        return self.graph.m

    @property
    def entries(self) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in self.exact])


def influence_matrix(graph: Graph, k: int, state_budget: int | None = 100_000) -> InfluenceMatrix:
    """Exact influence matrix of the uniform distribution on size-k matchings."""
    masks = _enumerate_masks(graph, k, budget=state_budget)
    if not masks:
        raise ValueError(f"no matchings of size {k}: empty state space")
    m = graph.m
    omega = len(masks)
    marginal = [0] * m
    pair: dict[tuple[int, int], int] = {}
    for mask in masks:
        ids = list(ids_of_mask(mask))
        for a in ids:
            marginal[a] += 1
        for ai in range(len(ids)):
            for bi in range(ai + 1, len(ids)):
                key = (ids[ai], ids[bi])
                pair[key] = pair.get(key, 0) + 1

    def pair_count(i: int, j: int) -> int:
        return pair.get((i, j) if i < j else (j, i), 0)

    degenerate = frozenset(i for i in range(m) if marginal[i] in (0, omega))
    rows = []
    for i in range(m):
        if i in degenerate:
            rows.append(tuple(Fraction(0) for _ in range(m)))
            continue
        row = []
        for j in range(m):
            if j == i:
                row.append(Fraction(0))
                continue
            both = pair_count(i, j)
            given_i = Fraction(both, marginal[i])
            given_not_i = Fraction(marginal[j] - both, omega - marginal[i])
            row.append(given_i - given_not_i)
        rows.append(tuple(row))
    return InfluenceMatrix(graph, k, omega, tuple(rows), tuple(marginal),
                           pair, degenerate)


def spectral_independence_constant(matrix: InfluenceMatrix) -> float:
    """Largest real part of the spectrum (the matrix is not symmetric in general)."""
    m = matrix.ground_set_size
    if m == 0:
        return 0.0
    entries = matrix.entries
    values, vectors = np.linalg.eig(entries)
    idx = int(np.argmax(values.real))
    residual = float(np.abs(entries @ vectors[:, idx] - values[idx] * vectors[:, idx]).max())
    if residual > 1e-8:
        raise AssertionError(f"eigensolver residual {residual:.3e} too large")
    return float(values[idx].real)


def influence_spectrum(matrix: InfluenceMatrix) -> np.ndarray:
    if matrix.ground_set_size == 0:
        return np.zeros(0, dtype=complex)
    return np.linalg.eigvals(matrix.entries)


def linf_independence_constant(matrix: InfluenceMatrix) -> Fraction:
    """Maximum absolute row sum, exact.  Always at least the spectral constant."""
    if matrix.ground_set_size == 0:
        return Fraction(0)
    return max(sum(abs(v) for v in row) for row in matrix.exact)
