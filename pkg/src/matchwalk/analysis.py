"""Exact state-space analytics for the down-up chain on small instances.

The transition matrix is stored exactly: every off-diagonal entry is either 0
or 1/(k m), so the matrix is kept as integer proposal counts over the common
denominator k m.  Eigenvalue work happens in floating point with symmetric
solvers and residual checks; everything else stays rational.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np
import scipy.sparse as sp
from scipy.linalg import eigh
from scipy.sparse.csgraph import connected_components

from .errors import NonErgodicError, StateSpaceTooLargeError
from .graph import Graph
from .matching import Matching, _enumerate_masks, ids_of_mask

DEFAULT_STATE_CAP = 20_000


@dataclass
class TransitionMatrix:
    """Exact down-up transition matrix over the enumerated state space.

    `counts[i, j]` is the number of (e, e') proposals moving state i to state
    j; the transition probability is counts / denom with denom = k * m.  The
    stationary distribution is uniform.
    """

    graph: Graph
    k: int
    states: tuple[Matching, ...]
    counts: sp.csr_matrix
    denom: int

    @property
    def size(self) -> int:
        return len(self.states)

    @cached_property
    def masks(self) -> tuple[int, ...]:
        return tuple(s.mask for s in self.states)

    @cached_property
    def state_index(self) -> dict[int, int]:
        return {mask: i for i, mask in enumerate(self.masks)}

    def prob(self, i: int, j: int) -> Fraction:
        return Fraction(int(self.counts[i, j]), self.denom)

    @cached_property
    def pi(self) -> np.ndarray:
        return np.full(self.size, 1.0 / self.size)

    def pi_exact(self, i: int = 0) -> Fraction:
        return Fraction(1, self.size)

    def dense(self) -> np.ndarray:
        return self.counts.toarray().astype(np.float64) / self.denom


def build_transition_matrix(graph: Graph, k: int,
                            max_states: int = DEFAULT_STATE_CAP) -> TransitionMatrix:
    """Exact transition matrix of the down-up walk on size-k matchings."""
    if k < 1:
        raise ValueError("the chain needs k >= 1")
    masks = _enumerate_masks(graph, k, budget=max_states)
    if not masks:
        raise StateSpaceTooLargeError(
            f"no matchings of size {k}: empty state space", count=0)
    index = {mask: i for i, mask in enumerate(masks)}
    m = graph.m
    conflicts = graph.edge_conflicts
    denom = k * m
    rows, cols, data = [], [], []
    for i, mask in enumerate(masks):
        accepted = 0
        for e in ids_of_mask(mask):
            removed = mask & ~(1 << e)
            for ep in range(m):
                if ep == e or (conflicts[ep] & removed):
                    continue
                j = index[removed | (1 << ep)]
                rows.append(i)
                cols.append(j)
                data.append(1)
                accepted += 1
        rows.append(i)
        cols.append(i)
        data.append(denom - accepted)
    counts = sp.csr_matrix((data, (rows, cols)), shape=(len(masks), len(masks)), dtype=np.int64)
    states = tuple(Matching.from_mask(graph, mask) for mask in masks)
    return TransitionMatrix(graph, k, states, counts, denom)


def check_ergodicity(transition: TransitionMatrix):
    """Connectivity of the exchange graph, with the component partition.

    The chain always has positive diagonal (the proposal e' = e is rejected),
    so aperiodicity is automatic and ergodicity reduces to connectivity.
    Returns (is_ergodic, components) where components is a tuple of sorted
    state-index tuples.
    """
    coo = transition.counts.tocoo()
    off = coo.row != coo.col
    offdiag = sp.coo_matrix((coo.data[off], (coo.row[off], coo.col[off])), shape=coo.shape)
    n_comp, labels = connected_components(offdiag.tocsr(), directed=False)
    parts: list[list[int]] = [[] for _ in range(n_comp)]
    for i, lab in enumerate(labels):
        parts[lab].append(i)
    components = tuple(tuple(p) for p in sorted(parts))
    return n_comp == 1, components


@dataclass
class SpectrumReport:
    alpha: float
    lambda2: float | None
    lambda_min: float | None
    residual_inf: float
    trivial: bool  # single-state space, gap 1 by convention


def spectrum(transition: TransitionMatrix) -> SpectrumReport:
    """Symmetric eigensolve of P with an explicit residual check."""
    if transition.size == 1:
        return SpectrumReport(alpha=1.0, lambda2=None, lambda_min=None,
                              residual_inf=0.0, trivial=True)
    dense = transition.dense()
    if (abs(transition.counts - transition.counts.T) > 0).nnz:
        raise AssertionError("transition counts not symmetric; chain not reversible?")
    values, vectors = eigh(dense)
    lambda2 = float(values[-2])
    lambda_min = float(values[0])
    residual = 0.0
    for idx in (-2, 0):
        v = vectors[:, idx]
        residual = max(residual, float(np.abs(dense @ v - values[idx] * v).max()))
    if residual > 1e-9:
        raise AssertionError(f"eigensolver residual {residual:.3e} exceeds 1e-9")
    return SpectrumReport(alpha=1.0 - lambda2, lambda2=lambda2,
                          lambda_min=lambda_min, residual_inf=residual, trivial=False)


def spectral_gap(transition: TransitionMatrix) -> float:
    """alpha = 1 - lambda_2: the optimal Poincare constant of the chain."""
    return spectrum(transition).alpha


def dirichlet_form(transition: TransitionMatrix, f, g) -> float:
    """(1/2) sum_xy pi(x) P(x,y) (f(x)-f(y)) (g(x)-g(y))."""
    f = np.asarray(f, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    if f.shape != (transition.size,) or g.shape != (transition.size,):
        raise ValueError("vectors must be indexed by the state space")
    coo = transition.counts.tocoo()
    off = coo.row != coo.col
    r, c, d = coo.row[off], coo.col[off], coo.data[off]
    total = float(np.sum(d * (f[r] - f[c]) * (g[r] - g[c])))
    return 0.5 * total / (transition.size * transition.denom)


def variance(transition: TransitionMatrix, f) -> float:
    f = np.asarray(f, dtype=np.float64)
    return float(np.mean(f * f) - np.mean(f) ** 2)


def tv_distance(mu, nu):
    """Total variation distance (1/2) sum |mu - nu|; exact on Fractions."""
    if len(mu) != len(nu):
        raise ValueError("distributions have different lengths")
    if any(isinstance(a, Fraction) for a in (*mu, *nu)):
        return sum(abs(Fraction(a) - Fraction(b)) for a, b in zip(mu, nu)) / 2
    mu = np.asarray(mu, dtype=np.float64)
    nu = np.asarray(nu, dtype=np.float64)
    return float(0.5 * np.abs(mu - nu).sum())


def _max_tv_to_uniform(power: np.ndarray) -> float:
    n = power.shape[0]
    return float(0.5 * np.abs(power - 1.0 / n).sum(axis=1).max())


def mixing_time(transition: TransitionMatrix, epsilon: float = 0.25,
                max_steps: int = 10**6) -> int:
    """Smallest t with max_x TV(P^t(x, .), pi) < epsilon.

    Exact matrix powering in float64, using the fact that the worst-case
    total variation distance is non-increasing in t: find an upper bound by
    repeated squaring, then binary search, assembling P^t from the cached
    squarings.
    """
    epsilon = float(epsilon)
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    ergodic, components = check_ergodicity(transition)
    if not ergodic:
        raise NonErgodicError(
            f"chain is not ergodic: {len(components)} components", components)
    if transition.size == 1:
        return 0
    dense = transition.dense()
    if _max_tv_to_uniform(np.eye(transition.size)) < epsilon:
        return 0
    squarings = [dense]  # squarings[i] = P^(2^i)
    t = 1
    current = dense
    while _max_tv_to_uniform(current) >= epsilon:
        if 2 * t > max_steps:
            raise RuntimeError(f"mixing time exceeds max_steps={max_steps}")
        current = current @ current
        squarings.append(current)
        t *= 2

    def power(exponent: int) -> np.ndarray:
        result = None
        bit = 0
        while exponent:
            if exponent & 1:
                block = squarings[bit]
                result = block if result is None else result @ block
            exponent >>= 1
            bit += 1
        return result

    lo, hi = t // 2, t  # d(lo) >= eps > d(hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _max_tv_to_uniform(power(mid)) < epsilon:
            hi = mid
        else:
            lo = mid
    return hi


def mixing_time_bound(transition: TransitionMatrix) -> float:
    """The inverse-gap bound alpha^{-1} log(1/min_x pi(x)) on the 1/4 mixing time."""
    alpha = spectral_gap(transition)
    if alpha <= 0:
        return math.inf
    return math.log(transition.size) / alpha
