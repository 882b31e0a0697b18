"""Barrier gadgets: disjoint 9-edge paths plus a core with a perfect matching.

The gadget fixes a matching M made of four interior alternating edges per
path block plus a perfect matching of the core, so |M| = (1 - delta) m*.
Pinning a random subset of M and looking at the residual graph exhibits two
phenomena at desk scale: the pinned slack identity
m*(residual) = |M| - |tau| + X_tau (X_tau counts untouched path blocks), and
with a C4-union core, loss of ergodicity of the down-up walk once every path
block is hit while some C4 survives untouched.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .analysis import build_transition_matrix, check_ergodicity
from .errors import CertificationError, StateSpaceTooLargeError
from .graph import Graph, as_fraction
from .matching import Matching, maximum_matching
from .walk import trial_rng

C4_UNION = "c4-union"
ARBITRARY_PM = "arbitrary-with-PM"

_P9_VERTICES = 10
_P9_INTERIOR = (1, 3, 5, 7)  # positions of the interior alternating edges, 0-based


@dataclass(frozen=True)
class GadgetGraph:
    graph: Graph
    p9_blocks: tuple[tuple[int, int], ...]   # vertex ranges [start, end)
    core_blocks: tuple[tuple[int, int], ...]
    matching: Matching                       # the reference matching M
    delta: Fraction
    core_kind: str

    @property
    def n(self) -> int:
        return self.graph.n

    @cached_property
    def block_edges(self) -> tuple[tuple[int, ...], ...]:
        """M-edge ids per P9 block, aligned with `p9_blocks`."""
        return self._edges_per_range(self.p9_blocks)

    @cached_property
    def core_matching_edges(self) -> tuple[tuple[int, ...], ...]:
        """M-edge ids per core block."""
        return self._edges_per_range(self.core_blocks)

    def _edges_per_range(self, ranges) -> tuple[tuple[int, ...], ...]:
        per_block: list[list[int]] = [[] for _ in ranges]
        for eid in self.matching.edge_ids:
            u, _v = self.graph.edges[eid]
            for b, (s, e) in enumerate(ranges):
                if s <= u < e:
                    per_block[b].append(eid)
                    break
        return tuple(tuple(b) for b in per_block)


@dataclass(frozen=True)
class Pinning:
    """A subset of the reference matching forced into the configuration."""

    edge_ids: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "edge_ids", tuple(sorted(set(self.edge_ids))))

    def __len__(self) -> int:
        return len(self.edge_ids)


def build_gadget(n: int, delta, core_kind: str = C4_UNION) -> GadgetGraph:
    """Gadget on n vertices: delta*n/2 path blocks plus a perfectly matched core.

    Requires delta in (0, 1/5) and n making all block counts integral; the
    error for a non-integral n names the nearest valid size.
    """
    delta = as_fraction(delta)
    if not Fraction(0) < delta < Fraction(1, 5):
        raise ValueError(f"delta must lie in (0, 1/5), got {delta}")
    blocks = Fraction(delta * n, 2)
    core_vertices = (1 - 5 * delta) * n
    if blocks.denominator != 1 or core_vertices.denominator != 1 or (
            core_kind == C4_UNION and Fraction(core_vertices, 4).denominator != 1) or (
            core_kind == ARBITRARY_PM and Fraction(core_vertices, 2).denominator != 1):
        step = _valid_step(delta, core_kind)
        nearest = max(step, step * round(n / step))
        raise ValueError(
            f"n={n} does not give integral block counts for delta={delta}; "
            f"nearest valid n is {nearest}")
    blocks = int(blocks)
    core_vertices = int(core_vertices)
    if blocks < 1:
        raise ValueError(f"n={n} too small: no path blocks")

    edges: list[tuple[int, int]] = []
    m_pairs: list[tuple[int, int]] = []
    p9_ranges = []
    v = 0
    for _ in range(blocks):
        start = v
        for i in range(_P9_VERTICES - 1):
            edges.append((start + i, start + i + 1))
            if i in _P9_INTERIOR:
                m_pairs.append((start + i, start + i + 1))
        p9_ranges.append((start, start + _P9_VERTICES))
        v += _P9_VERTICES

    core_ranges = []
    if core_kind == C4_UNION:
        for _ in range(core_vertices // 4):
            s = v
            edges.extend([(s, s + 1), (s + 1, s + 2), (s + 2, s + 3), (s, s + 3)])
            m_pairs.extend([(s, s + 1), (s + 2, s + 3)])
            core_ranges.append((s, s + 4))
            v += 4
    elif core_kind == ARBITRARY_PM:
        # One even cycle through all core vertices, matched alternately.
        s = v
        if core_vertices >= 3:
            edges.extend((s + i, s + i + 1) for i in range(core_vertices - 1))
            edges.append((s, s + core_vertices - 1))
        elif core_vertices == 2:
            edges.append((s, s + 1))
        m_pairs.extend((s + i, s + i + 1) for i in range(0, core_vertices - 1, 2))
        if core_vertices:
            core_ranges.append((s, s + core_vertices))
        v += core_vertices
    else:
        raise ValueError(f"unknown core kind {core_kind!r}")

    graph = Graph.from_edges(n, edges)
    matching = Matching.from_vertex_pairs(graph, m_pairs)
    gadget = GadgetGraph(graph, tuple(p9_ranges), tuple(core_ranges),
                         matching, delta, core_kind)
    if 2 * len(matching) != n - int(delta * n):
        raise AssertionError("reference matching size does not match the block arithmetic")
    return gadget


def _valid_step(delta: Fraction, core_kind: str) -> int:
    core_div = 4 if core_kind == C4_UNION else 2
    candidate = 1
    while True:
        if (Fraction(delta * candidate, 2).denominator == 1
                and Fraction((1 - 5 * delta) * candidate, core_div).denominator == 1):
            return candidate
        candidate += 1


def residual_graph(graph: Graph, tau: Pinning) -> tuple[Graph, tuple[int, ...]]:
    """Induced subgraph on the vertices untouched by the pinning.

    Returns (residual, kept) where kept[i] is the original id of residual
    vertex i.  Raises if tau is not a matching in `graph`.
    """
    Matching(graph, tau.edge_ids)  # validates disjointness and range
    removed = set()
    for eid in tau.edge_ids:
        u, v = graph.edges[eid]
        removed.update((u, v))
    kept = tuple(v for v in range(graph.n) if v not in removed)
    relabel = {old: new for new, old in enumerate(kept)}
    edges = [(relabel[u], relabel[v]) for u, v in graph.edges
             if u not in removed and v not in removed]
    return Graph.from_edges(len(kept), edges), kept


def random_pinning(gadget: GadgetGraph, size: int, seed: int, trial: int = 0) -> Pinning:
    """Uniform random subset of the reference matching, deterministic per (seed, trial)."""
    m_ids = gadget.matching.edge_ids
    if not 0 <= size <= len(m_ids):
        raise ValueError(f"pinning size {size} out of range 0..{len(m_ids)}")
    rng = trial_rng(seed, trial)
    chosen = rng.choice(len(m_ids), size=size, replace=False)
    return Pinning(tuple(m_ids[i] for i in chosen))


@dataclass
class SlackStats:
    x_tau: int
    m_star_residual: int
    ratio: Fraction
    degenerate: bool  # full pinning: the 0/0 ratio is reported as 0


def slack_statistics(gadget: GadgetGraph, tau: Pinning) -> SlackStats:
    """Untouched-block count, residual matching number, and the slack ratio.

    Asserts the identity m*(residual) = |M| - |tau| + X_tau exactly; its
    failure would falsify the gadget analysis, so it is a hard error.
    """
    tau_set = set(tau.edge_ids)
    if not tau_set <= set(gadget.matching.edge_ids):
        raise ValueError("pinning is not a subset of the gadget matching")
    x_tau = sum(1 for block in gadget.block_edges if not tau_set & set(block))
    residual, _kept = residual_graph(gadget.graph, tau)
    m_star = len(maximum_matching(residual))
    expected = len(gadget.matching) - len(tau) + x_tau
    if m_star != expected:
        raise CertificationError(
            f"slack identity violated: m*(residual) = {m_star}, "
            f"|M| - |tau| + X_tau = {expected}")
    if m_star == 0:
        return SlackStats(x_tau, 0, Fraction(0), degenerate=True)
    ratio = 1 - Fraction(len(gadget.matching) - len(tau), m_star)
    return SlackStats(x_tau, m_star, ratio, degenerate=False)


def expected_avoidance(gadget: GadgetGraph, tau_size: int) -> Fraction:
    """Exact expected number of untouched path blocks under a uniform pinning.

    Each block holds 4 matching edges, so the expectation is hypergeometric:
    blocks * C(|M|-4, s) / C(|M|, s).
    """
    m_size = len(gadget.matching)
    if not 0 <= tau_size <= m_size:
        raise ValueError(f"tau_size {tau_size} out of range")
    blocks = len(gadget.p9_blocks)
    per_block = 4
    return Fraction(blocks * math.comb(m_size - per_block, tau_size),
                    math.comb(m_size, tau_size))


@dataclass
class TrialCertificate:
    trial: int
    hits_every_block: bool
    has_untouched_c4: bool
    fired: bool
    witness_states: tuple[tuple[int, ...], tuple[int, ...]] | None
    exact_nonergodic: bool | None  # filled only when cross-checked


@dataclass
class ErgodicityReport:
    trials: int
    fired: int
    freq_nonergodic: float
    ci_low: float
    ci_high: float
    certificates: list[TrialCertificate]

    def to_json(self) -> dict:
        return {
            "trials": self.trials, "fired": self.fired,
            "freq_nonergodic": self.freq_nonergodic,
            "ci95": [self.ci_low, self.ci_high],
            "certificates": [
                {"trial": c.trial, "hits_every_block": c.hits_every_block,
                 "has_untouched_c4": c.has_untouched_c4, "fired": c.fired,
                 "exact_nonergodic": c.exact_nonergodic}
                for c in self.certificates],
        }


def ergodicity_experiment(gadget: GadgetGraph, tau_size: int, trials: int, seed: int,
                          cross_check_states: int = 0) -> ErgodicityReport:
    """Structural non-ergodicity certificates over random pinnings.

    A trial fires when the pinning touches every path block (so the target
    size is the residual matching number and per-component sizes are frozen)
    while missing some core C4 (whose two perfect matchings then sit in
    different components of the chain).  The witness states are M minus the
    pinning, and the same with the untouched C4 flipped; both are edge-id
    sets of the gadget graph whose edges all survive in the residual.

    When `cross_check_states` > 0 and the residual state space fits, the
    certificate is validated against exact connectivity of the residual
    chain, including that the two witnesses land in different components.
    """
    if gadget.core_kind != C4_UNION:
        raise ValueError("the ergodicity experiment needs the c4-union core")
    certificates: list[TrialCertificate] = []
    fired_count = 0
    graph = gadget.graph
    m_ids = set(gadget.matching.edge_ids)
    for trial in range(trials):
        tau = random_pinning(gadget, tau_size, seed, trial)
        tau_set = set(tau.edge_ids)
        hits_every = all(tau_set & set(block) for block in gadget.block_edges)
        untouched = [blk for blk, eids in zip(gadget.core_blocks, gadget.core_matching_edges)
                     if not tau_set & set(eids)]
        fired = hits_every and bool(untouched)
        witness = None
        if fired:
            base = tuple(sorted(m_ids - tau_set))
            s = untouched[0][0]
            drop = {graph.edge_id(s, s + 1), graph.edge_id(s + 2, s + 3)}
            add = {graph.edge_id(s + 1, s + 2), graph.edge_id(s, s + 3)}
            witness = (base, tuple(sorted((set(base) - drop) | add)))
        exact = None
        if cross_check_states:
            exact = _exact_nonergodic(gadget, tau, witness, cross_check_states)
            if fired and exact is False:
                raise CertificationError(
                    f"trial {trial}: certificate fired but the exact chain is ergodic")
        certificates.append(TrialCertificate(trial, hits_every, bool(untouched),
                                             fired, witness, exact))
        fired_count += fired
    freq = fired_count / trials if trials else 0.0
    half = 1.96 * math.sqrt(max(freq * (1 - freq), 1e-12) / trials) if trials else 0.0
    return ErgodicityReport(trials, fired_count, freq,
                            max(0.0, freq - half), min(1.0, freq + half),
                            certificates)


def _exact_nonergodic(gadget: GadgetGraph, tau: Pinning, witness,
                      state_cap: int) -> bool | None:
    """Exact connectivity of the residual chain, or None when it is too large.

    With a fired certificate, also checks the two witness states really sit
    in distinct components.
    """
    residual, kept = residual_graph(gadget.graph, tau)
    k_res = len(gadget.matching) - len(tau)
    if k_res < 1:
        return None
    try:
        transition = build_transition_matrix(residual, k_res, max_states=state_cap)
    except StateSpaceTooLargeError:
        return None
    ergodic, components = check_ergodicity(transition)
    if witness is not None:
        relabel = {old: new for new, old in enumerate(kept)}
        labels = {}
        for which, ids in enumerate(witness):
            mask = 0
            for eid in ids:
                u, v = gadget.graph.edges[eid]
                mask |= 1 << residual.edge_id(relabel[u], relabel[v])
            state = transition.state_index[mask]
            labels[which] = next(ci for ci, comp in enumerate(components) if state in comp)
        if labels[0] == labels[1]:
            raise CertificationError("witness states share a component")
    return not ergodic
