"""Canonical exchange-path flows for the down-up chain.

Every ordered pair of states routes demand 1/|Omega|^2 through an explicit
family of simple paths in the exchange graph.  For a "good" pair (symmetric
difference free of the cycle-only pattern) the family is indexed by a pair of
permutations of the augmenting paths in the difference, each path carrying
weight 1/(|Omega|^2 (j!)^2).  A "bad" pair (cycles present, no odd paths)
first boosts x along a short augmenting path and drops one edge to reach a
good pair, then reuses that pair's family.

The module computes the flow's cost rho (worst normalized per-transition
load) and length ell exactly, and verifies the counting certificates that
bound the load through any single transition.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .analysis import TransitionMatrix, build_transition_matrix, spectrum
from .errors import (CertificationError, NoAugmentingPathError,
                     PathBudgetExceededError)
from .graph import Graph, ShortPathCatalog, as_fraction, short_path_catalog
from .matching import (Matching, _decompose_diff, _enumerate_masks,
                       find_short_augmenting_path, ids_of_mask, mask_of_ids)

GOOD = "good"
BAD = "bad"

DEFAULT_PATH_BUDGET = 10_000_000
DEFAULT_STATE_BUDGET = 100_000


def classify_pair(x: Matching, y: Matching) -> str:
    """'bad' iff x xor y contains a cycle and no odd paths, else 'good'."""
    if x.graph != y.graph:
        raise ValueError("matchings live on different graphs")
    if len(x) != len(y):
        raise ValueError("pair classification needs matchings of equal size")
    return _classify_masks(x.graph, x.mask, y.mask)


def _classify_masks(graph: Graph, xm: int, ym: int) -> str:
    evens, cycles, x_aug, y_aug = _decompose_diff(graph, xm, ym)
    return BAD if cycles and not (x_aug or y_aug) else GOOD


@dataclass(frozen=True)
class CanonicalPath:
    """A simple path in the exchange graph, one legal exchange per step.

    `phases[i]` records the processing stage that produced step i: "even",
    "xaug", "cycle", "yaug", "pair", or "prefix" for the bad-pair boost.
    """

    states: tuple[Matching, ...]
    phases: tuple[str, ...]
    weight: Fraction | None = None

    @property
    def q_minus(self) -> Matching:
        return self.states[0]

    @property
    def q_plus(self) -> Matching:
        return self.states[-1]

    @property
    def length(self) -> int:
        return len(self.states) - 1


def _path_edge_ids(graph: Graph, vertices) -> list[int]:
    return [graph.edge_id(a, b) for a, b in zip(vertices, vertices[1:])]


def _even_pairs(graph: Graph, vertices, is_add, phase: str, plan: list):
    """Append the pairwise exchange steps for an alternating even path.

    Orients the path so its first edge is an add-edge, then emits
    (add, remove) pairs walking along the path.
    """
    eids = _path_edge_ids(graph, vertices)
    if not is_add(eids[0]):
        eids.reverse()
    if len(eids) % 2 or not is_add(eids[0]) or is_add(eids[1]):
        raise CertificationError(f"component {vertices} is not an alternating even path")
    for i in range(0, len(eids), 2):
        plan.append((eids[i], eids[i + 1], phase))


class _PairPlanner:
    """Per-component step fragments for a good pair, shared across permutations.

    Decomposes x xor y once; `plan(sigma_x, sigma_y)` then assembles the
    exchange plan for one permutation choice by concatenating fragments.
    Stages: even paths in canonical order; the first x-augmenting path held
    open at its distinguished endpoint; each cycle opened by consuming the
    pending edge and punctured at its distinguished vertex; the first
    y-augmenting path closed with the pending edge; remaining augmenting
    paths processed in pairs.
    """

    __slots__ = ("j", "even_steps", "x_frags", "y_frags", "cycle_data")

    def __init__(self, graph: Graph, xm: int, ym: int, parts=None):
        if parts is None:
            parts = _decompose_diff(graph, xm, ym)
        evens, cycles, x_augs, y_augs = parts
        j = len(x_augs)
        if len(y_augs) != j:
            raise CertificationError("unbalanced augmenting paths for equal-size matchings")
        if cycles and j == 0:
            raise ValueError("cycle-only difference: not a good pair")
        self.j = j
        in_y = lambda eid: (ym >> eid) & 1
        in_x = lambda eid: (xm >> eid) & 1

        self.even_steps: list[tuple[int, int, str]] = []
        for seq in evens:
            _even_pairs(graph, seq, in_y, "even", self.even_steps)

        # Per augmenting path: the edge at the distinguished endpoint plus the
        # remainder processed as an even path.
        self.x_frags = []
        for p in x_augs:
            steps: list[tuple[int, int, str]] = []
            if len(p) > 2:
                _even_pairs(graph, p[1:], in_y, "xaug", steps)
            self.x_frags.append((graph.edge_id(p[0], p[1]), steps))
        self.y_frags = []
        for p in y_augs:
            steps = []
            if len(p) > 2:
                _even_pairs(graph, p[1:], in_y, "yaug", steps)
            self.y_frags.append((graph.edge_id(p[0], p[1]), steps))

        self.cycle_data = []
        for cyc in cycles:
            e_first = graph.edge_id(cyc[0], cyc[1])
            e_last = graph.edge_id(cyc[0], cyc[-1])
            e_x, e_y = (e_first, e_last) if in_x(e_first) else (e_last, e_first)
            if not in_x(e_x) or not in_y(e_y):
                raise CertificationError("cycle does not alternate at its distinguished vertex")
            steps = []
            _even_pairs(graph, cyc[1:], in_y, "cycle", steps)
            self.cycle_data.append((e_x, e_y, steps))

    def plan(self, sigma_x, sigma_y) -> list[tuple[int, int, str]]:
        j = self.j
        plan = list(self.even_steps)
        if j == 0:
            return plan
        pending, frag = self.x_frags[sigma_x[0]]
        plan.extend(frag)
        for e_x, e_y, steps in self.cycle_data:
            plan.append((pending, e_x, "cycle"))
            plan.extend(steps)
            pending = e_y
        anchor, frag = self.y_frags[sigma_y[0]]
        plan.append((pending, anchor, "yaug"))
        plan.extend(frag)
        for i in range(1, j):
            e, frag_x = self.x_frags[sigma_x[i]]
            ep, frag_y = self.y_frags[sigma_y[i]]
            plan.extend(step[:2] + ("pair",) for step in frag_x)
            plan.append((e, ep, "pair"))
            plan.extend(step[:2] + ("pair",) for step in frag_y)
        return plan


def _good_plan(graph: Graph, xm: int, ym: int, sigma_x, sigma_y) -> list[tuple[int, int, str]]:
    """Exchange plan from x to y for one choice of augmenting-path orders."""
    planner = _PairPlanner(graph, xm, ym)
    j = planner.j
    if sorted(sigma_x) != list(range(j)) or sorted(sigma_y) != list(range(j)):
        raise ValueError(f"permutations must cover range({j})")
    return planner.plan(tuple(sigma_x), tuple(sigma_y))


def _apply_plan(graph: Graph, start_mask: int, plan) -> list[int]:
    """Execute an exchange plan, checking every step is a legal transition."""
    conflicts = graph.edge_conflicts
    states = [start_mask]
    current = start_mask
    for add, remove, _phase in plan:
        if not (current >> remove) & 1:
            raise CertificationError(f"step removes absent edge {remove}")
        if (current >> add) & 1:
            raise CertificationError(f"step adds already-present edge {add}")
        current = (current & ~(1 << remove)) | (1 << add)
        if conflicts[add] & (current & ~(1 << add)):
            raise CertificationError(
                f"exchange (+{add}, -{remove}) leaves the matching state space")
        states.append(current)
    if len(set(states)) != len(states):
        raise CertificationError("constructed path repeats a state: not simple")
    return states


def good_path(x: Matching, y: Matching, sigma_x, sigma_y,
              weight: Fraction | None = None) -> CanonicalPath:
    """The canonical x -> y path for one permutation pair of a good pair."""
    if classify_pair(x, y) != GOOD:
        raise ValueError("good_path requires a good pair")
    graph = x.graph
    plan = _good_plan(graph, x.mask, y.mask, tuple(sigma_x), tuple(sigma_y))
    masks = _apply_plan(graph, x.mask, plan)
    if masks[-1] != y.mask:
        raise CertificationError("construction did not terminate at y")
    states = tuple(Matching.from_mask(graph, m) for m in masks)
    return CanonicalPath(states, tuple(step[2] for step in plan), weight)


def _prefix_plan(graph: Graph, xm: int, ym: int, aug_path: tuple[int, ...]):
    """Plan the boost x -> x+ -> x~ for a bad pair, given x's short augmenting path.

    Returns (plan, chosen_edge, x_tilde_mask).  The dropped edge is the
    lowest-index edge of x+ whose removal makes the pair good.
    """
    in_x = lambda eid: (xm >> eid) & 1
    plan: list[tuple[int, int, str]] = []
    pending = graph.edge_id(aug_path[0], aug_path[1])
    if len(aug_path) > 2:
        _even_pairs(graph, aug_path[1:], lambda eid: not in_x(eid), "prefix", plan)
    xplus = xm ^ mask_of_ids(_path_edge_ids(graph, aug_path))
    for e in ids_of_mask(xplus):
        x_tilde = xplus & ~(1 << e)
        if x_tilde != xm and _classify_masks(graph, x_tilde, ym) == GOOD:
            if e != pending:
                plan.append((pending, e, "prefix"))
            return plan, e, x_tilde
    raise CertificationError(
        "no edge of the boosted matching yields a good pair; "
        "this falsifies the bad-pair construction")


def bad_pair_prefix(x: Matching, y: Matching, delta):
    """Canonical short-augmenting-path boost for a bad pair.

    Returns (p, e, x_tilde): the augmenting path as a vertex tuple, the
    dropped edge index, and the landing matching with (x_tilde, y) good.
    """
    if classify_pair(x, y) != BAD:
        raise ValueError("bad_pair_prefix requires a bad pair")
    graph = x.graph
    p = find_short_augmenting_path(graph, x, delta)
    plan, e, x_tilde = _prefix_plan(graph, x.mask, y.mask, p)
    _apply_plan(graph, x.mask, plan)
    return p, e, Matching.from_mask(graph, x_tilde)


@dataclass
class FlowSummary:
    """Exact cost/length summary of the constructed flow.

    `per_transition_flow` maps each directed transition (state index pair) to
    the exact total weight of paths stepping through it; `rho` is the maximum
    load normalized by pi(x) P(x,y) = 1/(|Omega| k m), and `ell` the longest
    positive-flow path.
    """

    graph: Graph
    k: int
    delta: Fraction
    omega_size: int
    states: tuple[Matching, ...]
    per_transition_flow: dict[tuple[int, int], Fraction]
    rho: Fraction
    ell: int
    pair_demand_check: bool
    total_paths: int
    max_j: int
    catalog_size: int
    worst_transition: tuple[int, int] | None


class _FlowContext:
    """Shared machinery for one (graph, k, delta) flow construction."""

    def __init__(self, graph: Graph, k: int, delta,
                 state_budget: int = DEFAULT_STATE_BUDGET):
        self.graph = graph
        self.k = k
        self.delta = as_fraction(delta)
        self.masks = _enumerate_masks(graph, k, budget=state_budget)
        self.index = {m: i for i, m in enumerate(self.masks)}
        self.catalog = short_path_catalog(graph, self.delta)
        self._aug_cache: dict[int, tuple[int, ...]] = {}
        self._aug_id_cache: dict[int, int] = {}
        self._prefix_cache: dict[tuple[int, int], tuple] = {}

    @property
    def omega(self) -> int:
        return len(self.masks)

    def aug_path(self, mask: int) -> tuple[int, ...]:
        """Canonical short augmenting path for the matching `mask` (memoized)."""
        path = self._aug_cache.get(mask)
        if path is None:
            matching = Matching.from_mask(self.graph, mask)
            path = find_short_augmenting_path(self.graph, matching, self.delta)
            self._aug_cache[mask] = path
        return path

    def aug_path_id(self, mask: int) -> int:
        pid = self._aug_id_cache.get(mask)
        if pid is None:
            pid = self.catalog.id_of(self.aug_path(mask))
            self._aug_id_cache[mask] = pid
        return pid

    def _prefix_for(self, xm: int, ym: int):
        key = (xm, ym)
        if key not in self._prefix_cache:
            self._prefix_cache[key] = _prefix_plan(self.graph, xm, ym, self.aug_path(xm))
        return self._prefix_cache[key]

    def pair_planner(self, xm: int, ym: int):
        """Decompose a pair once.

        Returns (kind, planner, prefix_states, prefix_phases) where for bad
        pairs the planner belongs to the landing pair (x_tilde, y) and
        prefix_states realizes x -> x_tilde.
        """
        parts = _decompose_diff(self.graph, xm, ym)
        _evens, cycles, x_augs, _y_augs = parts
        if cycles and not x_augs:
            plan, _e, x_tilde = self._prefix_for(xm, ym)
            prefix_states = _apply_plan(self.graph, xm, plan)
            prefix_phases = [step[2] for step in plan]
            planner = _PairPlanner(self.graph, x_tilde, ym)
            return BAD, planner, prefix_states, prefix_phases
        return GOOD, _PairPlanner(self.graph, xm, ym, parts), None, None

    def iter_pair_paths(self, xm: int, ym: int, pair=None):
        """Yield (mask_states, phases) for every path of the pair, in canonical order."""
        if pair is None:
            pair = self.pair_planner(xm, ym)
        kind, planner, prefix_states, prefix_phases = pair
        start = xm if kind == GOOD else prefix_states[-1]
        j = planner.j
        for sigma_x in itertools.permutations(range(j)):
            for sigma_y in itertools.permutations(range(j)):
                plan = planner.plan(sigma_x, sigma_y)
                states = _apply_plan(self.graph, start, plan)
                phases = [step[2] for step in plan]
                if prefix_states is not None:
                    states = prefix_states + states[1:]
                    phases = prefix_phases + phases
                    if len(set(states)) != len(states):
                        raise CertificationError("composed bad-pair path is not simple")
                if states[-1] != ym:
                    raise CertificationError("path does not end at its target state")
                yield states, phases


def build_flow(graph: Graph, k: int, delta, *,
               path_budget: int = DEFAULT_PATH_BUDGET,
               state_budget: int = DEFAULT_STATE_BUDGET) -> FlowSummary:
    """Construct the full flow and accumulate exact per-transition loads.

    All arithmetic is integer: each path of a pair with j augmenting-path
    pairs carries weight 1/(|Omega|^2 (j!)^2), accumulated as the integer
    (J!)^2 / (j!)^2 over the common denominator |Omega|^2 (J!)^2, where J is
    the largest j encountered (loads are rescaled on the fly when J grows).
    Conservation is exact by construction and asserted per pair.
    """
    ctx = _FlowContext(graph, k, delta, state_budget)
    loads: dict[tuple[int, int], int] = {}
    ell = 0
    total_paths = 0
    max_j = 0
    worst_pair = None
    scale = 1  # (max_j!)^2
    for xi, xm in enumerate(ctx.masks):
        for yi, ym in enumerate(ctx.masks):
            if xm == ym:
                total_paths += 1
                continue
            pair = ctx.pair_planner(xm, ym)
            j = pair[1].j
            n_paths = math.factorial(j) ** 2
            total_paths += n_paths
            if j > max_j:
                max_j, worst_pair = j, (xm, ym)
                new_scale = math.factorial(j) ** 2
                factor = new_scale // scale
                for key in loads:
                    loads[key] *= factor
                scale = new_scale
            if total_paths > path_budget:
                raise PathBudgetExceededError(
                    f"flow path family exceeds budget {path_budget}",
                    worst_pair=worst_pair, largest_j=max_j)
            weight = scale // n_paths
            generated = 0
            for states, _phases in ctx.iter_pair_paths(xm, ym, pair):
                generated += 1
                length = len(states) - 1
                if length > ell:
                    ell = length
                prev = xi
                for mask in states[1:]:
                    cur = ctx.index[mask]
                    key = (prev, cur)
                    loads[key] = loads.get(key, 0) + weight
                    prev = cur
            if generated != n_paths or generated * weight != scale:
                raise CertificationError(
                    f"pair demand not conserved: {generated} paths of weight {weight}")

    denom = ctx.omega ** 2 * scale
    km = k * graph.m
    per_transition = {t: Fraction(v, denom) for t, v in loads.items()}
    if loads:
        worst = max(loads, key=lambda t: (loads[t], (-t[0], -t[1])))
        rho = Fraction(loads[worst] * ctx.omega * km, denom)
    else:
        worst, rho = None, Fraction(0)
    return FlowSummary(
        graph=graph, k=k, delta=ctx.delta, omega_size=ctx.omega,
        states=tuple(Matching.from_mask(graph, m) for m in ctx.masks),
        per_transition_flow=per_transition, rho=rho, ell=ell,
        pair_demand_check=True, total_paths=total_paths, max_j=max_j,
        catalog_size=len(ctx.catalog), worst_transition=worst)


def iter_flow_paths(graph: Graph, k: int, delta, *,
                    state_budget: int = DEFAULT_STATE_BUDGET):
    """Lazily yield every weighted path of the flow as a CanonicalPath.

    Skips the zero-length paths that carry each state's self demand.
    """
    ctx = _FlowContext(graph, k, delta, state_budget)
    omega_sq = ctx.omega ** 2
    for xm in ctx.masks:
        for ym in ctx.masks:
            if xm == ym:
                continue
            pair = ctx.pair_planner(xm, ym)
            weight = Fraction(1, omega_sq * math.factorial(pair[1].j) ** 2)
            for states, phases in ctx.iter_pair_paths(xm, ym, pair):
                yield CanonicalPath(
                    tuple(Matching.from_mask(graph, m) for m in states),
                    tuple(phases), weight)


def good_path_encoding(path: CanonicalPath, step: int, delta):
    """Label a good path at one of its transitions.

    The residue m = q- xor q+ xor (z | z') is checked to be a matching one
    edge short of the walk's size; it is completed into a state by its
    canonical short augmenting path p.  Returns (completed matching, p).
    The label recovers q- xor q+ exactly: m xor (z | z') undoes the overlay.
    """
    graph = path.q_minus.graph
    z = path.states[step].mask
    z2 = path.states[step + 1].mask
    k = len(path.states[step])
    m_mask = path.q_minus.mask ^ path.q_plus.mask ^ (z | z2)
    residue = _residue_matching(graph, m_mask, k)
    p = find_short_augmenting_path(graph, residue, delta)
    completed = m_mask ^ mask_of_ids(_path_edge_ids(graph, p))
    return Matching.from_mask(graph, completed), tuple(p)


def _residue_matching(graph: Graph, m_mask: int, k: int) -> Matching:
    if m_mask.bit_count() != k - 1:
        raise CertificationError(
            f"encoding residue has {m_mask.bit_count()} edges, expected {k - 1}")
    try:
        return Matching.from_mask(graph, m_mask)
    except ValueError as exc:
        raise CertificationError(f"encoding residue is not a matching: {exc}") from None


@dataclass
class EncodingReport:
    """Outcome of the per-transition counting certificates.

    All comparisons are exact rational inequalities.  `violations` lists any
    failures with the offending transition and class.
    """

    omega_size: int
    catalog_size: int
    transition_count: int
    max_class_count: int
    class_bound_ok: bool
    paths_g_ok: bool
    paths_b_ok: bool
    paths_a_ok: bool
    total_bound_ok: bool
    boost_classes_consistent: bool
    reuse_multiplicity_ok: bool
    violations: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (self.class_bound_ok and self.paths_g_ok and self.paths_b_ok
                and self.paths_a_ok and self.total_bound_ok
                and self.boost_classes_consistent and self.reuse_multiplicity_ok)


def verify_encoding_bounds(graph: Graph, k: int, delta, *,
                           path_budget: int = DEFAULT_PATH_BUDGET,
                           state_budget: int = DEFAULT_STATE_BUDGET,
                           return_flow: bool = False):
    """Re-run the path family with full instrumentation and check every bound.

    With `return_flow` the result is (report, FlowSummary), sharing the single
    generation pass; otherwise just the report.

    Per directed transition t, the paths through t are split by which stage
    uses t: good-pair paths, bad-pair paths inside their good suffix, and
    bad-pair paths inside their boost prefix.  Checks, all exact:

    - each labelled class of good paths puts at most 2 (j!)^2 paths through t
      (j taken from the class's own endpoint difference);
    - sum over good paths through t      <= 2 |P| / |Omega|;
    - sum over reused suffixes through t <= 2 |P|^2 |E| / |Omega|;
    - sum over boost prefixes through t  <= |P| / |Omega|;
    - total load through t <= (3 |P| + 2 |P|^2 |E|) / |Omega|;
    - every boost class shares both endpoints, with load at most 1/|Omega|^2;
    - a good suffix is reused by at most |P| |E| bad pairs.
    """
    ctx = _FlowContext(graph, k, delta, state_budget)
    graph_m = graph.m
    omega = ctx.omega
    cat = ctx.catalog

    # Integer loads per directed transition, split by stage.
    load_g: dict[tuple[int, int], int] = {}
    load_b: dict[tuple[int, int], int] = {}
    load_a: dict[tuple[int, int], int] = {}
    # (t, residue mask, aug path id) -> [count, j of the class]
    class_counts: dict[tuple[int, int, int, int], list[int]] = {}
    # (t, terminal state, aug path id) -> [load, start state]
    boost_classes: dict[tuple[int, int, int, int], list[int]] = {}
    # (t, suffix identity) -> count of bad pairs reusing it
    reuse_counts: dict[tuple[int, int, int, int, int], int] = {}

    violations: list[str] = []
    from .matching import is_matching_mask
    total_paths = 0
    max_j = 0
    ell = 0
    scale = 1
    for xi, xm in enumerate(ctx.masks):
        for yi, ym in enumerate(ctx.masks):
            if xm == ym:
                total_paths += 1
                continue
            pair = ctx.pair_planner(xm, ym)
            kind, planner, prefix_states, _pp = pair
            j = planner.j
            n_paths = math.factorial(j) ** 2
            total_paths += n_paths
            if j > max_j:
                max_j = j
                new_scale = n_paths
                factor = new_scale // scale
                for table in (load_g, load_b, load_a):
                    for key in table:
                        table[key] *= factor
                for entry in boost_classes.values():
                    entry[0] *= factor
                scale = new_scale
            if total_paths > path_budget:
                raise PathBudgetExceededError(
                    f"flow path family exceeds budget {path_budget}", largest_j=max_j)
            weight = scale // n_paths
            if kind == GOOD:
                prefix_len = 0
                aug_id = None
                xt_index = None
            else:
                prefix_len = len(prefix_states) - 1
                aug_id = ctx.aug_path_id(xm)
                xt_index = ctx.index[prefix_states[-1]]
            serial = 0
            for states, _phases in ctx.iter_pair_paths(xm, ym, pair):
                if len(states) - 1 > ell:
                    ell = len(states) - 1
                endpoint_diff = states[0] ^ states[-1]
                prev, prev_mask = xi, xm
                for pos, mask in enumerate(states[1:]):
                    cur = ctx.index[mask]
                    t = (prev, cur)
                    if kind == GOOD:
                        load_g[t] = load_g.get(t, 0) + weight
                        m_mask = endpoint_diff ^ (prev_mask | mask)
                        if m_mask.bit_count() != k - 1 or not is_matching_mask(graph, m_mask):
                            raise CertificationError(
                                f"encoding residue at {t} is not a (k-1)-matching")
                        key = (prev, cur, m_mask, ctx.aug_path_id(m_mask))
                        entry = class_counts.setdefault(key, [0, j])
                        entry[0] += 1
                        if entry[1] != j:
                            violations.append(f"class {key} mixes j={entry[1]} and j={j}")
                    elif pos >= prefix_len:
                        load_b[t] = load_b.get(t, 0) + weight
                        rkey = (prev, cur, xt_index, yi, serial)
                        reuse_counts[rkey] = reuse_counts.get(rkey, 0) + 1
                    else:
                        load_a[t] = load_a.get(t, 0) + weight
                        bkey = (prev, cur, yi, aug_id)
                        entry = boost_classes.setdefault(bkey, [0, xi])
                        entry[0] += weight
                        if entry[1] != xi:
                            violations.append(
                                f"boost class {bkey} has two start states {entry[1]}, {xi}")
                    prev, prev_mask = cur, mask
                serial += 1
    denom = omega ** 2 * scale

    # Exact inequality checks via cross-multiplication.
    p_size = len(cat)
    m_e = graph_m
    max_class = 0
    class_ok = True
    for key, (count, j_class) in class_counts.items():
        max_class = max(max_class, count)
        if count > 2 * math.factorial(j_class) ** 2:
            class_ok = False
            violations.append(
                f"class {key}: {count} paths exceeds 2 (j!)^2 with j={j_class}")

    def check_loads(loads: dict, bound_num: int, label: str) -> bool:
        # load/denom <= bound_num/omega  <=>  load * omega <= bound_num * denom
        ok = True
        for t, load in loads.items():
            if load * omega > bound_num * denom:
                ok = False
                violations.append(f"{label} bound fails at transition {t}")
        return ok

    g_ok = check_loads(load_g, 2 * p_size, "good-load")
    b_ok = check_loads(load_b, 2 * p_size * p_size * m_e, "reused-suffix-load")
    a_ok = check_loads(load_a, p_size, "boost-load")

    total_ok = True
    all_t = set(load_g) | set(load_b) | set(load_a)
    ft_num = 3 * p_size + 2 * p_size * p_size * m_e
    for t in all_t:
        total = load_g.get(t, 0) + load_b.get(t, 0) + load_a.get(t, 0)
        if total * omega > ft_num * denom:
            total_ok = False
            violations.append(f"total per-transition bound fails at {t}")

    boost_ok = True
    for bkey, (load, _start) in boost_classes.items():
        # load/denom <= 1/omega^2  <=>  load * omega^2 <= denom
        if load * omega * omega > denom:
            boost_ok = False
            violations.append(f"boost class {bkey} exceeds the pair demand")
    boost_consistent = not any("two start states" in v for v in violations)

    reuse_ok = True
    for rkey, count in reuse_counts.items():
        if count > p_size * m_e:
            reuse_ok = False
            violations.append(f"suffix at {rkey} reused by {count} > |P||E| bad pairs")

    report = EncodingReport(
        omega_size=omega, catalog_size=p_size, transition_count=len(all_t),
        max_class_count=max_class, class_bound_ok=class_ok,
        paths_g_ok=g_ok, paths_b_ok=b_ok, paths_a_ok=a_ok,
        total_bound_ok=total_ok and boost_ok,
        boost_classes_consistent=boost_consistent,
        reuse_multiplicity_ok=reuse_ok, violations=violations)
    if not return_flow:
        return report

    totals: dict[tuple[int, int], int] = dict(load_g)
    for table in (load_b, load_a):
        for t, v in table.items():
            totals[t] = totals.get(t, 0) + v
    km = k * graph.m
    per_transition = {t: Fraction(v, denom) for t, v in totals.items()}
    if totals:
        worst = max(totals, key=lambda t: (totals[t], (-t[0], -t[1])))
        rho = Fraction(totals[worst] * omega * km, denom)
    else:
        worst, rho = None, Fraction(0)
    flow = FlowSummary(
        graph=graph, k=k, delta=ctx.delta, omega_size=omega,
        states=tuple(Matching.from_mask(graph, m) for m in ctx.masks),
        per_transition_flow=per_transition, rho=rho, ell=ell,
        pair_demand_check=True, total_paths=total_paths, max_j=max_j,
        catalog_size=p_size, worst_transition=worst)
    return report, flow


@dataclass
class CertificateReport:
    """Every certified inequality for one (graph, k, delta) instance."""

    graph_n: int
    graph_m: int
    k: int
    delta: Fraction
    omega_size: int
    catalog_size: int
    rho: Fraction
    ell: int
    alpha: float
    conservation_ok: bool
    transitions_in_chain_ok: bool
    ell_bound_ok: bool          # ell <= 3 |E|
    rho_catalog_bound_ok: bool  # rho <= 3 k |E|^2 |P|^2
    rho_degree_bound_ok: bool   # rho <= 12 k |E|^2 n^2 Delta^(4/delta - 2)
    gap_product_ok: bool        # alpha * rho * ell >= 1 - 1e-8
    inverse_gap_bound_ok: bool  # 1/alpha <= 36 k |E|^3 n^2 Delta^(4/delta - 2)
    worst_transition: tuple[tuple[int, ...], tuple[int, ...]] | None
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "n": self.graph_n, "m": self.graph_m, "k": self.k,
            "delta": str(self.delta), "omega_size": self.omega_size,
            "catalog_size": self.catalog_size,
            "rho": str(self.rho), "ell": self.ell, "alpha": self.alpha,
            "bounds": {
                "thm22": "pass" if self.gap_product_ok else "fail",
                "ell3E": "pass" if self.ell_bound_ok else "fail",
                "flowcost": "pass" if (self.rho_catalog_bound_ok
                                       and self.rho_degree_bound_ok) else "fail",
                "invgap": "pass" if self.inverse_gap_bound_ok else "fail",
            },
            "conservation": "pass" if self.conservation_ok else "fail",
            "worst_transition": ([list(self.worst_transition[0]),
                                  list(self.worst_transition[1])]
                                 if self.worst_transition else None),
            "failures": list(self.failures),
        }


def _degree_power(delta: Fraction, max_degree: int) -> float:
    exponent = Fraction(4) / delta - 2
    if max_degree == 0:
        return 1.0 if exponent == 0 else 0.0
    return float(max_degree) ** float(exponent)


def certify(graph: Graph, k: int, delta, *,
            path_budget: int = DEFAULT_PATH_BUDGET,
            state_budget: int = DEFAULT_STATE_BUDGET,
            flow: FlowSummary | None = None,
            transition: TransitionMatrix | None = None) -> CertificateReport:
    """Build the flow and certify every inequality it implies for the chain.

    Checks, in order: exact flow conservation; path lengths against 3 |E|;
    the exact cost against its catalog and degree bounds; the spectral gap
    against 1/(rho ell) (eigensolver residual at most 1e-9 on the left, exact
    rationals on the right); and the inverse-gap bound.  Pass precomputed
    `flow` or `transition` objects to share work across calls.
    """
    delta = as_fraction(delta)
    if flow is None:
        flow = build_flow(graph, k, delta, path_budget=path_budget,
                          state_budget=state_budget)
    if transition is None:
        transition = build_transition_matrix(graph, k, max_states=state_budget)
    if transition.masks != tuple(s.mask for s in flow.states):
        raise ValueError("flow and transition matrix enumerate different state spaces")

    failures: list[str] = []
    # Every flow transition must be a legal chain transition with P = 1/(km).
    coo = transition.counts.tocoo()
    legal = {(int(r), int(c)) for r, c in zip(coo.row, coo.col) if r != c}
    chain_ok = True
    for t in flow.per_transition_flow:
        if t not in legal:
            chain_ok = False
            failures.append(f"flow uses a non-chain transition {t}")
            break

    spect = spectrum(transition)
    alpha = spect.alpha

    m_e = graph.m
    ell_ok = flow.ell <= 3 * m_e
    if not ell_ok:
        failures.append(f"ell = {flow.ell} exceeds 3 |E| = {3 * m_e}")

    p_size = flow.catalog_size
    rho_cat_ok = flow.rho <= 3 * k * m_e**2 * p_size**2
    if not rho_cat_ok:
        failures.append("rho exceeds 3 k |E|^2 |P|^2")
    degree_term = _degree_power(delta, graph.max_degree)
    rho_deg_ok = float(flow.rho) <= 12 * k * m_e**2 * graph.n**2 * degree_term
    if not rho_deg_ok:
        failures.append("rho exceeds 12 k |E|^2 n^2 Delta^(4/delta - 2)")

    if flow.rho > 0 and flow.ell > 0:
        gap_ok = alpha * float(flow.rho * flow.ell) >= 1.0 - 1e-8
    else:
        gap_ok = flow.omega_size == 1  # single state: empty flow, gap 1 by convention
    if not gap_ok:
        failures.append(
            f"alpha * rho * ell = {alpha * float(flow.rho * flow.ell):.6g} < 1 - 1e-8")

    if alpha > 0:
        inv_ok = 1.0 / alpha <= 36 * k * m_e**3 * graph.n**2 * degree_term
    else:
        inv_ok = False
    if not inv_ok:
        failures.append("1/alpha exceeds 36 k |E|^3 n^2 Delta^(4/delta - 2)")

    if not flow.pair_demand_check:
        failures.append("flow conservation failed")

    worst = None
    if flow.worst_transition is not None:
        a, b = flow.worst_transition
        worst = (flow.states[a].edge_ids, flow.states[b].edge_ids)
    return CertificateReport(
        graph_n=graph.n, graph_m=m_e, k=k, delta=delta,
        omega_size=flow.omega_size, catalog_size=p_size,
        rho=flow.rho, ell=flow.ell, alpha=alpha,
        conservation_ok=flow.pair_demand_check,
        transitions_in_chain_ok=chain_ok,
        ell_bound_ok=ell_ok, rho_catalog_bound_ok=rho_cat_ok,
        rho_degree_bound_ok=rho_deg_ok, gap_product_ok=gap_ok,
        inverse_gap_bound_ok=inv_ok, worst_transition=worst,
        failures=failures)
