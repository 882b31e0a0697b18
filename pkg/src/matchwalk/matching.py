"""Matchings, maximum matching on general graphs, short augmenting paths,
and the canonical symmetric-difference decomposition."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .errors import NoAugmentingPathError, StateSpaceTooLargeError
from .graph import Graph, as_fraction


def ids_of_mask(mask: int):
    """Edge indices set in a bitmask, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of_ids(ids) -> int:
    mask = 0
    for i in ids:
        mask |= 1 << i
    return mask


def is_matching_mask(graph: Graph, mask: int) -> bool:
    vmasks = graph.edge_vertex_masks
    used = 0
    for i in ids_of_mask(mask):
        vm = vmasks[i]
        if used & vm:
            return False
        used |= vm
    return True


@dataclass(frozen=True)
class Matching:
    """A set of pairwise vertex-disjoint edges of `graph`, by edge index."""

    graph: Graph
    edge_ids: tuple[int, ...]

    def __post_init__(self):
        ids = tuple(sorted(set(self.edge_ids)))
        object.__setattr__(self, "edge_ids", ids)
        used = 0
        vmasks = self.graph.edge_vertex_masks
        for i in ids:
            if not 0 <= i < self.graph.m:
                raise ValueError(f"edge index {i} out of range")
            if used & vmasks[i]:
                raise ValueError(f"edges share a vertex at edge {i}: not a matching")
            used |= vmasks[i]

    @classmethod
    def from_mask(cls, graph: Graph, mask: int) -> "Matching":
        return cls(graph, tuple(ids_of_mask(mask)))

    @classmethod
    def from_vertex_pairs(cls, graph: Graph, pairs) -> "Matching":
        return cls(graph, tuple(graph.edge_id(u, v) for u, v in pairs))

    @cached_property
    def mask(self) -> int:
        return mask_of_ids(self.edge_ids)

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(self.graph.edges[i] for i in self.edge_ids)

    @cached_property
    def covered(self) -> frozenset[int]:
        out = set()
        for u, v in self.edges:
            out.add(u)
            out.add(v)
        return frozenset(out)

    def __len__(self) -> int:
        return len(self.edge_ids)

    def __contains__(self, edge_id: int) -> bool:
        return (self.mask >> edge_id) & 1 == 1


def maximum_matching(graph: Graph) -> Matching:
    """Maximum-cardinality matching on a general graph.

    Augmenting-path search with blossom contraction; validated against
    exhaustive enumeration on small graphs in the test suite.
    """
    n = graph.n
    adjacency = graph.adjacency
    mate = [-1] * n
    # Greedy seeding removes most augmentation phases.
    for u, v in graph.edges:
        if mate[u] < 0 and mate[v] < 0:
            mate[u], mate[v] = v, u

    parent = [-1] * n
    base = list(range(n))
    in_tree = [False] * n

    def lowest_common_base(a: int, b: int) -> int:
        seen = [False] * n
        v = a
        while True:
            v = base[v]
            seen[v] = True
            if mate[v] == -1:
                break
            v = parent[mate[v]]
        v = b
        while True:
            v = base[v]
            if seen[v]:
                return v
            v = parent[mate[v]]

    def mark_path(v: int, stem: int, child: int, in_blossom: list[bool]):
        while base[v] != stem:
            in_blossom[base[v]] = True
            in_blossom[base[mate[v]]] = True
            parent[mate[v]] = child
            child = mate[v]
            v = parent[mate[v]]

    def find_augmenting(root: int) -> int:
        for i in range(n):
            parent[i] = -1
            base[i] = i
            in_tree[i] = False
        in_tree[root] = True
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for to in adjacency[v]:
                if base[v] == base[to] or mate[v] == to:
                    continue
                if to == root or (mate[to] != -1 and parent[mate[to]] != -1):
                    # Odd cycle: contract the blossom.
                    stem = lowest_common_base(v, to)
                    in_blossom = [False] * n
                    mark_path(v, stem, to, in_blossom)
                    mark_path(to, stem, v, in_blossom)
                    for i in range(n):
                        if in_blossom[base[i]]:
                            base[i] = stem
                            if not in_tree[i]:
                                in_tree[i] = True
                                queue.append(i)
                elif parent[to] == -1:
                    parent[to] = v
                    if mate[to] == -1:
                        return to
                    in_tree[mate[to]] = True
                    queue.append(mate[to])
        return -1

    for v in range(n):
        if mate[v] == -1:
            end = find_augmenting(v)
            while end != -1:
                prev = parent[end]
                next_end = mate[prev]
                mate[end] = prev
                mate[prev] = end
                end = next_end

    ids = sorted(graph.edge_id(u, mate[u]) for u in range(n) if mate[u] > u)
    return Matching(graph, tuple(ids))


def matching_number(graph: Graph) -> int:
    return len(maximum_matching(graph))


def toggle_path(matching: Matching, vertices) -> Matching:
    """Flip a vertex path against the matching (xor its edges into it)."""
    graph = matching.graph
    mask = matching.mask
    for a, b in zip(vertices, vertices[1:]):
        mask ^= 1 << graph.edge_id(a, b)
    return Matching.from_mask(graph, mask)


def _canonical_path(seq: tuple[int, ...]) -> tuple[int, ...]:
    return seq if seq[0] <= seq[-1] else seq[::-1]


def _short_augmenting_paths(graph: Graph, mask: int, cutoff: int):
    """All simple augmenting paths with at most `cutoff` edges, canonically oriented.

    Branching happens only on the unmatched edges: after stepping to a matched
    vertex the continuation along its matching edge is forced, so the search
    space stays around n * Delta^(cutoff/2).
    """
    mate: dict[int, int] = {}
    for i in ids_of_mask(mask):
        u, v = graph.edges[i]
        mate[u] = v
        mate[v] = u
    adjacency = graph.adjacency
    free = [v for v in range(graph.n) if v not in mate]
    found: set[tuple[int, ...]] = set()

    def extend(path: list[int], visited: set[int]):
        v = path[-1]
        for w in adjacency[v]:
            if w in visited or mate.get(v) == w:
                continue
            # Take the unmatched edge v-w.
            if w not in mate:
                if len(path) <= cutoff:
                    found.add(_canonical_path(tuple(path) + (w,)))
                continue
            u = mate[w]
            if u in visited or len(path) + 2 > cutoff + 1:
                continue
            path.extend((w, u))
            visited.update((w, u))
            extend(path, visited)
            visited.difference_update((w, u))
            del path[-2:]

    for s in free:
        extend([s], {s})
    return found


def find_short_augmenting_path(graph: Graph, matching: Matching, delta) -> tuple[int, ...]:
    """Deterministic short augmenting path.

    Among augmenting paths with the fewest edges (never more than
    ceil(2/delta) when |M| <= (1-delta) m*(G)), returns the lexicographically
    least canonically oriented vertex sequence.

    Raises :class:`NoAugmentingPathError` with a maximality certificate when
    the matching is already maximum, or with `matching_is_maximum=False` when
    augmenting paths exist but none within the cutoff (precondition violated).
    """
    delta = as_fraction(delta)
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    cutoff = math.ceil(Fraction(2) / delta)
    candidates = _short_augmenting_paths(graph, matching.mask, cutoff)
    if candidates:
        return min(candidates, key=lambda p: (len(p), p))
    mstar = matching_number(graph)
    if len(matching) == mstar:
        raise NoAugmentingPathError(
            f"matching is maximum (m* = {mstar}); no augmenting path exists",
            matching_is_maximum=True, matching_number=mstar)
    raise NoAugmentingPathError(
        f"no augmenting path within {cutoff} edges although |M| = {len(matching)} "
        f"< m* = {mstar}; precondition |M| <= (1-delta) m* violated",
        matching_is_maximum=False, matching_number=mstar)


@dataclass(frozen=True)
class DiffDecomposition:
    """Components of x xor y in canonical presentation.

    Even paths and odd paths are vertex sequences oriented smaller endpoint
    first; each list is sorted.  A cycle's sequence starts at its minimum
    vertex (the distinguished vertex) and proceeds toward the smaller
    neighbor.  Odd paths with more y-edges are x-augmenting, those with more
    x-edges are y-augmenting; their first vertex is the distinguished
    endpoint.
    """

    even_paths: tuple[tuple[int, ...], ...]
    cycles: tuple[tuple[int, ...], ...]
    x_augmenting: tuple[tuple[int, ...], ...]
    y_augmenting: tuple[tuple[int, ...], ...]

    @property
    def j(self) -> int:
        return len(self.x_augmenting)

    def component_edge_ids(self, graph: Graph) -> frozenset[int]:
        out = set()
        for seq in self.even_paths + self.x_augmenting + self.y_augmenting:
            out.update(graph.edge_id(a, b) for a, b in zip(seq, seq[1:]))
        for seq in self.cycles:
            closed = seq + (seq[0],)
            out.update(graph.edge_id(a, b) for a, b in zip(closed, closed[1:]))
        return frozenset(out)


def _decompose_diff(graph: Graph, x_mask: int, y_mask: int):
    """Canonical component split of the symmetric difference of two matchings.

    Returns (even_paths, cycles, x_augmenting, y_augmenting) as vertex tuples;
    shared by the public decomposition and the flow construction.
    """
    diff = x_mask ^ y_mask
    incident: dict[int, list[tuple[int, int]]] = {}
    for i in ids_of_mask(diff):
        u, v = graph.edges[i]
        incident.setdefault(u, []).append((v, i))
        incident.setdefault(v, []).append((u, i))

    seen_edges: set[int] = set()
    endpoints = sorted(v for v, inc in incident.items() if len(inc) == 1)
    paths: list[tuple[int, ...]] = []
    for start in endpoints:
        (nbr, eid), = incident[start]
        if eid in seen_edges:
            continue
        seq = [start]
        prev, cur = start, nbr
        seen_edges.add(eid)
        while True:
            seq.append(cur)
            nxt = [(w, e) for w, e in incident[cur] if e not in seen_edges]
            if not nxt:
                break
            (w, e), = nxt
            seen_edges.add(e)
            prev, cur = cur, w
        paths.append(tuple(seq))

    cycles: list[tuple[int, ...]] = []
    for start in sorted(incident):
        remaining = [(w, e) for w, e in incident[start] if e not in seen_edges]
        if not remaining:
            continue
        # First unvisited vertex in ascending order is the cycle minimum.
        nbr, eid = min(remaining)
        seq = [start]
        seen_edges.add(eid)
        cur = nbr
        while cur != start:
            seq.append(cur)
            nxt = [(w, e) for w, e in incident[cur] if e not in seen_edges]
            (w, e), = nxt
            seen_edges.add(e)
            cur = w
        if len(seq) % 2:
            raise AssertionError("odd cycle in a symmetric difference of matchings")
        cycles.append(tuple(seq))

    evens: list[tuple[int, ...]] = []
    x_aug: list[tuple[int, ...]] = []
    y_aug: list[tuple[int, ...]] = []
    for seq in paths:
        x_edges = sum(1 for a, b in zip(seq, seq[1:]) if (x_mask >> graph.edge_id(a, b)) & 1)
        y_edges = len(seq) - 1 - x_edges
        canon = _canonical_path(seq)
        if x_edges == y_edges:
            evens.append(canon)
        elif y_edges > x_edges:
            x_aug.append(canon)
        else:
            y_aug.append(canon)
    return (tuple(sorted(evens)), tuple(sorted(cycles)),
            tuple(sorted(x_aug)), tuple(sorted(y_aug)))


def symmetric_difference(x: Matching, y: Matching) -> DiffDecomposition:
    """Decompose x xor y into even paths, even cycles, and augmenting paths."""
    if x.graph != y.graph:
        raise ValueError("matchings live on different graphs")
    evens, cycles, x_aug, y_aug = _decompose_diff(x.graph, x.mask, y.mask)
    if len(x) == len(y) and len(x_aug) != len(y_aug):
        raise AssertionError("equal-size matchings with unbalanced augmenting paths")
    return DiffDecomposition(evens, cycles, x_aug, y_aug)


def _enumerate_masks(graph: Graph, k: int, budget: int | None = 100_000) -> list[int]:
    """Bitmasks of all size-k matchings in canonical (edge-id lexicographic) order."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return [0]
    m = graph.m
    conflicts = graph.edge_conflicts
    out: list[int] = []

    def rec(start: int, chosen: int, depth: int):
        remaining = k - depth
        for e in range(start, m - remaining + 1):
            if (conflicts[e] & chosen) == 0:
                new = chosen | (1 << e)
                if remaining == 1:
                    if budget is not None and len(out) >= budget:
                        raise StateSpaceTooLargeError(
                            f"state space too large: more than {budget} matchings of size {k}",
                            count=len(out))
                    out.append(new)
                else:
                    rec(e + 1, new, depth + 1)

    rec(0, 0, 0)
    return out


def enumerate_matchings(graph: Graph, k: int, budget: int | None = 100_000) -> tuple[Matching, ...]:
    """All matchings of size exactly k, in canonical sorted order."""
    return tuple(Matching.from_mask(graph, mask) for mask in _enumerate_masks(graph, k, budget))
