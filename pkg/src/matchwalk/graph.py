"""Graph representation, edge-list parsing, and the short-path catalog."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .errors import ParseError

Edge = tuple[int, int]


def as_fraction(value) -> Fraction:
    """Coerce ints, floats, strings like '1/3' or '0.25', and Fractions."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(str(value))
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a rational")


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..n-1 with canonical edge indexing.

    Edges are pairs (u, v) with u < v, sorted lexicographically; the position
    of a pair in `edges` is its edge index.  Matchings, flows, and influence
    matrices all refer to edges by these indices.  Instances are immutable and
    safe to share.
    """

    n: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        prev = None
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop ({u}, {v})")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={self.n}")
            if u > v:
                raise ValueError(f"edge ({u}, {v}) not oriented u < v")
            if prev is not None and prev >= (u, v):
                raise ValueError(f"edges not sorted/duplicated at ({u}, {v})")
            prev = (u, v)

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        """Build a graph from an arbitrary edge iterable, canonicalizing it."""
        canon = sorted({(min(u, v), max(u, v)) for u, v in edges})
        return cls(n, tuple(canon))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        nbrs = [[] for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        return tuple(tuple(sorted(a)) for a in nbrs)

    @cached_property
    def edge_index(self) -> dict[Edge, int]:
        return {e: i for i, e in enumerate(self.edges)}

    @cached_property
    def incident_edges(self) -> tuple[tuple[int, ...], ...]:
        """Edge indices incident to each vertex."""
        inc = [[] for _ in range(self.n)]
        for i, (u, v) in enumerate(self.edges):
            inc[u].append(i)
            inc[v].append(i)
        return tuple(tuple(a) for a in inc)

    @cached_property
    def edge_vertex_masks(self) -> tuple[int, ...]:
        return tuple((1 << u) | (1 << v) for u, v in self.edges)

    @cached_property
    def edge_conflicts(self) -> tuple[int, ...]:
        """For each edge, the bitmask of edges sharing an endpoint (self included)."""
        out = []
        for i, (u, v) in enumerate(self.edges):
            mask = 0
            for e in self.incident_edges[u]:
                mask |= 1 << e
            for e in self.incident_edges[v]:
                mask |= 1 << e
            out.append(mask)
        return tuple(out)

    @cached_property
    def max_degree(self) -> int:
        if self.n == 0:
            return 0
        return max(len(a) for a in self.adjacency)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def edge_id(self, u: int, v: int) -> int:
        return self.edge_index[(u, v) if u < v else (v, u)]

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self.edge_index


def parse_graph(text: str) -> Graph:
    """Parse the edge-list format.

    UTF-8 text with an optional header line "n <int>", one edge per line as
    "u v", and "#" comments.  Duplicate edges collapse; orientation is
    normalized.  Malformed lines, self-loops, and endpoints at or above a
    declared n raise :class:`ParseError` naming the line.
    """
    declared_n: int | None = None
    pairs: set[Edge] = set()
    saw_edge = False
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "n":
            if saw_edge or declared_n is not None:
                raise ParseError("header 'n <int>' must appear once, before edges", line_no)
            if len(parts) != 2:
                raise ParseError("malformed header, expected 'n <int>'", line_no)
            try:
                declared_n = int(parts[1])
            except ValueError:
                raise ParseError(f"malformed vertex count {parts[1]!r}", line_no) from None
            if declared_n < 0:
                raise ParseError("vertex count must be nonnegative", line_no)
            continue
        if len(parts) != 2:
            raise ParseError(f"expected 'u v', got {line!r}", line_no)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"non-integer endpoint in {line!r}", line_no) from None
        if u == v:
            raise ParseError(f"self-loop {u} {v}", line_no)
        if u < 0 or v < 0:
            raise ParseError(f"negative vertex id in {line!r}", line_no)
        if declared_n is not None and max(u, v) >= declared_n:
            raise ParseError(f"vertex {max(u, v)} >= declared n={declared_n}", line_no)
        saw_edge = True
        pairs.add((u, v) if u < v else (v, u))
    if declared_n is None:
        declared_n = 1 + max((max(e) for e in pairs), default=-1)
    return Graph(declared_n, tuple(sorted(pairs)))


def serialize_graph(graph: Graph) -> str:
    """Canonical edge-list serialization: header, then sorted edges."""
    lines = [f"n {graph.n}"]
    lines.extend(f"{u} {v}" for u, v in graph.edges)
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ShortPathCatalog:
    """All simple paths of a graph with at most `max_edges` edges.

    Each path appears once, oriented with its smaller endpoint first, and the
    listing is sorted lexicographically.  The edge cutoff is ceil(2/delta),
    which guarantees every short augmenting path the flow construction needs
    is present in the catalog.
    """

    delta: Fraction
    max_edges: int
    paths: tuple[tuple[int, ...], ...]

    @cached_property
    def index(self) -> dict[tuple[int, ...], int]:
        return {p: i for i, p in enumerate(self.paths)}

    def __len__(self) -> int:
        return len(self.paths)

    @staticmethod
    def canonical(seq) -> tuple[int, ...]:
        seq = tuple(seq)
        return seq if seq[0] <= seq[-1] else seq[::-1]

    def id_of(self, seq) -> int:
        return self.index[self.canonical(seq)]


def max_catalog_edges(delta) -> int:
    return math.ceil(Fraction(2) / as_fraction(delta))


def short_path_catalog(graph: Graph, delta) -> ShortPathCatalog:
    """Enumerate every simple path with 1..ceil(2/delta) edges.

    Deterministic: depth-first from each start vertex, deduplicated by
    canonical orientation, output sorted.
    """
    delta = as_fraction(delta)
    if not 0 < delta <= 1:
        raise ValueError(f"delta must lie in (0, 1], got {delta}")
    limit = max_catalog_edges(delta)
    adjacency = graph.adjacency
    found: set[tuple[int, ...]] = set()

    def extend(path: list[int], visited: set[int]):
        if len(path) > 1 and path[0] < path[-1]:
            found.add(tuple(path))
        if len(path) > limit:  # len(path) - 1 edges so far
            return
        for w in adjacency[path[-1]]:
            if w in visited:
                continue
            path.append(w)
            visited.add(w)
            extend(path, visited)
            visited.remove(w)
            path.pop()

    for start in range(graph.n):
        extend([start], {start})
    return ShortPathCatalog(delta, limit, tuple(sorted(found)))
