"""The built-in instance corpus shared by the acceptance suite and the CLI.

Graphs: paths with 3..7 edges, cycles with 4..8 vertices, K4, K5, twenty
seeded sparse random graphs on at most 8 vertices, and the 40-vertex gadget.
For each graph and delta in {1/2, 1/3, 1/4}, the walk sizes are every
k <= (1 - delta) m*(G).

Flow construction is all-pairs work, so flow-level checks carry a state-space
cap: instances whose enumerated space exceeds `flow_state_cap` are skipped
(the gadget at k >= 3 has thousands to millions of states; building its
exact flow is out of desk-scale reach and the library's budget errors would
refuse it anyway).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import StateSpaceTooLargeError
from .gadget import build_gadget
from .generators import complete_graph, cycle_graph, path_graph, random_gnp
from .graph import Graph
from .matching import _enumerate_masks, matching_number

DELTAS = (Fraction(1, 2), Fraction(1, 3), Fraction(1, 4))
FLOW_STATE_CAP = 700


@dataclass(frozen=True)
class CorpusInstance:
    name: str
    graph: Graph
    k: int
    delta: Fraction
    omega_size: int


def corpus_graphs() -> list[tuple[str, Graph]]:
    graphs: list[tuple[str, Graph]] = []
    for edges in range(3, 8):
        graphs.append((f"path-{edges}e", path_graph(edges + 1)))
    for n in range(4, 9):
        graphs.append((f"cycle-{n}", cycle_graph(n)))
    graphs.append(("K4", complete_graph(4)))
    graphs.append(("K5", complete_graph(5)))
    count = 0
    seed = 0
    while count < 20:
        n = 5 + (count % 4)
        g = random_gnp(n, 0.3 + 0.03 * (count % 5), seed)
        seed += 1
        # Degenerate draws (too few edges, or m* < 2 so no valid k) are skipped.
        if g.m >= 3 and matching_number(g) >= 2:
            graphs.append((f"random-{count}", g))
            count += 1
    graphs.append(("gadget-40", build_gadget(40, Fraction(1, 10)).graph))
    return graphs


def corpus_instances(flow_state_cap: int | None = FLOW_STATE_CAP) -> list[CorpusInstance]:
    """Every (graph, k, delta) of the corpus, largest state spaces first skipped.

    With `flow_state_cap=None` no instances are dropped (the caller then owns
    the cost of the large gadget spaces).
    """
    out: list[CorpusInstance] = []
    for name, graph in corpus_graphs():
        mstar = matching_number(graph)
        omega_cache: dict[int, int | None] = {}
        for delta in DELTAS:
            k_max = math.floor((1 - delta) * mstar)
            for k in range(1, k_max + 1):
                if k not in omega_cache:
                    try:
                        omega_cache[k] = len(_enumerate_masks(graph, k, budget=flow_state_cap))
                    except StateSpaceTooLargeError:
                        omega_cache[k] = None
                omega = omega_cache[k]
                if omega is None:
                    continue
                out.append(CorpusInstance(name, graph, k, delta, omega))
    return out
