"""Simulation of the down-up walk on matchings of a fixed size.

One step from M: draw a matched edge e uniformly from M and a graph edge e'
uniformly from all of E; move to (M | {e'}) \\ {e} if that is again a matching
of size k, otherwise stay.  Proposals whose only conflict is the removed edge
e itself are therefore accepted.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph
from .matching import Matching, _enumerate_masks, ids_of_mask


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based generator; the seed -> trajectory map is stable per build."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def trial_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream for trial `index`, derived deterministically from seed."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(index,))))


@dataclass(frozen=True)
class WalkConfig:
    k: int
    steps: int
    seed: int
    initial: Matching

    def __post_init__(self):
        if len(self.initial) != self.k:
            raise ValueError(f"initial matching has size {len(self.initial)}, expected k={self.k}")
        if self.k < 1:
            raise ValueError("the walk needs k >= 1")
        if self.steps < 0:
            raise ValueError("steps must be nonnegative")


def _step_mask(graph: Graph, mask: int, ids: tuple[int, ...], rng: np.random.Generator) -> int:
    e = ids[rng.integers(len(ids))]
    ep = int(rng.integers(graph.m))
    removed = mask & ~(1 << e)
    if ep == e or (graph.edge_conflicts[ep] & removed):
        return mask
    return removed | (1 << ep)


def step(graph: Graph, matching: Matching, rng: np.random.Generator) -> Matching:
    """One transition of the down-up walk."""
    if len(matching) == 0:
        raise ValueError("cannot step from an empty matching")
    new_mask = _step_mask(graph, matching.mask, matching.edge_ids, rng)
    if new_mask == matching.mask:
        return matching
    return Matching.from_mask(graph, new_mask)


def run(graph: Graph, config: WalkConfig, record_trajectory: bool = False):
    """Run the walk for `config.steps` steps.

    Returns the final matching, or the full trajectory (a list of
    `steps + 1` matchings) when `record_trajectory` is set.  Deterministic
    given the seed.
    """
    rng = make_rng(config.seed)
    current = config.initial
    trajectory = [current] if record_trajectory else None
    for _ in range(config.steps):
        current = step(graph, current, rng)
        if record_trajectory:
            trajectory.append(current)
    return trajectory if record_trajectory else current


def empirical_distribution(graph: Graph, k: int, n_samples: int, burn_in: int = 1000,
                           stride: int = 1, seed: int = 0,
                           state_budget: int | None = 100_000) -> np.ndarray:
    """Frequency table of visited states over the canonical enumeration order.

    Starts from the first matching in canonical order, discards `burn_in`
    steps, then retains every `stride`-th state until `n_samples` samples are
    collected.  The result sums to 1.
    """
    if stride < 1:
        raise ValueError("stride must be >= 1")
    masks = _enumerate_masks(graph, k, budget=state_budget)
    index = {m: i for i, m in enumerate(masks)}
    rng = make_rng(seed)
    mask = masks[0]
    ids = tuple(ids_of_mask(mask))
    counts = np.zeros(len(masks), dtype=np.int64)
    for _ in range(burn_in):
        new = _step_mask(graph, mask, ids, rng)
        if new != mask:
            mask, ids = new, tuple(ids_of_mask(new))
    for i in range(n_samples * stride):
        new = _step_mask(graph, mask, ids, rng)
        if new != mask:
            mask, ids = new, tuple(ids_of_mask(new))
        if (i + 1) % stride == 0:
            counts[index[mask]] += 1
    return counts / counts.sum()


def sample_step_frequencies(graph: Graph, matching: Matching, trials: int, seed: int,
                            masks: list[int] | None = None) -> np.ndarray:
    """Empirical one-step distribution from a fixed state.

    Returns frequencies aligned with the canonical enumeration of the state
    space (pass `masks` to reuse an existing enumeration).  Vectorized for
    graphs with at most 63 edges.
    """
    k = len(matching)
    if masks is None:
        masks = _enumerate_masks(graph, k)
    rng = make_rng(seed)
    if graph.m <= 63:
        ids = np.array(matching.edge_ids, dtype=np.uint64)
        conflicts = np.array(graph.edge_conflicts, dtype=np.uint64)
        mask = np.uint64(matching.mask)
        e = ids[rng.integers(0, k, size=trials)]
        ep = rng.integers(0, graph.m, size=trials).astype(np.uint64)
        one = np.uint64(1)
        removed = mask & ~(one << e)
        valid = (ep != e) & ((conflicts[ep] & removed) == 0)
        nxt = np.where(valid, removed | (one << ep), mask)
        mask_arr = np.array(masks, dtype=np.uint64)
        order = np.argsort(mask_arr)
        pos = np.searchsorted(mask_arr[order], nxt)
        counts = np.bincount(order[pos], minlength=len(masks))
    else:
        index = {m: i for i, m in enumerate(masks)}
        counts = np.zeros(len(masks), dtype=np.int64)
        ids_t = matching.edge_ids
        for _ in range(trials):
            counts[index[_step_mask(graph, matching.mask, ids_t, rng)]] += 1
    return counts / trials
