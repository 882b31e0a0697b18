from fractions import Fraction

import math

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from matchwalk.errors import NoAugmentingPathError, StateSpaceTooLargeError
from matchwalk.generators import (complete_graph, cycle_graph, disjoint_edges,
                                  empty_graph, path_graph, petersen_graph)
from matchwalk.graph import Graph
from matchwalk.matching import (Matching, enumerate_matchings,
                                find_short_augmenting_path, matching_number,
                                maximum_matching, symmetric_difference,
                                toggle_path)

from .conftest import (brute_augmenting_paths, brute_matching_number,
                       brute_matchings, small_graphs)


def test_matching_validation():
    g = path_graph(4)
    with pytest.raises(ValueError):
        Matching(g, (0, 1))  # edges (0,1) and (1,2) share vertex 1
    m = Matching(g, (2, 0))
    assert m.edge_ids == (0, 2)
    assert len(m) == 2
    assert 0 in m and 1 not in m


def test_maximum_matching_p9():
    # the 10-vertex path: one more than its four interior alternating edges
    assert len(maximum_matching(path_graph(10))) == 5


def test_maximum_matching_empty_and_petersen():
    assert len(maximum_matching(empty_graph(5))) == 0
    assert len(maximum_matching(petersen_graph())) == brute_matching_number(petersen_graph()) == 5


def test_maximum_matching_odd_cycles_and_blossoms():
    assert len(maximum_matching(cycle_graph(5))) == 2
    assert len(maximum_matching(cycle_graph(7))) == 3
    # two triangles joined by a bridge: needs blossom handling
    g = Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (3, 5)])
    assert len(maximum_matching(g)) == 3


@given(small_graphs(max_n=9))
@settings(max_examples=60, deadline=None)
def test_maximum_matching_vs_networkx(g):
    ours = maximum_matching(g)
    theirs = nx.max_weight_matching(nx.Graph(list(g.edges)), maxcardinality=True)
    assert len(ours) == len(theirs)


@given(small_graphs(max_n=7))
@settings(max_examples=60, deadline=None)
def test_maximum_matching_vs_bruteforce(g):
    assert len(maximum_matching(g)) == brute_matching_number(g)


def test_enumerate_c6_k2():
    g = cycle_graph(6)
    ours = enumerate_matchings(g, 2)
    assert len(ours) == len(brute_matchings(g, 2)) == 9
    assert [m.edge_ids for m in ours] == brute_matchings(g, 2)


def test_enumerate_k0_and_binomial():
    g = disjoint_edges(5)
    assert [m.edge_ids for m in enumerate_matchings(g, 0)] == [()]
    assert len(enumerate_matchings(g, 3)) == 10  # C(5, 3)


def test_enumerate_budget():
    g = complete_graph(8)
    with pytest.raises(StateSpaceTooLargeError, match="state space too large") as exc:
        enumerate_matchings(g, 2, budget=10)
    assert exc.value.count == 10


@given(small_graphs(max_n=7))
@settings(max_examples=40, deadline=None)
def test_enumerate_matches_bruteforce(g):
    for k in range(0, 4):
        assert [m.edge_ids for m in enumerate_matchings(g, k)] == brute_matchings(g, k)


def test_short_augmenting_path_p4_example():
    g = path_graph(4)
    m = Matching.from_vertex_pairs(g, [(1, 2)])
    assert find_short_augmenting_path(g, m, Fraction(1, 2)) == (0, 1, 2, 3)


def test_short_augmenting_path_trivial_cases():
    g = Graph.from_edges(2, [(0, 1)])
    assert find_short_augmenting_path(g, Matching(g, ()), Fraction(1, 2)) == (0, 1)
    g2 = disjoint_edges(2)
    m = Matching(g2, (0,))
    assert find_short_augmenting_path(g2, m, Fraction(1, 2)) == (2, 3)


def test_short_augmenting_path_maximum_errors():
    g = cycle_graph(4)
    pm = Matching.from_vertex_pairs(g, [(0, 1), (2, 3)])
    with pytest.raises(NoAugmentingPathError) as exc:
        find_short_augmenting_path(g, pm, Fraction(1, 2))
    assert exc.value.matching_is_maximum
    assert exc.value.matching_number == 2


@given(small_graphs(max_n=6),
       st.sampled_from([Fraction(1, 2), Fraction(1, 3), Fraction(1, 4)]))
@settings(max_examples=30, deadline=None)
def test_short_augmenting_path_properties(g, delta):
    mstar = brute_matching_number(g)
    cutoff = math.ceil(Fraction(2) / delta)
    for k in range(0, int((1 - delta) * mstar) + 1):
        for ids in brute_matchings(g, k)[:4]:
            m = Matching(g, ids)
            path = find_short_augmenting_path(g, m, delta)
            # canonical choice: shortest, then lexicographically least
            oracle = brute_augmenting_paths(g, ids, cutoff)
            assert path in oracle
            assert (len(path), path) == min((len(p), p) for p in oracle)
            assert len(path) - 1 <= cutoff
            assert path[0] not in m.covered and path[-1] not in m.covered
            flipped = toggle_path(m, path)
            assert len(flipped) == len(m) + 1


def test_symmetric_difference_empty():
    g = path_graph(4)
    m = Matching.from_vertex_pairs(g, [(0, 1)])
    d = symmetric_difference(m, m)
    assert d.even_paths == d.cycles == d.x_augmenting == d.y_augmenting == ()


def test_symmetric_difference_c4_cycle():
    g = cycle_graph(4)
    x = Matching.from_vertex_pairs(g, [(0, 1), (2, 3)])
    y = Matching.from_vertex_pairs(g, [(1, 2), (0, 3)])
    d = symmetric_difference(x, y)
    assert d.cycles == ((0, 1, 2, 3),)
    assert d.even_paths == () and d.j == 0


def test_symmetric_difference_p4_augmenting():
    g = path_graph(4)
    x = Matching.from_vertex_pairs(g, [(0, 1)])
    y = Matching.from_vertex_pairs(g, [(2, 3)])
    d = symmetric_difference(x, y)
    assert d.x_augmenting == ((2, 3),)
    assert d.y_augmenting == ((0, 1),)
    assert d.j == 1


@given(small_graphs(max_n=8))
@settings(max_examples=60, deadline=None)
def test_symmetric_difference_reconstruction(g):
    for k in (1, 2, 3):
        states = brute_matchings(g, k)
        if len(states) < 2:
            continue
        x = Matching(g, states[0])
        y = Matching(g, states[-1])
        d = symmetric_difference(x, y)
        assert d.component_edge_ids(g) == set(states[0]) ^ set(states[-1])
        assert len(d.x_augmenting) == len(d.y_augmenting)
        for cyc in d.cycles:
            assert len(cyc) % 2 == 0
            assert cyc[0] == min(cyc)
        for seq in d.even_paths + d.x_augmenting + d.y_augmenting:
            assert seq[0] <= seq[-1]
            # alternation between the two matchings
            sides = [(x.mask >> g.edge_id(a, b)) & 1 for a, b in zip(seq, seq[1:])]
            assert all(a != b for a, b in zip(sides, sides[1:]))


def test_matching_number_helper():
    assert matching_number(petersen_graph()) == 5
