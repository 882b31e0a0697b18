from fractions import Fraction

import pytest
from hypothesis import given, settings

from matchwalk.errors import ParseError
from matchwalk.generators import cycle_graph, path_graph
from matchwalk.graph import (Graph, as_fraction, parse_graph, serialize_graph,
                             short_path_catalog)

from .conftest import brute_simple_paths, small_graphs


def test_parse_two_edge_path():
    g = parse_graph("0 1\n1 2")
    assert g.n == 3
    assert g.edges == ((0, 1), (1, 2))


def test_parse_dedup_and_orientation():
    g = parse_graph("1 0\n1 0")
    assert g.n == 2
    assert g.edges == ((0, 1),)


def test_parse_self_loop_rejected():
    with pytest.raises(ParseError, match="self-loop"):
        parse_graph("0 0")


def test_parse_errors_name_the_line():
    with pytest.raises(ParseError, match="line 3"):
        parse_graph("0 1\n1 2\nbogus line here\n")
    with pytest.raises(ParseError, match="line 2"):
        parse_graph("n 3\n0 7")


def test_parse_header_and_comments():
    g = parse_graph("# a comment\nn 5\n0 1  # trailing\n\n2 3\n")
    assert g.n == 5
    assert g.edges == ((0, 1), (2, 3))


def test_graph_rejects_bad_edges():
    with pytest.raises(ValueError):
        Graph(3, ((1, 0),))
    with pytest.raises(ValueError):
        Graph(3, ((0, 1), (0, 1)))
    with pytest.raises(ValueError):
        Graph(2, ((0, 2),))


@given(small_graphs())
@settings(max_examples=60)
def test_serialize_roundtrip_idempotent(g):
    text = serialize_graph(g)
    again = serialize_graph(parse_graph(text))
    assert text == again
    assert parse_graph(text) == g


def test_as_fraction_forms():
    assert as_fraction("1/3") == Fraction(1, 3)
    assert as_fraction(0.25) == Fraction(1, 4)
    assert as_fraction(0.1) == Fraction(1, 10)
    assert as_fraction(Fraction(2, 7)) == Fraction(2, 7)
    assert as_fraction(1) == 1


def test_catalog_single_edge():
    g = Graph.from_edges(2, [(0, 1)])
    cat = short_path_catalog(g, Fraction(1, 2))
    assert cat.paths == ((0, 1),)


def test_catalog_two_edge_path():
    # max_edges = 4, so all 3 simple paths of the 2-edge path appear.
    cat = short_path_catalog(path_graph(3), Fraction(1, 2))
    assert cat.max_edges == 4
    assert set(cat.paths) == {(0, 1), (1, 2), (0, 1, 2)}


def test_catalog_triangle_cutoff_two():
    cat = short_path_catalog(cycle_graph(3), 1)
    assert cat.max_edges == 2
    assert len(cat) == 6
    assert sum(1 for p in cat.paths if len(p) == 2) == 3
    assert sum(1 for p in cat.paths if len(p) == 3) == 3


def test_catalog_delta_out_of_range():
    with pytest.raises(ValueError):
        short_path_catalog(path_graph(3), Fraction(3, 2))
    with pytest.raises(ValueError):
        short_path_catalog(path_graph(3), 0)


@given(small_graphs(max_n=6))
@settings(max_examples=40, deadline=None)
def test_catalog_matches_permutation_oracle(g):
    delta = Fraction(1, 2)
    cat = short_path_catalog(g, delta)
    assert set(cat.paths) == brute_simple_paths(g, cat.max_edges)


@given(small_graphs(max_n=7))
@settings(max_examples=40, deadline=None)
def test_catalog_entries_are_simple_paths_within_bound(g):
    cat = short_path_catalog(g, Fraction(1, 3))
    for p in cat.paths:
        assert len(set(p)) == len(p)
        assert 1 <= len(p) - 1 <= cat.max_edges
        assert all(g.has_edge(a, b) for a, b in zip(p, p[1:]))
    bound = 2 * g.n * max(g.max_degree, 1) ** (cat.max_edges - 1)
    assert len(cat) <= bound


def test_catalog_size_bound_on_named_graphs():
    for g, delta in [(path_graph(8), Fraction(1, 2)), (cycle_graph(8), Fraction(1, 4))]:
        cat = short_path_catalog(g, delta)
        assert len(cat) <= 2 * g.n * g.max_degree ** (cat.max_edges - 1)


def test_catalog_id_of_orientation():
    cat = short_path_catalog(path_graph(4), Fraction(1, 2))
    assert cat.id_of((0, 1, 2)) == cat.id_of((2, 1, 0))
