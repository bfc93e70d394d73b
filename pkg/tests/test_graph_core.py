import pytest
from hypothesis import given

from nmpkit import (
    BipartiteGraph,
    FormatError,
    Side,
    build_euclidean_tree,
    edge_count_between,
    induced_subgraph,
    left_set,
    neighborhood,
    parse_graph,
    right_set,
    serialize_graph,
)

from conftest import bipartite_graphs, complete_graph


def test_parse_basic():
    g = parse_graph("p bipartite 2 3\ne 0 0\ne 1 0\ne 0 1\ne 1 2")
    assert (g.k, g.n, g.edge_count) == (2, 3, 4)
    assert g.adj == ((0, 1), (0, 2))


def test_parse_no_edges():
    g = parse_graph("p bipartite 1 1")
    assert (g.k, g.n, g.edge_count) == (1, 1, 0)


def test_parse_comments_and_blank_lines():
    g = parse_graph("# a comment\n\np bipartite 2 2\n# another\ne 1 1\n")
    assert list(g.edges()) == [(1, 1)]


@pytest.mark.parametrize(
    "text,fragment",
    [
        ("p bipartite 2 3\ne 0 5", "line 2"),
        ("p bipartite 2 3\ne 2 0", "line 2"),
        ("p bipartite 2 3\ne 0 0\ne 0 0", "duplicate"),
        ("e 0 0", "before header"),
        ("p bipartite 0 3", "sizes"),
        ("p twopartite 2 3", "header"),
        ("p bipartite 2 3\nq 0 0", "unknown record"),
        ("", "missing header"),
    ],
)
def test_parse_errors(text, fragment):
    with pytest.raises(FormatError, match=fragment):
        parse_graph(text)


@given(bipartite_graphs())
def test_serialize_round_trip(g):
    assert parse_graph(serialize_graph(g)) == g


@given(bipartite_graphs())
def test_degree_sums_match(g):
    total_l = sum(g.degree(x) for x in range(g.k))
    total_r = sum(g.rdegree(y) for y in range(g.n))
    assert total_l == total_r == g.edge_count


def test_neighborhood_complete():
    g = complete_graph(2, 3)
    assert neighborhood(g, left_set([0])).members == (0, 1, 2)


def test_neighborhood_empty_set():
    g = complete_graph(2, 3)
    assert neighborhood(g, left_set([])).members == ()


def test_neighborhood_euclidean_tree():
    # T_{2,3} has edges {x0y0, x1y0, x0y1, x1y2} by its construction.
    g = build_euclidean_tree(2, 3).graph
    assert sorted(g.edges()) == [(0, 0), (0, 1), (1, 0), (1, 2)]
    assert neighborhood(g, left_set([0])).members == (0, 1)


@given(bipartite_graphs())
def test_double_neighborhood_contains_non_isolated(g):
    s = left_set(range(g.k))
    back = neighborhood(g, neighborhood(g, s))
    for x in s:
        if g.degree(x) > 0:
            assert x in back


def test_edge_count_between_complete():
    g = complete_graph(3, 4)
    assert edge_count_between(g, left_set(range(3)), right_set(range(4))) == 12
    assert edge_count_between(g, left_set([]), right_set(range(4))) == 0


def test_edge_count_between_t37():
    # A tree on 3 + 7 vertices has 9 edges.
    g = build_euclidean_tree(3, 7).graph
    assert edge_count_between(g, left_set(range(3)), right_set(range(7))) == 9


@given(bipartite_graphs())
def test_edge_count_complement_identity(g):
    a = left_set(range(0, g.k, 2))
    b = right_set(range(0, g.n, 2))
    b_comp = right_set(set(range(g.n)) - set(b.members))
    deg_sum = sum(g.degree(x) for x in a)
    assert edge_count_between(g, a, b) + edge_count_between(g, a, b_comp) == deg_sum


def test_induced_subgraph_basic():
    g = complete_graph(3, 3)
    sub, lmap, rmap = induced_subgraph(g, left_set([0, 1]), right_set([2]))
    assert (sub.k, sub.n, sub.edge_count) == (2, 1, 2)
    assert lmap == (0, 1) and rmap == (2,)


def test_induced_subgraph_identity():
    g = complete_graph(2, 4)
    sub, lmap, rmap = induced_subgraph(g, left_set(range(2)), right_set(range(4)))
    assert sub == g
    assert lmap == (0, 1) and rmap == (0, 1, 2, 3)


def test_induced_subgraph_unrolls_tree_recursion():
    # Dropping the outermost matching layer of T_{3,7} leaves T_{3,4}.
    t37 = build_euclidean_tree(3, 7).graph
    sub, _, _ = induced_subgraph(t37, left_set(range(3)), right_set(range(4)))
    assert sorted(sub.edges()) == sorted(build_euclidean_tree(3, 4).graph.edges())


def test_induced_subgraph_empty_side():
    g = complete_graph(2, 2)
    sub, lmap, rmap = induced_subgraph(g, left_set([]), right_set([0]))
    assert sub is None and lmap == () and rmap == (0,)


def test_duplicate_edges_rejected():
    with pytest.raises(ValueError, match="duplicate"):
        BipartiteGraph.from_edges(2, 2, [(0, 0), (0, 0)])


def test_vertex_set_side_checks():
    g = complete_graph(2, 2)
    with pytest.raises(ValueError):
        edge_count_between(g, left_set([5]), right_set([0]))
    with pytest.raises(ValueError):
        edge_count_between(g, right_set([0]), right_set([0]))  # wrong side


def test_swap_sides():
    g = parse_graph("p bipartite 2 3\ne 0 2\ne 1 0")
    s = g.swap_sides()
    assert (s.k, s.n) == (3, 2)
    assert sorted(s.edges()) == [(0, 1), (2, 0)]
    assert s.swap_sides() == g


def test_side_other():
    assert Side.LEFT.other() is Side.RIGHT
    assert Side.RIGHT.other() is Side.LEFT
