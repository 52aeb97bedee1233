import pytest
from hypothesis import given

from itp.gf2linalg import BitMatrix
from itp.graphs import (
    GraphParseError,
    LoopedGraph,
    adjacency_matrix,
    delete_vertex,
    delete_vertices,
    disjoint_union,
    format_graph,
    local_complement,
    parse_graph,
    pivot,
)

from conftest import graphs


def edge_set(g):
    return {tuple(sorted(e)) for e in g.sorted_edges()}


def test_adjacency_examples():
    assert adjacency_matrix(LoopedGraph(["a", "b"])) == BitMatrix.zeros(2, 2)
    assert adjacency_matrix(LoopedGraph(["v"], ["v"])).to_lists() == [[1]]
    assert adjacency_matrix(LoopedGraph(["v", "w"], [], [("v", "w")])).to_lists() == [[0, 1], [1, 0]]


def test_invalid_graphs_rejected():
    with pytest.raises(ValueError):
        LoopedGraph(["a", "a"])
    with pytest.raises(ValueError):
        LoopedGraph(["a"], ["b"])
    with pytest.raises(ValueError):
        LoopedGraph(["a", "b"], [], [("a", "a")])
    with pytest.raises(ValueError):
        LoopedGraph(["a"], [], [("a", "c")])


def test_delete_vertex_examples():
    k2 = LoopedGraph(["v", "w"], [], [("v", "w")])
    assert delete_vertex(k2, "v") == LoopedGraph(["w"])
    assert len(delete_vertex(LoopedGraph(["v"], ["v"]), "v")) == 0
    path = LoopedGraph(["a", "b", "c"], [], [("a", "b"), ("b", "c")])
    assert delete_vertex(path, "b") == LoopedGraph(["a", "c"])
    with pytest.raises(KeyError):
        delete_vertex(path, "z")


def test_local_complement_examples():
    g = LoopedGraph(["v", "a", "b"], ["v"], [("v", "a"), ("v", "b")])
    h = local_complement(g, "v")
    assert h.loops == {"v", "a", "b"}
    assert h.adjacent("a", "b")

    one = LoopedGraph(["v", "a"], ["v"], [("v", "a")])
    assert local_complement(one, "v") == LoopedGraph(["v", "a"], ["v", "a"], [("v", "a")])

    star = LoopedGraph(["v", "a", "b", "c"], ["v"], [("v", "a"), ("v", "b"), ("v", "c")])
    h = local_complement(star, "v")
    assert h.loops == {"v", "a", "b", "c"}
    assert edge_set(h) == {("a", "v"), ("b", "v"), ("c", "v"), ("a", "b"), ("a", "c"), ("b", "c")}


def test_pivot_examples():
    path = LoopedGraph(["a", "v", "w", "b"], [], [("a", "v"), ("v", "w"), ("w", "b")])
    cycle = pivot(path, "v", "w")
    assert edge_set(cycle) == edge_set(path) | {("a", "b")}

    k2 = LoopedGraph(["v", "w"], [], [("v", "w")])
    assert pivot(k2, "v", "w") == k2

    g = LoopedGraph(
        ["v", "w", "x", "x2", "y"],
        [],
        [("v", "w"), ("x", "v"), ("x", "w"), ("x2", "v"), ("x2", "w"), ("y", "v")],
    )
    h = pivot(g, "v", "w")
    assert h.adjacent("x", "y") and h.adjacent("x2", "y")
    assert not h.adjacent("x", "x2")

    with pytest.raises(ValueError):
        pivot(k2, "v", "v")


def test_pivot_ignores_vertices_outside_both_neighbourhoods():
    g = LoopedGraph(["v", "w", "a", "c"], [], [("v", "w"), ("a", "v")])
    assert not pivot(g, "v", "w").adjacent("a", "c")


def test_disjoint_union_examples():
    k2 = LoopedGraph(["v", "w"], [], [("v", "w")])
    assert disjoint_union(k2, LoopedGraph([])) == k2
    u = disjoint_union(LoopedGraph(["v"], ["v"]), LoopedGraph(["v"]))
    assert len(u) == 2 and len(u.loops) == 1 and not u.edges
    kk = disjoint_union(k2, k2)
    assert len(kk) == 4 and len(kk.edges) == 2
    assert len(set(kk.vertices)) == 4


@given(graphs())
def test_adjacency_symmetric(g):
    a = adjacency_matrix(g)
    assert a == a.transpose()


@given(graphs(min_vertices=1))
def test_local_complement_involution(g):
    for v in g.vertices:
        assert local_complement(local_complement(g, v), v) == g


@given(graphs(min_vertices=2))
def test_pivot_involution(g):
    for v, w in g.sorted_edges():
        assert pivot(pivot(g, v, w), v, w) == g


@given(graphs(min_vertices=2))
def test_delete_commutes(g):
    x, y = g.vertices[0], g.vertices[-1]
    assert delete_vertex(delete_vertex(g, x), y) == delete_vertex(delete_vertex(g, y), x)
    assert delete_vertices(g, [x, y]) == delete_vertex(delete_vertex(g, x), y)


@given(graphs())
def test_format_parse_round_trip(g):
    text = format_graph(g)
    assert parse_graph(text) == g
    assert format_graph(parse_graph(text)) == text


def test_parse_example_any_header_order():
    text = "# demo\nedges: a-b b-c c-d\nloops: b d\nvertices: a b c d\n"
    g = parse_graph(text)
    assert g.vertices == ("a", "b", "c", "d")
    assert g.loops == {"b", "d"}
    assert edge_set(g) == {("a", "b"), ("b", "c"), ("c", "d")}


def test_parse_optional_lines_and_empty_graph():
    assert parse_graph("vertices: a b\n") == LoopedGraph(["a", "b"])
    assert len(parse_graph("vertices:\n")) == 0


@pytest.mark.parametrize(
    "text",
    [
        "loops: a\n",
        "vertices: a a\n",
        "vertices: a b\nedges: a-c\n",
        "vertices: a\nedges: a-a\n",
        "vertices: a b\nedges: a-b b-a\n",
        "vertices: a b\nedges: a--b\n",
        "vertices: a b\nloops: c\n",
        "vertices: a-b\n",
        "vertices: a\nvertices: b\n",
        "vertices: a\nnonsense\n",
    ],
)
def test_parse_errors(text):
    with pytest.raises(GraphParseError):
        parse_graph(text)


def test_fingerprint_depends_on_structure():
    k2 = LoopedGraph(["v", "w"], [], [("v", "w")])
    assert k2.fingerprint() == LoopedGraph(["v", "w"], [], [("w", "v")]).fingerprint()
    assert k2.fingerprint() != LoopedGraph(["v", "w"]).fingerprint()
