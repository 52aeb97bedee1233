import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

from itp.graphs import LoopedGraph, disjoint_union
from itp.interlace import (
    interlace,
    q_evaluate,
    q_from_section,
    q_recursive,
    q_subset,
    section_to_q,
)
from itp.polyring import ONE, MultiPoly, parse_poly, substitute
from itp.tutte import EnumerationCapError

from conftest import all_graphs_upto, g_k2, g_single, graphs, random_graph

P = parse_poly
EVALUATORS = [q_subset, q_recursive, q_from_section]


@pytest.mark.parametrize("q", EVALUATORS)
def test_closed_forms(q):
    assert q(LoopedGraph([])) == ONE
    assert q(g_single()) == P("y")
    assert q(g_single(True)) == P("x")
    assert q(g_k2()) == P("x^2 - 2*x + 2*y")
    assert q(LoopedGraph(["v", "w"], ["v"], [("v", "w")])) == P("x^2 - x + y")
    assert q(LoopedGraph(["a", "b", "c"], ["a", "b"])) == P("x^2*y")


def test_section_to_q_examples():
    assert section_to_q(P("1 + t*u")) == P("y")
    assert section_to_q(P("1 + t")) == P("x")
    with pytest.raises(ArithmeticError):
        section_to_q(P("u"))


def test_three_way_agreement_up_to_three_vertices():
    for g in all_graphs_upto(3):
        a = q_subset(g)
        assert q_recursive(g) == a
        assert q_from_section(g) == a


def test_three_way_agreement_random_medium():
    rnd = random.Random(6)
    for _ in range(8):
        g = random_graph(rnd.randint(6, 8), rnd)
        a = q_subset(g)
        assert q_recursive(g) == a
        assert q_from_section(g) == a


@settings(max_examples=40)
@given(graphs(max_vertices=3), graphs(max_vertices=3))
def test_multiplicative_over_disjoint_union(g, h):
    assert q_subset(disjoint_union(g, h)) == q_subset(g) * q_subset(h)


@settings(max_examples=40)
@given(graphs(max_vertices=7))
def test_degree_bounds_and_value_at_two(g):
    q = q_subset(g)
    n = len(g)
    assert set(q.variables) <= {"x", "y"}
    assert q.degree("x") <= n and q.degree("y") <= n
    assert q.degree() <= 2 * n
    assert q_evaluate(q, 2, 2) == 2**n


def test_evaluate_examples():
    assert q_evaluate(P("x^2 - 2*x + 2*y"), 2, 2) == 4
    assert q_evaluate(P("x"), Fraction(5, 3), 0) == Fraction(5, 3)
    assert q_evaluate(ONE, 7, -1) == 1
    with pytest.raises(ValueError):
        q_evaluate(P("x + s"), 1, 1)


def test_workers_and_chunking_do_not_change_q():
    g = random_graph(10, random.Random(10))
    base = q_subset(g)
    assert q_subset(g, workers=4, chunk_bits=3) == base
    assert q_subset(g, chunk_bits=1) == base


def test_interlace_result():
    r = interlace(g_k2(), "recursive")
    assert r.method == "recursive"
    assert r.polynomial == P("x^2 - 2*x + 2*y")
    assert r.graph_fingerprint == g_k2().fingerprint()
    with pytest.raises(ValueError):
        interlace(g_k2(), "magic")


def test_cap():
    with pytest.raises(EnumerationCapError):
        q_subset(random_graph(5, random.Random(1)), cap=4)
    with pytest.raises(EnumerationCapError):
        q_from_section(random_graph(5, random.Random(1)), cap=4)


def test_identities_pass_on_all_graphs_up_to_three():
    from itp.checks import check_identities

    for g in all_graphs_upto(3):
        results = check_identities(g)
        assert all(r.passed is not False for r in results), [r for r in results if r.passed is False]


def test_vertex_nullity_specialisation_via_eval():
    # x = 2 leaves a polynomial in y only
    q = q_subset(g_k2())
    assert substitute(q, "x", 2) == MultiPoly.var("y") * 2
