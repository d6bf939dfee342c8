from itertools import combinations, permutations, product
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from common import DG, UG, rows_poly
from liftpoly.oracle import (
    DirectedGraph, OracleTooLarge, chromatic_polynomial, colouring_counts, enumerate_models,
    graph_property_check, is_acyclic, is_strongly_connected, scp_by_enumeration,
    surjective_colourings, tutte_deletion_contraction, wcp_by_enumeration, weak_components,
    wfomc_by_enumeration,
)
from liftpoly.parser import parse_sentence
from tables import DG_NSCP_SHIFTED, DG_SSCP_SHIFTED, UG_WCP_SHIFTED


def _undirected(n, pairs):
    return DirectedGraph(n, frozenset(pairs) | frozenset((b, a) for a, b in pairs))


def test_closed_forms():
    s = parse_sentence("predicate R/2, S/1\nweight R = 2, 1\n"
                       "sentence: forall x. forall y. (R(x,y) -> S(y))")
    assert wfomc_by_enumeration(s, 2) == 100
    assert wfomc_by_enumeration(parse_sentence("forall x. exists y. R(x,y)"), 2) == 9


def test_unsatisfiable_has_no_models():
    s = parse_sentence("forall x. (P(x) & ~P(x))")
    assert list(enumerate_models(s, 2)) == []
    assert wfomc_by_enumeration(s, 2) == 0


def test_enumerated_worlds_are_models():
    worlds = list(enumerate_models(DG, 2))
    assert len(worlds) == 4
    assert all(not w.holds("R", i, i) for w, _ in worlds for i in (1, 2))


def test_guard():
    with pytest.raises(OracleTooLarge):
        wfomc_by_enumeration(DG, 6)


def test_table_rows():
    assert wcp_by_enumeration(UG, 2, "R").shift("u", -1) == rows_poly(UG_WCP_SHIFTED[2])
    assert scp_by_enumeration(DG, 1, "R", "nonstrict").shift("u", -1) == \
        rows_poly(DG_NSCP_SHIFTED[1])
    assert scp_by_enumeration(DG, 3, "R", "strict").shift("u", -1) == \
        rows_poly(DG_SSCP_SHIFTED[3])


def test_graph_property_examples():
    triangle = _undirected(3, [(0, 1), (1, 2), (0, 2)])
    assert not graph_property_check(triangle, "bipartite")
    path = _undirected(3, [(0, 1), (1, 2)])
    assert graph_property_check(path, "tree")
    cycle = DirectedGraph(3, frozenset({(0, 1), (1, 2), (2, 0)}))
    assert graph_property_check(cycle, "SC")
    assert not graph_property_check(cycle, "AC")


def test_graph_helpers():
    g = DirectedGraph(4, frozenset({(0, 1), (2, 3)}))
    assert weak_components(g) == 2
    assert is_acyclic(g)
    assert not is_strongly_connected(g)
    assert DirectedGraph.from_code(4, g.code) == g


def test_colouring_examples():
    edge = DirectedGraph(2, frozenset({(0, 1)}))
    assert colouring_counts(edge, True, 3) == (0, 1, 3)
    assert colouring_counts(edge, False, 3) == (1, 3, 6)
    empty = DirectedGraph(3, frozenset())
    assert chromatic_polynomial(empty, True) == rows_poly("x^3")


digraphs = st.integers(1, 4).flatmap(
    lambda n: st.integers(0, 2 ** (n * n) - 1).map(lambda c: DirectedGraph.from_code(n, c)))


@settings(max_examples=60, deadline=None)
@given(digraphs, st.booleans())
def test_chromatic_interpolation_holdout(g, strict):
    chi = chromatic_polynomial(g, strict)
    counts = colouring_counts(g, strict, g.n + 4)
    for k in range(g.n + 2, g.n + 5):
        assert chi.eval({"x": k}) == counts[k - 1]


def _brute_colourings(g, k, strict):
    cmp = (lambda a, b: a < b) if strict else (lambda a, b: a <= b)
    return sum(all(cmp(c[a], c[b]) for a, b in g.edges) for c in product(range(k), repeat=g.n))


@settings(max_examples=40, deadline=None)
@given(digraphs, st.booleans(), st.integers(0, 4))
def test_surjective_colourings(g, strict, k):
    total = _brute_colourings(g, k, strict)
    assert total == sum(comb(k, i) * surjective_colourings(g, strict, i) for i in range(k + 1))


def test_tutte_oracle():
    assert tutte_deletion_contraction([(0, 1), (1, 2), (0, 2)]) == rows_poly("x^2 + x + y")
    k4 = list(combinations(range(4), 2))
    t = tutte_deletion_contraction(k4)
    assert t.eval({"x": 1, "y": 1}) == 16
    assert t.eval({"x": 2, "y": 2}) == 2 ** 6


def test_linear_order_check():
    n = 3
    count = 0
    for perm in permutations(range(n)):
        pos = {v: i for i, v in enumerate(perm)}
        edges = {(a, b) for a in range(n) for b in range(n) if pos[a] <= pos[b]}
        count += graph_property_check(DirectedGraph(n, frozenset(edges)), "LO")
    assert count == 6
