import pytest
from hypothesis import given, settings, strategies as st

from common import CORPUS, DG, DT, rows_poly
from liftpoly.axioms import tournament_encoding
from liftpoly.fol import LiftpolyError
from liftpoly.oracle import (
    chromatic_polynomial, relation_sum, scp_by_enumeration, weak_components,
)
from liftpoly.parser import parse_sentence
from liftpoly.poly import Poly
from liftpoly.scp import compute_nscp, compute_scp, compute_sscp, compute_sscp_edges, scp_at_u0
from liftpoly.wcp import compute_wcp
from tables import (
    DG_NSCP_SHIFTED, DG_SSCP_SHIFTED, DG_TOURNAMENT_NSCP_SHIFTED, DT_SSCP_AT_U0,
)

TN = tournament_encoding(DG, "R")[0]


def _min_n(s):
    return max([l.element for l in s.evidence], default=1)


@pytest.mark.parametrize("n", range(1, 7))
def test_dg_nonstrict_rows(n):
    assert compute_nscp(DG, n, "R").shift("u", -1) == rows_poly(DG_NSCP_SHIFTED[n])


@pytest.mark.parametrize("n", range(1, 7))
def test_tournament_nonstrict_rows(n):
    assert compute_nscp(TN, n, "R").shift("u", -1) == rows_poly(DG_TOURNAMENT_NSCP_SHIFTED[n])


@pytest.mark.parametrize("n", range(1, 7))
def test_dg_strict_rows(n):
    assert compute_sscp(DG, n, "R").shift("u", -1) == rows_poly(DG_SSCP_SHIFTED[n])


@pytest.mark.parametrize("n", range(1, 7))
def test_directed_tree_column(n):
    assert scp_at_u0(DT, n, "E", "strict") == rows_poly(DT_SSCP_AT_U0[n])


def test_column_matches_full_grid():
    for n in (1, 2, 3):
        full = compute_sscp(DG, n, "R")
        assert Poly.lift(full.eval({"u": 0})) == scp_at_u0(DG, n, "R", "strict")


@pytest.mark.parametrize("name,s,rel", CORPUS, ids=[c[0] for c in CORPUS])
@pytest.mark.parametrize("mode", ["strict", "nonstrict"])
def test_oracle_identity(name, s, rel, mode):
    for n in range(_min_n(s), 4):
        assert compute_scp(s, n, rel, mode) == scp_by_enumeration(s, n, rel, mode)


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(CORPUS), st.integers(1, 3))
def test_nonstrict_at_v_zero_is_wcp(entry, n):
    _, s, rel = entry
    if n < _min_n(s):
        return
    g = compute_nscp(s, n, rel)
    assert Poly.lift(g.eval({"v": 0})) == compute_wcp(s, n, rel)
    assert all(d <= n for d in (g.degree("u"), g.degree("v")))


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(CORPUS), st.integers(1, 3))
def test_strict_at_v_zero_counts_edgeless(entry, n):
    _, s, rel = entry
    if n < _min_n(s):
        return
    g = compute_sscp(s, n, rel)
    u1 = Poly.var("u") + 1
    edgeless = Poly.lift(relation_sum(
        s, n, rel, lambda gr: u1.pow(gr.n) if not gr.edges else Poly.const(0)))
    assert Poly.lift(g.eval({"v": 0})) == edgeless


def test_edge_tracking_collapses():
    for n in (1, 2, 3):
        tri = compute_sscp_edges(DG, n, "R")
        assert Poly.lift(tri.eval({"t": 1})) == compute_sscp(DG, n, "R")


def test_edge_tracking_against_oracle():
    n = 3
    u1, v1, t = Poly.var("u") + 1, Poly.var("v") + 1, Poly.var("t")
    want = relation_sum(DG, n, "R", lambda g: u1.pow(weak_components(g))
                        * chromatic_polynomial(g, True).eval({"x": v1}) * t.pow(len(g.edges)))
    assert compute_sscp_edges(DG, n, "R") == want


def test_strict_loops_contribute_nothing():
    loops = parse_sentence("forall x. R(x,x)")
    assert compute_sscp(loops, 2, "R").is_zero()


def test_bad_mode():
    with pytest.raises(LiftpolyError):
        compute_scp(DG, 2, "R", "weak")
