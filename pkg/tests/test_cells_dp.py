from itertools import product
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from common import CORPUS, DG, UG
from liftpoly.cells import compute_coefficients, enumerate_cells, wmc_ground
from liftpoly.dp import ConfigSpace, Ops, w_cross, w_in
from liftpoly.fol import FALSE, TRUE, Atom, Implies, Not, Or, WeightMap
from liftpoly.normalize import normalize
from liftpoly.oracle import wfomc_by_enumeration
from liftpoly.parser import parse_sentence


def _coeffs(s, rel="R"):
    ns = normalize(s)
    return compute_coefficients(ns, enumerate_cells(ns), rel)


def test_cells_before_and_after_pruning():
    s = parse_sentence("forall x. forall y. (F(x) & G(x,y))")
    ns = normalize(s)
    assert len(enumerate_cells(ns, prune=False)) == 4
    kept = enumerate_cells(ns)
    assert len(kept) == 1
    assert kept[0].as_dict() == {"F": True, "G": True}


def test_unary_only_sentence_has_two_cells():
    ns = normalize(parse_sentence("forall x. (P(x) | ~P(x))"))
    assert len(enumerate_cells(ns)) == 2


def test_ug_has_one_cell():
    ns = normalize(UG)
    cells = enumerate_cells(ns)
    assert len(cells) == 1 and cells[0].as_dict() == {"R": False}


def test_wmc_ground_examples():
    w = WeightMap({"R": (2, 1), "S": (1, 1)})
    f = Implies(Atom("R", ("a", "b")), Atom("S", ("a",)))
    assert wmc_ground(f, w) == 4
    taut = Or((Atom("S", ("a",)), Not(Atom("S", ("a",)))))
    assert wmc_ground(taut, w) == 2
    assert wmc_ground(FALSE, w) == 0
    assert wmc_ground(TRUE, WeightMap()) == 1


def test_coefficients_ug():
    co = _coeffs(UG)
    assert co.s == [2]
    assert co.s_nonadj == [1]
    assert co.is_symmetric_irreflexive()


def test_coefficients_dg():
    co = _coeffs(DG)
    assert co.s == [4]
    assert co.r_arrow[0][0] == 2
    assert co.s_nonadj == [1]
    assert not co.is_symmetric_irreflexive()


@settings(max_examples=11, deadline=None)
@given(st.sampled_from([c for c in CORPUS if not c[1].evidence]))
def test_pair_sum_matches_oracle_at_two(entry):
    # sum over ordered cell assignments of two elements
    _, s, rel = entry
    ns = normalize(s)
    co = compute_coefficients(ns, enumerate_cells(ns), rel, ns.symbolic_weights())
    L = len(co.cells)
    total = 0
    for i, j in product(range(L), repeat=2):
        total += co.cell_weight[i] * co.cell_weight[j] * co.r[i][j]
    assert ns.extract(total, 2) == wfomc_by_enumeration(s, 2)


def _space(s):
    ns = normalize(s)
    co = compute_coefficients(ns, enumerate_cells(ns), "R")
    return ConfigSpace(co, ns.evidence_groups(4)), co


def test_w_in_examples():
    space, co = _space(UG)
    ops = Ops()
    assert w_in(space, (0,), co.r, ops) == 1
    assert w_in(space, (2,), co.r, ops) == 2
    assert w_in(space, (3,), co.r, ops) == 8
    dspace, dco = _space(DG)
    assert w_in(dspace, (2,), dco.r, ops) == 4
    assert w_in(dspace, (2,), dco.r_nonadj, ops) == 1


def test_w_cross_examples():
    space, co = _space(UG)
    ops = Ops()
    assert w_cross(space, (0,), (3,), co.r_nonadj, ops) == 1
    assert w_cross(space, (1,), (2,), co.r_nonadj, ops) == 1
    zero = [[0]]
    assert w_cross(space, (1,), (2,), zero, ops) == 0
    assert w_cross(space, (0,), (2,), zero, ops) == 1


def test_config_space_and_multinomials():
    s = parse_sentence("forall x. (P(x) | ~P(x))")
    ns = normalize(s)
    co = compute_coefficients(ns, enumerate_cells(ns))
    space = ConfigSpace(co, ns.evidence_groups(3))
    assert len(space.full) == 4            # (0,3), (1,2), (2,1), (3,0)
    assert sorted(space.multinomial(c) for c in space.full) == [1, 1, 3, 3]
    assert sum(space.multinomial(c) for c in space.full) == 2 ** 3


def test_configs_are_graded():
    space, _ = _space(DG)
    totals = [sum(c) for c in space.configs]
    assert totals == sorted(totals)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_config_counts(n):
    s = parse_sentence("forall x. forall y. (R(x,y) -> (A(x) | B(y)))")
    ns = normalize(s)
    co = compute_coefficients(ns, enumerate_cells(ns), "R")
    space = ConfigSpace(co, ns.evidence_groups(n))
    L = len(co.cells)
    assert len(space.full) == comb(n + L - 1, L - 1)
