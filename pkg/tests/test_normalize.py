import pytest
from hypothesis import given, settings, strategies as st

from common import CORPUS, DT, EMPTY, UG
from liftpoly.fol import GroundUnaryLiteral, LiftpolyError
from liftpoly.normalize import (
    UnsupportedSentence, attach_cardinality_symbols, close_symmetric_irreflexive,
    encode_counting_templates, evidence_groups, normalize, skolemize,
)
from liftpoly.oracle import wfomc_by_enumeration
from liftpoly.parser import parse_sentence
from liftpoly.wcp import wfomc

EXISTS = parse_sentence("forall x. exists y. R(x,y)")


def test_existential_closed_form():
    assert wfomc(EXISTS, 2) == 9
    assert wfomc(EXISTS, 3) == 343
    assert wfomc_by_enumeration(EXISTS, 3) == 343


def test_skolem_weights():
    ns = skolemize(EXISTS)
    hidden = sorted(ns.hidden)
    assert hidden and all(ns.weights[p] == (1, -1) for p in hidden if "sk" in p)


def test_universal_sentence_unchanged():
    ns = skolemize(UG)
    assert ns.hidden == frozenset()
    assert set(ns.vocabulary) == {"R"}


def test_counting_templates():
    perm = parse_sentence("forall x. exists_eq 1 y. R(x,y)")
    enc = encode_counting_templates(perm)
    assert any(c.bound.at(4) == 4 and c.predicates == ("R",) for c in enc.cardinality)
    assert [wfomc(perm, n) for n in (1, 2, 3)] == [1, 4, 27]
    plain = encode_counting_templates(UG)
    assert plain == UG


def test_guarded_template_counts_functional_digraphs():
    # root choice, one parent per non-root vertex, free in-edges of the root
    assert [wfomc(DT, n) for n in (1, 2, 3, 4)] == [n * n ** (n - 1) * 2 ** n for n in (1, 2, 3, 4)]
    assert wfomc_by_enumeration(DT, 3) == 216


def test_unsupported_counting_pattern():
    bad = parse_sentence("forall x. forall y. (exists_eq 1 y. R(x,y))")
    with pytest.raises(UnsupportedSentence):
        normalize(bad)


def test_cardinality_extraction():
    s = parse_sentence("predicate R/2\nsentence: true\ncardinality: |R| = n")
    ns = attach_cardinality_symbols(skolemize(s))
    assert ns.symbols == {"R": "x_R"}
    assert wfomc(s, 3) == 84      # C(9, 3)
    e = parse_sentence("predicate E/2\nsentence: forall x. ~E(x,x)\ncardinality: |E| = n*(n-1)")
    assert wfomc(e, 3) == 1


def test_cardinality_partition_recovers_unconstrained_count():
    n = 2
    total = sum(wfomc(parse_sentence(
        f"predicate R/2\nsentence: true\ncardinality: |R| = {k}"), n) for k in range(n * n + 1))
    assert total == wfomc(EMPTY, n)


def test_close_symmetric_irreflexive():
    closed = close_symmetric_irreflexive(EMPTY, "R")
    assert [wfomc(closed, n) for n in (1, 2, 3)] == [1, 2, 8]
    twice = close_symmetric_irreflexive(closed, "R")
    assert [wfomc(twice, n) for n in (1, 2, 3)] == [1, 2, 8]
    fs = parse_sentence("predicate fr/2, sm/1\nsentence: forall x. forall y. "
                        "((sm(x) & fr(x,y)) -> sm(y))")
    closed = close_symmetric_irreflexive(fs, "fr")
    from liftpoly.oracle import relation_sum
    assert relation_sum(closed, 3, "fr", lambda g: int(g.is_symmetric() and not g.loops())) \
        == wfomc_by_enumeration(closed, 3)


def test_evidence_groups():
    ev = [GroundUnaryLiteral("P", 1, True), GroundUnaryLiteral("P", 2, False)]
    groups = evidence_groups(ev, 4)
    assert sorted(g.size for g in groups) == [1, 1, 2]
    with pytest.raises(LiftpolyError):
        evidence_groups(ev, 1)


@settings(max_examples=10, deadline=None)
@given(st.sampled_from(CORPUS), st.integers(1, 3))
def test_normalization_preserves_wfomc(entry, n):
    _, s, _ = entry
    if any(l.element > n for l in s.evidence):
        return
    assert wfomc(s, n) == wfomc_by_enumeration(s, n)
