from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from liftpoly.fol import (
    TRUE, Atom, AxiomAnnotation, CardinalityConstraint, Forall, GroundUnaryLiteral, LiftpolyError,
    Not, Predicate, Sentence, VocabularyError, WeightMap, literal_set_weight, rename,
)

W = WeightMap({"R": (2, 1), "S": (1, 1), "P": (3, -1)})


def test_literal_set_weight_follows_the_product_definition():
    # three positive R literals at w(R) = 2 give 8
    lits = [("R", (1, 1), True), ("R", (1, 2), False), ("R", (2, 1), True),
            ("R", (2, 2), True), ("S", (1,), True), ("S", (2,), True)]
    assert literal_set_weight(lits, W) == 8


def test_literal_set_weight_single_positive_edge():
    lits = [("R", (1, 1), False), ("R", (1, 2), True), ("R", (2, 1), False),
            ("R", (2, 2), False), ("S", (1,), True), ("S", (2,), True)]
    assert literal_set_weight(lits, W) == 2


def test_literal_set_weight_trivial_cases():
    assert literal_set_weight([], W) == 1
    assert literal_set_weight([("P", (1,), False)], W) == -1


def test_literal_set_weight_errors():
    with pytest.raises(LiftpolyError):
        literal_set_weight([("Q", (1,), True)], W)
    with pytest.raises(LiftpolyError):
        literal_set_weight([("P", (1,), True), ("P", (1,), False)], W)


ground = st.tuples(st.sampled_from("RSP"), st.integers(1, 3), st.integers(1, 3), st.booleans())


@given(st.lists(ground, unique_by=lambda t: t[:3]), st.lists(ground, unique_by=lambda t: t[:3]))
def test_literal_set_weight_is_multiplicative(a, b):
    a = [(p, (i, j), s) for p, i, j, s in a]
    b = [(p, (i + 10, j), s) for p, i, j, s in b]   # disjoint atoms
    assert literal_set_weight(a + b, W) == literal_set_weight(a, W) * literal_set_weight(b, W)


def test_weight_map_defaults_and_updates():
    w = WeightMap({"R": (Fraction(1, 2), 1)})
    assert w["R"] == (Fraction(1, 2), 1)
    assert w.with_weight("R", 3, 4)["R"] == (3, 4)
    assert w.completed(["R", "S"])["S"] == (1, 1)
    with pytest.raises(LiftpolyError):
        w["S"]


def test_predicate_arity_bounds():
    with pytest.raises(VocabularyError):
        Predicate("T", 3)


def test_cardinality_constraint_checks():
    c = CardinalityConstraint.single("R", "=", "n*(n-1)")
    assert c.satisfied({"R": 6}, 3)
    assert not c.satisfied({"R": 5}, 3)
    joint = CardinalityConstraint((("R", 1), ("S", 2)), "<=", CardinalityConstraint.single(
        "R", "=", "n").bound)
    assert joint.satisfied({"R": 1, "S": 1}, 3)
    assert not joint.satisfied({"R": 2, "S": 1}, 3)
    with pytest.raises(LiftpolyError):
        CardinalityConstraint.single("R", "~", 1)


def test_axiom_annotation_validation():
    assert str(AxiomAnnotation("connected", "R", 1)) == "connected_1(R)"
    with pytest.raises(LiftpolyError):
        AxiomAnnotation("connected", "R")
    with pytest.raises(LiftpolyError):
        AxiomAnnotation("tree", "R", 2)
    with pytest.raises(LiftpolyError):
        AxiomAnnotation("DT", "R")


def test_sentence_validation():
    vocab = {"R": Predicate("R", 2), "P": Predicate("P", 1)}
    f = Forall("x", Not(Atom("R", ("x", "x"))))
    with pytest.raises(LiftpolyError):
        Sentence(f, vocab, evidence=(GroundUnaryLiteral("R", 1, True),))
    with pytest.raises(LiftpolyError):
        Sentence(f, vocab, evidence=(GroundUnaryLiteral("P", 1, True),
                                     GroundUnaryLiteral("P", 1, False)))
    with pytest.raises(LiftpolyError):
        Sentence(f, vocab, axioms=(AxiomAnnotation("tree", "P"),))
    with pytest.raises(VocabularyError):
        Sentence(Atom("Q", ("x",)), vocab)
    s = Sentence(TRUE, vocab)
    assert s.binary_predicates() == ["R"]


def test_rename_is_simultaneous():
    f = Atom("R", ("x", "y"))
    assert rename(f, {"x": "y", "y": "x"}) == Atom("R", ("y", "x"))
