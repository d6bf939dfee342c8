from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from liftpoly.fol import (
    FALSE, TRUE, And, Atom, Exists, ExistsEq, Forall, Iff, Implies, LiftpolyError, Not, Or,
    Predicate, VocabularyError, atoms,
)
from liftpoly.parser import (
    SentenceSyntaxError, format_cardinality, format_formula, format_sentence, load_sentence,
    parse_axiom, parse_cardinality, parse_count_expr, parse_formula, parse_sentence,
)

VARS = st.sampled_from(["x", "y"])
leaves = st.one_of(
    st.just(TRUE), st.just(FALSE),
    st.builds(lambda a: Atom("P", (a,)), VARS),
    st.builds(lambda a, b: Atom("R", (a, b)), VARS, VARS),
)


def _extend(children):
    pair = st.lists(children, min_size=2, max_size=3).map(tuple)
    return st.one_of(
        st.builds(Not, children),
        st.builds(And, pair),
        st.builds(Or, pair),
        st.builds(Implies, children, children),
        st.builds(Iff, children, children),
        st.builds(Forall, VARS, children),
        st.builds(Exists, VARS, children),
        st.builds(lambda v, b: ExistsEq(1, v, b), VARS, children),
    )


formulas = st.recursive(leaves, _extend, max_leaves=8)


@settings(max_examples=200)
@given(formulas)
def test_format_parse_round_trip(f):
    assert parse_formula(format_formula(f)) == f


def test_examples():
    f = parse_formula("forall x. ~R(x,x)")
    assert f == Forall("x", Not(Atom("R", ("x", "x"))))
    g = parse_formula("forall x. forall y. (R(x,y) -> S(y))")
    assert g == Forall("x", Forall("y", Implies(Atom("R", ("x", "y")), Atom("S", ("y",)))))


def test_arity_three_rejected():
    with pytest.raises(VocabularyError):
        parse_sentence("forall x. forall y. forall z. T(x,y,z)")


def test_third_variable_rejected():
    with pytest.raises(LiftpolyError, match="two logical variables"):
        parse_sentence("forall x. forall y. forall z. (R(x,y) & R(y,z))")


def test_numeral_argument_has_position():
    with pytest.raises(SentenceSyntaxError) as err:
        parse_formula("forall x. R(x,1)")
    assert err.value.column is not None and err.value.column > 1


def test_syntax_error_line_number():
    with pytest.raises(SentenceSyntaxError) as err:
        parse_sentence("predicate R/2\nsentence: forall x. R(x,\n")
    assert err.value.line == 2


def test_precedence():
    f = parse_formula("A(x) | B(x) & C(x) -> D(x) -> E(x)")
    a, b, c, d, e = (Atom(p, ("x",)) for p in "ABCDE")
    assert f == Implies(Or((a, And((b, c)))), Implies(d, e))


def test_iff_is_not_associative():
    with pytest.raises(SentenceSyntaxError):
        parse_formula("A(x) <-> B(x) <-> C(x)")


def test_count_expressions():
    assert parse_count_expr("n*(n-1)").at(3) == 6
    assert parse_count_expr("n - 1").at(5) == 4
    assert parse_count_expr("7").at(2) == 7
    with pytest.raises(LiftpolyError):
        parse_count_expr("n / 2")


def test_cardinality_round_trip():
    for text in ["|R| = n*(n-1)", "|R| + 2*|S| <= n", "|P| > 0"]:
        c = parse_cardinality(text)
        assert parse_cardinality(format_cardinality(c)) == c


def test_axiom_annotation():
    ax = parse_axiom("connected_2(R)")
    assert (ax.kind, ax.relation, ax.k, ax.root) == ("connected", "R", 2, None)
    ax = parse_axiom("DT(E, root)")
    assert (ax.kind, ax.relation, ax.root) == ("DT", "E", "root")
    with pytest.raises(SentenceSyntaxError):
        parse_axiom("wheel(R)")


FILE = """
predicate R/2, S/1
weight R = 2, 1          # w, wbar
sentence: forall x. forall y. (R(x,y) -> S(y))
cardinality: |R| = n*(n-1)
evidence: S(1), ~S(2)
axiom: tree(R)
"""


def test_file_format_round_trip(tmp_path):
    s = parse_sentence(FILE)
    assert s.vocabulary == {"R": Predicate("R", 2), "S": Predicate("S", 1)}
    assert s.weights["R"] == (2, 1)
    assert len(s.evidence) == 2 and len(s.axioms) == 1
    again = parse_sentence(format_sentence(s))
    assert again == s
    path = tmp_path / "s.lp"
    path.write_text(FILE)
    assert load_sentence(path) == s


def test_undeclared_predicate_rejected():
    with pytest.raises(VocabularyError):
        parse_sentence("predicate R/2\nsentence: forall x. S(x)")


def test_rational_weights():
    s = parse_sentence("predicate P/1\nweight P = 1/2, -3\nsentence: forall x. P(x)")
    assert s.weights["P"] == (Fraction(1, 2), -3)


@given(formulas)
def test_vocabulary_covers_every_atom(f):
    s = parse_sentence(format_formula(Forall("x", Forall("y", f))))
    assert all(a.pred in s.vocabulary for a in atoms(s.formula))
