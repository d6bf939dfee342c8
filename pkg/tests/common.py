"""Shared sentences and helpers for the test suite."""
from __future__ import annotations

import re
from fractions import Fraction

from liftpoly.fol import AxiomAnnotation
from liftpoly.parser import parse_sentence
from liftpoly.poly import Poly

UG = parse_sentence("""
predicate R/2
sentence: forall x. ~R(x,x)
sentence: forall x. forall y. (R(x,y) -> R(y,x))
""")
DG = parse_sentence("predicate R/2\nsentence: forall x. ~R(x,x)")
EMPTY = parse_sentence("predicate R/2\nsentence: true")
DT = parse_sentence("""
predicate root/1, E/2
sentence: forall x. (~root(x) -> exists_eq 1 y. E(y,x))
cardinality: |root| = 1
""")
FRIENDS_SMOKERS = parse_sentence("""
predicate F/2, S/1, C/1
weight S = 2, 1
weight C = 1/2, 3
sentence: forall x. forall y. ((S(x) & F(x,y)) -> S(y))
sentence: forall x. (S(x) -> C(x))
""")

# (name, sentence, relation); every entry is cheap enough for brute force at n <= 3
CORPUS = [
    ("ug", UG, "R"),
    ("dg", DG, "R"),
    ("empty", EMPTY, "R"),
    ("friends_smokers", FRIENDS_SMOKERS, "F"),
    ("friends_smokers_exists", parse_sentence("""
predicate F/2, S/1
weight S = 3, 1
weight F = 1, 2
sentence: forall x. forall y. ((S(x) & F(x,y)) -> S(y))
sentence: forall x. exists y. F(x,y)
"""), "F"),
    ("ug_cardinality", parse_sentence("""
predicate R/2
sentence: forall x. ~R(x,x)
sentence: forall x. forall y. (R(x,y) -> R(y,x))
cardinality: |R| <= 4
"""), "R"),
    ("dg_evidence", parse_sentence("""
predicate R/2, P/1
weight P = 2, 1
sentence: forall x. forall y. (R(x,y) -> (P(x) | ~P(y)))
evidence: P(1), ~P(2)
"""), "R"),
    ("weighted_symmetric", parse_sentence("""
predicate R/2, A/1
weight R = 2, 1/3
weight A = -1, 2
sentence: forall x. forall y. (R(x,y) <-> R(y,x))
sentence: forall x. (A(x) -> ~R(x,x))
"""), "R"),
    ("counting", parse_sentence("""
predicate R/2
sentence: forall x. exists_eq 1 y. R(x,y)
"""), "R"),
    ("unary_cardinality", parse_sentence("""
predicate R/2, P/1
sentence: forall x. forall y. ((P(x) & R(x,y)) -> P(y))
cardinality: |P| = 1
"""), "R"),
    ("dt", DT, "E"),
]


def rows_poly(text: str) -> Poly:
    """Parse a row such as ``3 u + (-1/2)v - 4v^2 + u v^{10}``."""
    t = text.replace(" ", "").replace("{", "").replace("}", "")
    terms = re.findall(r"[+-]?(?:\([^)]*\)|[^+-])+", t)
    acc = Poly.const(0)
    for term in terms:
        sign = -1 if term.startswith("-") else 1
        term = term.lstrip("+-")
        m = re.fullmatch(r"(\((-?\d+(?:/\d+)?)\)|\d+)?((?:[a-z](?:\^\d+)?)*)", term)
        assert m is not None, term
        coeff = Fraction(m.group(2) or m.group(1) or 1) * sign
        mono = Poly.const(coeff)
        for var, power in re.findall(r"([a-z])(?:\^(\d+))?", m.group(3)):
            mono = mono * Poly.var(var, int(power or 1))
        acc = acc + mono
    return acc


def axiom(kind: str, rel: str = "R", k: int | None = None, root: str | None = None):
    return AxiomAnnotation(kind, rel, k, root)
