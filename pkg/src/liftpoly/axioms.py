"""Graph axioms on a binary relation, answered by coefficient extraction and
point evaluation on the connectedness polynomials of an augmented sentence."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping

from .dp import Stats
from .fol import (
    And, Atom, AxiomAnnotation, CardinalityConstraint, Exists, ExistsEq, Forall, Iff, Implies,
    LiftpolyError, Not, Or, Predicate, Sentence, WeightMap, fresh_name,
)
from .normalize import HIDDEN_PREFIX, close_symmetric_irreflexive
from .poly import Poly, as_rational
from .scp import compute_nscp, compute_sscp, compute_sscp_edges, scp_at_u0
from .wcp import compute_extended_wcp, compute_wcp

x, y = "x", "y"


def _a(pred: str, *args: str) -> Atom:
    return Atom(pred, args)


def _fresh(s: Sentence, base: str) -> str:
    return fresh_name(HIDDEN_PREFIX + base, s.vocabulary)


# --------------------------------------------------------------------------
# sentence augmentations

def bipartite_encoding(s: Sentence, rel: str, symmetric: bool = True) -> Sentence:
    """Add a two-sided partition ``P1 | P2`` with no ``rel`` edge inside a side.

    With ``symmetric`` the relation is also closed to a simple undirected graph.
    """
    base = close_symmetric_irreflexive(s, rel) if symmetric else s
    p1 = _fresh(base, "side1")
    p2 = fresh_name(HIDDEN_PREFIX + "side2", set(base.vocabulary) | {p1})
    same = Or((And((_a(p1, x), _a(p1, y))), And((_a(p2, x), _a(p2, y)))))
    extra = And((
        Forall(x, Or((_a(p1, x), _a(p2, x)))),
        Forall(x, Not(And((_a(p1, x), _a(p2, x))))),
        Forall(x, Forall(y, Implies(same, Not(_a(rel, x, y))))),
    ))
    return base.conjoin(extra, [Predicate(p1, 1), Predicate(p2, 1)])


def tournament_encoding(s: Sentence, rel: str, eq: str | None = None) -> tuple[Sentence, str]:
    """Force ``rel`` to be a tournament, using an identity relation ``Eq`` with ``|Eq| = n``."""
    eq = eq or _fresh(s, "eq")
    extra = And((
        Forall(x, And((Not(_a(rel, x, x)), _a(eq, x, x)))),
        Forall(x, Forall(y, Implies(Not(_a(eq, x, y)),
                                    Iff(_a(rel, x, y), Not(_a(rel, y, x)))))),
    ))
    out = s.conjoin(extra, [Predicate(eq, 2)],
                    cardinality=[CardinalityConstraint.single(eq, "=", "n")])
    return out, eq


def linear_order_encoding(s: Sentence, rel: str) -> tuple[Sentence, str]:
    """A strict copy ``R'`` of ``rel`` that is a tournament; ``rel`` is reflexive and agrees off the diagonal."""
    strict = _fresh(s, "strict_" + rel)
    base = s.conjoin(Forall(x, _a(rel, x, x)), [Predicate(strict, 2)])
    base, eq = tournament_encoding(base, strict)
    link = Forall(x, Forall(y, Implies(Not(_a(eq, x, y)), Iff(_a(rel, x, y), _a(strict, x, y)))))
    return base.conjoin(link), strict


def permutation_encoding(s: Sentence, rel: str) -> Sentence:
    extra = And((Forall(x, ExistsEq(1, y, _a(rel, x, y))),
                 Forall(x, ExistsEq(1, y, _a(rel, y, x)))))
    return s.conjoin(extra)


def directed_tree_encoding(s: Sentence, rel: str, root: str) -> Sentence:
    """A single source marked by ``root``; every other vertex has exactly one parent."""
    src = _fresh(s, "source")
    extra = And((
        Forall(x, Implies(_a(src, x), _a(root, x))),
        Forall(x, Implies(Not(_a(src, x)), Exists(y, _a(rel, y, x)))),
        Forall(x, Forall(y, Implies(_a(src, x), Not(_a(rel, y, x))))),
    ))
    return s.conjoin(extra, [Predicate(src, 1)], cardinality=[
        CardinalityConstraint.single(src, "=", 1),
        CardinalityConstraint.single(rel, "=", "n - 1"),
    ])


def directed_forest_encoding(s: Sentence, rel: str) -> Sentence:
    """Roots have no parent, other vertices at least one, and ``|rel| + |roots| = n``."""
    roots = _fresh(s, "roots")
    extra = And((
        Forall(x, Implies(Not(_a(roots, x)), Exists(y, _a(rel, y, x)))),
        Forall(x, Forall(y, Implies(_a(roots, x), Not(_a(rel, y, x))))),
    ))
    total = CardinalityConstraint(((rel, 1), (roots, 1)), "=",
                                  CardinalityConstraint.single(rel, "=", "n").bound)
    return s.conjoin(extra, [Predicate(roots, 1)], cardinality=[total])


# --------------------------------------------------------------------------
# queries

def _shifted(p: Poly) -> Poly:
    return p.shift("u", -1)


def _coeff(p: Poly, monomial: Mapping[str, int]):
    return p.coefficient(dict(monomial))


def _value(p) -> Fraction | int:
    if isinstance(p, Poly):
        return p.constant_value()
    return as_rational(p)


def _sign(n: int) -> int:
    return -1 if n % 2 else 1


@dataclass
class AxiomQuery:
    """An augmented sentence, the engine to run on it, and how to read the answer."""
    axiom: AxiomAnnotation
    sentence: Sentence
    relation: str
    engine: str
    recipe: str
    run: Callable[[int, Stats | None], object]


def plan_axiom(s: Sentence, axiom: AxiomAnnotation) -> AxiomQuery:
    base = s.without_axioms()
    kind, k, rel = axiom.kind, axiom.k, axiom.relation
    pred = base.vocabulary.get(rel)
    if pred is None or pred.arity != 2:
        raise LiftpolyError(f"axiom {axiom}: relation must be binary")

    def query(sentence, engine, recipe, fn, relation=rel):
        return AxiomQuery(axiom, sentence, relation, engine, recipe, fn)

    if kind == "connected":
        psi = close_symmetric_irreflexive(base, rel)
        return query(psi, "wcp", f"[u^{k}] f(u-1)",
                     lambda n, st: _coeff(_shifted(compute_wcp(psi, n, rel, st)), {"u": k}))
    if kind == "bipartite":
        psi = bipartite_encoding(base, rel)
        if k is None:
            return query(psi, "wcp", "f(-1/2)",
                         lambda n, st: compute_wcp(psi, n, rel, st).eval({"u": Fraction(-1, 2)}))
        return query(psi, "wcp", f"(1/2)^{k} [u^{k}] f(u-1)",
                     lambda n, st: Fraction(1, 2 ** k)
                     * _coeff(_shifted(compute_wcp(psi, n, rel, st)), {"u": k}))
    if kind in ("tree", "forest"):
        psi = close_symmetric_irreflexive(base, rel)

        def run(n, st):
            cap = 2 * (n - 1)
            p = _shifted(compute_extended_wcp(psi, n, rel, st, v_cap=cap))
            if kind == "tree":
                return _coeff(p, {"u": 1, "v": cap})
            comps = range(1, n + 1) if k is None else [k]
            return sum((_coeff(p, {"u": i, "v": 2 * (n - i)}) for i in comps), 0)

        recipe = ("[u v^(2(n-1))] f(u-1, v)" if kind == "tree" else
                  "sum_i [u^i v^(2(n-i))] f(u-1, v)" if k is None else
                  f"[u^{k} v^(2(n-{k}))] f(u-1, v)")
        return query(psi, "extended_wcp", recipe, run)
    if kind in ("SC", "SCT"):
        psi = base
        if kind == "SCT":
            psi, _ = tournament_encoding(base, rel)
        return query(psi, "nscp", "-[u] nscp(u-1, -2)",
                     lambda n, st: -_value(_shifted(compute_nscp(psi, n, rel, st))
                                           .coefficient_in("u", 1).eval({"v": -2})))
    if kind == "AC" and k is None:
        return query(base, "sscp_u0", "(-1)^n sscp(0, -2)",
                     lambda n, st: _sign(n) * _value(
                         scp_at_u0(base, n, rel, "strict", stats=st).eval({"v": -2})))
    if kind == "AC":
        return query(base, "sscp", f"(-1)^n [u^{k}] sscp(u-1, -2)",
                     lambda n, st: _sign(n) * _value(
                         _shifted(compute_sscp(base, n, rel, st)).coefficient_in("u", k)
                         .eval({"v": -2})))
    if kind == "DT":
        psi = directed_tree_encoding(base, rel, axiom.root)
        return query(psi, "sscp_u0", "(-1)^n sscp(0, -2) on the directed-tree encoding",
                     lambda n, st: _sign(n) * _value(
                         scp_at_u0(psi, n, rel, "strict", stats=st).eval({"v": -2})))
    if kind == "DF":
        psi = directed_forest_encoding(base, rel)
        return query(psi, "sscp_u0", "(-1)^n sscp(0, -2) on the directed-forest encoding",
                     lambda n, st: _sign(n) * _value(
                         scp_at_u0(psi, n, rel, "strict", stats=st).eval({"v": -2})))
    if kind == "LO":
        psi, strict = linear_order_encoding(base, rel)
        return query(psi, "sscp_u0", "(-1)^n sscp(0, -2) on the strict copy",
                     lambda n, st: _sign(n) * _value(
                         scp_at_u0(psi, n, strict, "strict", stats=st).eval({"v": -2})),
                     relation=strict)
    if kind == "perm":
        psi = permutation_encoding(base, rel)
        return query(psi, "wcp", f"[u^{k}] f(u-1)",
                     lambda n, st: _coeff(_shifted(compute_wcp(psi, n, rel, st)), {"u": k}))
    if kind == "BiAC":
        psi = bipartite_encoding(base, rel, symmetric=False)
        return query(psi, "sscp", "(-1)^n sscp(-1/2, -2)",
                     lambda n, st: _sign(n) * _value(compute_sscp(psi, n, rel, st).eval(
                         {"u": Fraction(-1, 2), "v": -2})))
    if kind in ("polytree", "polyforest"):
        def run(n, st):
            p = _shifted(compute_sscp_edges(base, n, rel, t_cap=n - 1, stats=st))
            p = Poly.lift(p.eval({"v": -2}))
            comps = [1] if kind == "polytree" else range(1, n + 1)
            return _sign(n) * sum((_coeff(p, {"u": i, "t": n - i}) for i in comps), 0)

        recipe = ("(-1)^n [u t^(n-1)] sscp(u-1, -2, t)" if kind == "polytree" else
                  "(-1)^n sum_i [u^i t^(n-i)] sscp(u-1, -2, t)")
        return query(base, "sscp_edges", recipe, run)
    raise LiftpolyError(f"unsupported axiom {axiom}")


def single_axiom(s: Sentence) -> AxiomAnnotation:
    if len(s.axioms) != 1:
        raise LiftpolyError(f"expected exactly one axiom annotation, found {len(s.axioms)}")
    return s.axioms[0]


def wfomc_with_axiom(s: Sentence, n: int, weights: WeightMap | Mapping | None = None,
                     axiom: AxiomAnnotation | None = None, stats: Stats | None = None):
    """Weighted model count of ``s`` restricted to models whose relation satisfies the axiom."""
    if n < 1:
        raise LiftpolyError("domain size must be a positive integer")
    if weights is not None:
        s = s.with_weights(weights)
    axiom = axiom or single_axiom(s)
    return _value(plan_axiom(s, axiom).run(n, stats))


def soft_cc_evaluate(s: Sentence, n: int, relation: str, point,
                     weights: WeightMap | Mapping | None = None):
    """``f_n(point)``: each weakly connected component is weighted by ``point + 1``."""
    if weights is not None:
        s = s.with_weights(weights)
    return compute_wcp(s.without_axioms(), n, relation).eval({"u": point})
