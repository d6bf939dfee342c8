"""Sentence AST, vocabulary, weights, cardinality constraints and evidence."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .poly import Poly, as_rational


class LiftpolyError(Exception):
    """Base class for user-facing errors raised by the library."""


class VocabularyError(LiftpolyError):
    pass


@dataclass(frozen=True)
class Predicate:
    name: str
    arity: int

    def __post_init__(self):
        if self.arity not in (1, 2):
            raise VocabularyError(
                f"predicate {self.name}/{self.arity}: only arities 1 and 2 are supported")

    def __str__(self) -> str:
        return f"{self.name}/{self.arity}"


# --------------------------------------------------------------------------
# formulas

class Formula:
    """Base class of formula nodes. Nodes are immutable and hashable."""

    def __and__(self, other: "Formula") -> "Formula":
        return conj(self, other)

    def __or__(self, other: "Formula") -> "Formula":
        return disj(self, other)

    def __invert__(self) -> "Formula":
        return Not(self)


@dataclass(frozen=True)
class Truth(Formula):
    value: bool


TRUE = Truth(True)
FALSE = Truth(False)


@dataclass(frozen=True)
class Atom(Formula):
    pred: str
    args: tuple[str, ...]


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class And(Formula):
    args: tuple[Formula, ...]


@dataclass(frozen=True)
class Or(Formula):
    args: tuple[Formula, ...]


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class ExistsEq(Formula):
    """``exists_eq k var. body``: exactly ``k`` witnesses."""
    count: int
    var: str
    body: Formula


QUANTIFIERS = (Forall, Exists, ExistsEq)


def conj(*parts: Formula) -> Formula:
    flat: list[Formula] = []
    for p in parts:
        if p == TRUE:
            continue
        if p == FALSE:
            return FALSE
        flat.extend(p.args if isinstance(p, And) else (p,))
    if not flat:
        return TRUE
    return flat[0] if len(flat) == 1 else And(tuple(flat))


def disj(*parts: Formula) -> Formula:
    flat: list[Formula] = []
    for p in parts:
        if p == FALSE:
            continue
        if p == TRUE:
            return TRUE
        flat.extend(p.args if isinstance(p, Or) else (p,))
    if not flat:
        return FALSE
    return flat[0] if len(flat) == 1 else Or(tuple(flat))


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, (Truth, Atom)):
        return ()
    if isinstance(f, Not):
        return (f.arg,)
    if isinstance(f, (And, Or)):
        return f.args
    if isinstance(f, (Implies, Iff)):
        return (f.left, f.right)
    return (f.body,)


def walk(f: Formula) -> Iterator[Formula]:
    yield f
    for c in children(f):
        yield from walk(c)


def atoms(f: Formula) -> Iterator[Atom]:
    return (g for g in walk(f) if isinstance(g, Atom))


def free_vars(f: Formula) -> frozenset[str]:
    if isinstance(f, Atom):
        return frozenset(f.args)
    if isinstance(f, QUANTIFIERS):
        return free_vars(f.body) - {f.var}
    out: frozenset[str] = frozenset()
    for c in children(f):
        out |= free_vars(c)
    return out


def all_vars(f: Formula) -> frozenset[str]:
    out: set[str] = set()
    for g in walk(f):
        if isinstance(g, Atom):
            out.update(g.args)
        elif isinstance(g, QUANTIFIERS):
            out.add(g.var)
    return frozenset(out)


def rename(f: Formula, mapping: Mapping[str, str]) -> Formula:
    """Simultaneous renaming of variables (free and bound)."""
    if isinstance(f, Truth):
        return f
    if isinstance(f, Atom):
        return Atom(f.pred, tuple(mapping.get(a, a) for a in f.args))
    if isinstance(f, Not):
        return Not(rename(f.arg, mapping))
    if isinstance(f, And):
        return And(tuple(rename(a, mapping) for a in f.args))
    if isinstance(f, Or):
        return Or(tuple(rename(a, mapping) for a in f.args))
    if isinstance(f, Implies):
        return Implies(rename(f.left, mapping), rename(f.right, mapping))
    if isinstance(f, Iff):
        return Iff(rename(f.left, mapping), rename(f.right, mapping))
    if isinstance(f, ExistsEq):
        return ExistsEq(f.count, mapping.get(f.var, f.var), rename(f.body, mapping))
    return type(f)(mapping.get(f.var, f.var), rename(f.body, mapping))


def holds(f: Formula, value) -> bool:
    """Evaluate a quantifier-free formula; ``value(atom)`` gives atom truth."""
    if isinstance(f, Truth):
        return f.value
    if isinstance(f, Atom):
        return value(f)
    if isinstance(f, Not):
        return not holds(f.arg, value)
    if isinstance(f, And):
        return all(holds(a, value) for a in f.args)
    if isinstance(f, Or):
        return any(holds(a, value) for a in f.args)
    if isinstance(f, Implies):
        return (not holds(f.left, value)) or holds(f.right, value)
    if isinstance(f, Iff):
        return holds(f.left, value) == holds(f.right, value)
    raise ValueError(f"quantified subformula in propositional evaluation: {f}")


def simplify(f: Formula, value) -> Formula:
    """Partially evaluate: ``value(atom)`` returns True/False or None (unknown)."""
    if isinstance(f, Truth):
        return f
    if isinstance(f, Atom):
        v = value(f)
        return f if v is None else Truth(bool(v))
    if isinstance(f, Not):
        a = simplify(f.arg, value)
        return Truth(not a.value) if isinstance(a, Truth) else Not(a)
    if isinstance(f, And):
        return conj(*(simplify(a, value) for a in f.args))
    if isinstance(f, Or):
        return disj(*(simplify(a, value) for a in f.args))
    if isinstance(f, Implies):
        return disj(simplify(Not(f.left), value), simplify(f.right, value))
    if isinstance(f, Iff):
        a, b = simplify(f.left, value), simplify(f.right, value)
        if isinstance(a, Truth) and isinstance(b, Truth):
            return Truth(a.value == b.value)
        if isinstance(a, Truth):
            return b if a.value else simplify(Not(b), value)
        if isinstance(b, Truth):
            return a if b.value else simplify(Not(a), value)
        return Iff(a, b)
    raise ValueError(f"quantified subformula in propositional simplification: {f}")


# --------------------------------------------------------------------------
# cardinality constraints, evidence, axioms

COMPARATORS = ("<", "<=", "=", ">=", ">")


@dataclass(frozen=True)
class CountExpr:
    """Integer polynomial in the domain size ``n`` (e.g. ``n*(n-1)``)."""
    text: str
    poly: Poly

    def at(self, n: int) -> int:
        val = self.poly.eval({"n": n})
        val = Fraction(val)
        if val.denominator != 1:
            raise LiftpolyError(f"bound {self.text} is not an integer at n={n}")
        return int(val)

    def __str__(self) -> str:
        return self.text

    @classmethod
    def of(cls, value: int | str) -> "CountExpr":
        from .parser import parse_count_expr
        return parse_count_expr(str(value))


@dataclass(frozen=True)
class CardinalityConstraint:
    """``sum_i coeff_i * |P_i|  <op>  bound``.

    User sentences use a single predicate with coefficient 1; the normalizer
    also builds multi-predicate rows internally.
    """
    terms: tuple[tuple[str, int], ...]
    comparator: str
    bound: CountExpr

    def __post_init__(self):
        if self.comparator not in COMPARATORS:
            raise LiftpolyError(f"unknown comparator {self.comparator!r}")
        if any(c <= 0 for _, c in self.terms):
            raise LiftpolyError("cardinality coefficients must be positive")

    @classmethod
    def single(cls, pred: str, comparator: str, bound: int | str | CountExpr):
        if not isinstance(bound, CountExpr):
            bound = CountExpr.of(bound)
        return cls(((pred, 1),), comparator, bound)

    @property
    def predicates(self) -> tuple[str, ...]:
        return tuple(p for p, _ in self.terms)

    def satisfied(self, counts: Mapping[str, int], n: int) -> bool:
        lhs = sum(c * counts.get(p, 0) for p, c in self.terms)
        return compare(lhs, self.comparator, self.bound.at(n))


def compare(lhs: int, op: str, rhs: int) -> bool:
    return {
        "<": lhs < rhs, "<=": lhs <= rhs, "=": lhs == rhs,
        ">=": lhs >= rhs, ">": lhs > rhs,
    }[op]


@dataclass(frozen=True)
class GroundUnaryLiteral:
    pred: str
    element: int
    positive: bool = True

    def __post_init__(self):
        if self.element < 1:
            raise LiftpolyError("domain elements are numbered from 1")


AXIOM_KINDS = (
    "connected", "bipartite", "tree", "forest", "SC", "SCT", "AC", "DT", "DF", "LO",
    "perm", "BiAC", "polytree", "polyforest",
)
# kinds carrying a component count k (bipartite/forest/AC take it optionally)
_K_REQUIRED = {"connected", "perm"}
_K_OPTIONAL = {"bipartite", "forest", "AC"}


@dataclass(frozen=True)
class AxiomAnnotation:
    kind: str
    relation: str
    k: int | None = None
    root: str | None = None

    def __post_init__(self):
        if self.kind not in AXIOM_KINDS:
            raise LiftpolyError(f"unsupported axiom kind {self.kind!r}")
        if self.kind in _K_REQUIRED and self.k is None:
            raise LiftpolyError(f"axiom {self.kind} needs a component count, e.g. {self.kind}_1")
        if self.k is not None and self.kind not in _K_REQUIRED | _K_OPTIONAL:
            raise LiftpolyError(f"axiom {self.kind} does not take a component count")
        if self.k is not None and self.k < 1:
            raise LiftpolyError("component count must be positive")
        if self.kind == "DT" and self.root is None:
            raise LiftpolyError("DT axiom needs a root predicate: DT(R, Root)")

    @property
    def label(self) -> str:
        return self.kind if self.k is None else f"{self.kind}_{self.k}"

    def __str__(self) -> str:
        args = self.relation if self.root is None else f"{self.relation}, {self.root}"
        return f"{self.label}({args})"


# --------------------------------------------------------------------------
# weights

@dataclass(frozen=True)
class WeightMap:
    """Per-predicate ``(w, w_bar)``; predicates without an entry are rejected."""
    pairs: Mapping[str, tuple[object, object]] = field(default_factory=dict)

    def __post_init__(self):
        fixed = {}
        for p, (w, wb) in dict(self.pairs).items():
            fixed[p] = (_weight(w), _weight(wb))
        object.__setattr__(self, "pairs", fixed)

    def __getitem__(self, pred: str):
        try:
            return self.pairs[pred]
        except KeyError:
            raise LiftpolyError(f"predicate {pred} has no weight") from None

    def __contains__(self, pred: str) -> bool:
        return pred in self.pairs

    def get(self, pred: str, default=(1, 1)):
        return self.pairs.get(pred, default)

    def with_weight(self, pred: str, w, wbar) -> "WeightMap":
        pairs = dict(self.pairs)
        pairs[pred] = (w, wbar)
        return WeightMap(pairs)

    def completed(self, preds: Iterable[str]) -> "WeightMap":
        pairs = dict(self.pairs)
        for p in preds:
            pairs.setdefault(p, (1, 1))
        return WeightMap(pairs)


def _weight(w):
    return w if isinstance(w, Poly) else as_rational(w)


def literal_set_weight(literals: Iterable[tuple[str, tuple, bool]], weights: WeightMap):
    """Product of ``w`` over positive and ``w_bar`` over negative ground literals.

    Literals are ``(pred, args, positive)`` triples. An inconsistent set
    (both signs of one ground atom) is rejected.
    """
    seen: dict = {}
    result = 1
    for pred, args, positive in literals:
        key = (pred, tuple(args))
        if seen.get(key, positive) != positive:
            raise LiftpolyError(f"inconsistent literal set: both signs of {pred}{tuple(args)}")
        seen[key] = positive
        w, wbar = weights[pred]
        result = result * (w if positive else wbar)
    return result


# --------------------------------------------------------------------------
# sentences

@dataclass(frozen=True)
class Sentence:
    formula: Formula
    vocabulary: Mapping[str, Predicate]
    weights: WeightMap = field(default_factory=WeightMap)
    cardinality: tuple[CardinalityConstraint, ...] = ()
    evidence: tuple[GroundUnaryLiteral, ...] = ()
    axioms: tuple[AxiomAnnotation, ...] = ()

    def __post_init__(self):
        vocab = dict(self.vocabulary)
        object.__setattr__(self, "vocabulary", vocab)
        object.__setattr__(self, "weights", self.weights.completed(vocab))
        object.__setattr__(self, "cardinality", tuple(self.cardinality))
        object.__setattr__(self, "evidence", tuple(self.evidence))
        object.__setattr__(self, "axioms", tuple(self.axioms))
        check_formula(self.formula, vocab)
        if free_vars(self.formula):
            raise LiftpolyError(f"sentence has free variables {sorted(free_vars(self.formula))}")
        for c in self.cardinality:
            for p in c.predicates:
                if p not in vocab:
                    raise VocabularyError(f"cardinality constraint on undeclared predicate {p}")
        seen = {}
        for lit in self.evidence:
            pred = vocab.get(lit.pred)
            if pred is None:
                raise VocabularyError(f"evidence on undeclared predicate {lit.pred}")
            if pred.arity != 1:
                raise LiftpolyError(f"evidence must be unary; {lit.pred} is binary")
            key = (lit.pred, lit.element)
            if seen.get(key, lit.positive) != lit.positive:
                raise LiftpolyError(f"contradictory evidence on {lit.pred}({lit.element})")
            seen[key] = lit.positive
        for ax in self.axioms:
            pred = vocab.get(ax.relation)
            if pred is None or pred.arity != 2:
                raise LiftpolyError(f"axiom {ax}: relation must be a declared binary predicate")
            if ax.root is not None:
                root = vocab.get(ax.root)
                if root is None or root.arity != 1:
                    raise LiftpolyError(f"axiom {ax}: root must be a declared unary predicate")

    # convenience builders; each returns a new Sentence
    def conjoin(self, extra: Formula, new_preds: Iterable[Predicate] = (),
                weights: Mapping[str, tuple] | None = None,
                cardinality: Iterable[CardinalityConstraint] = ()) -> "Sentence":
        vocab = dict(self.vocabulary)
        wm = self.weights
        for p in new_preds:
            if p.name in vocab and vocab[p.name] != p:
                raise VocabularyError(f"predicate {p.name} redeclared with a different arity")
            vocab[p.name] = p
        for name, (w, wb) in (weights or {}).items():
            wm = wm.with_weight(name, w, wb)
        return replace(self, formula=conj(self.formula, extra), vocabulary=vocab,
                       weights=wm.completed(vocab),
                       cardinality=self.cardinality + tuple(cardinality))

    def with_weights(self, weights: WeightMap | Mapping) -> "Sentence":
        if not isinstance(weights, WeightMap):
            weights = WeightMap(weights)
        merged = dict(self.weights.pairs)
        merged.update(weights.pairs)
        return replace(self, weights=WeightMap(merged))

    def without_axioms(self) -> "Sentence":
        return replace(self, axioms=())

    def binary_predicates(self) -> list[str]:
        return [p.name for p in self.vocabulary.values() if p.arity == 2]


def fresh_name(base: str, taken: Iterable[str]) -> str:
    taken = set(taken)
    if base not in taken:
        return base
    i = 1
    while f"{base}{i}" in taken:
        i += 1
    return f"{base}{i}"


def top_conjuncts(f: Formula) -> tuple[Formula, ...]:
    return f.args if isinstance(f, And) else (f,)


def check_formula(f: Formula, vocab: Mapping[str, Predicate]) -> None:
    # the two-variable limit is per top-level conjunct; names may be reused
    for part in top_conjuncts(f):
        variables = all_vars(part)
        if len(variables) > 2:
            raise LiftpolyError(
                f"at most two logical variables are supported, found {sorted(variables)}")
    for a in atoms(f):
        pred = vocab.get(a.pred)
        if pred is None:
            raise VocabularyError(f"undeclared predicate {a.pred}")
        if pred.arity != len(a.args):
            raise VocabularyError(
                f"{a.pred} has arity {pred.arity} but is applied to {len(a.args)} arguments")
