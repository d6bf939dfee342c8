"""Rewrite sentences into a single universally quantified matrix over ``x, y``.

The pipeline is ``encode_counting_templates`` (exactly-one quantifiers to
existentials plus cardinality), ``skolemize`` (quantifier structure to a
matrix with negatively weighted Skolem predicates), and
``attach_cardinality_symbols`` (one polynomial symbol per constrained
predicate). :func:`normalize` runs all three.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping

from .fol import (
    And, Atom, CardinalityConstraint, CountExpr, Exists, ExistsEq, FALSE, Forall, Formula,
    GroundUnaryLiteral, Iff, Implies, LiftpolyError, Not, Or, Predicate, QUANTIFIERS, Sentence,
    Truth, WeightMap, all_vars, conj, free_vars, fresh_name, rename, top_conjuncts, walk,
)
from .poly import Poly

DEFAULT_GROUP_LIMIT = 8
HIDDEN_PREFIX = "__"


class UnsupportedSentence(LiftpolyError):
    pass


# --------------------------------------------------------------------------
# evidence groups

@dataclass(frozen=True)
class EvidenceGroup:
    signature: frozenset          # of (pred, positive)
    elements: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.elements)

    def admits(self, unary_values: Mapping[str, bool]) -> bool:
        """Whether a cell with these unary truth values fits the group's evidence."""
        return all(unary_values.get(p) == pos for p, pos in self.signature)


def evidence_groups(evidence: Iterable[GroundUnaryLiteral], n: int,
                    limit: int = DEFAULT_GROUP_LIMIT) -> list[EvidenceGroup]:
    sig: dict[int, set] = {i: set() for i in range(1, n + 1)}
    for lit in evidence:
        if lit.element > n:
            raise LiftpolyError(f"evidence mentions element {lit.element} but n = {n}")
        sig[lit.element].add((lit.pred, lit.positive))
    by_sig: dict[frozenset, list[int]] = {}
    for i in range(1, n + 1):
        by_sig.setdefault(frozenset(sig[i]), []).append(i)
    groups = [EvidenceGroup(s, tuple(el)) for s, el in by_sig.items()]
    groups.sort(key=lambda g: g.elements[0])
    if len(groups) > limit:
        raise LiftpolyError(
            f"{len(groups)} distinct evidence signatures exceed the limit of {limit}")
    return groups


# --------------------------------------------------------------------------
# normalized form

@dataclass(frozen=True)
class NormalizedSentence:
    matrix: Formula
    vocabulary: Mapping[str, Predicate]
    weights: WeightMap
    cardinality: tuple[CardinalityConstraint, ...] = ()
    evidence: tuple[GroundUnaryLiteral, ...] = ()
    symbols: Mapping[str, str] = field(default_factory=dict)   # predicate -> symbol
    group_limit: int = DEFAULT_GROUP_LIMIT

    @property
    def hidden(self) -> frozenset[str]:
        return frozenset(p for p in self.vocabulary if p.startswith(HIDDEN_PREFIX))

    def evidence_groups(self, n: int) -> list[EvidenceGroup]:
        return evidence_groups(self.evidence, n, self.group_limit)

    def symbolic_weights(self) -> WeightMap:
        """Weights with ``w(P)`` multiplied by the symbol of each constrained ``P``."""
        wm = self.weights
        for pred, sym in self.symbols.items():
            w, wb = wm[pred]
            wm = wm.with_weight(pred, Poly.var(sym) * w, wb)
        return wm

    def symbol_caps(self, n: int) -> dict[str, int]:
        """Largest symbol exponent that can still satisfy the constraints."""
        caps = {}
        for pred, sym in self.symbols.items():
            arity = self.vocabulary[pred].arity
            caps[sym] = n ** arity
        for c in self.cardinality:
            if c.comparator not in ("=", "<=", "<"):
                continue
            bound = c.bound.at(n) - (1 if c.comparator == "<" else 0)
            for pred, coeff in c.terms:
                sym = self.symbols[pred]
                caps[sym] = min(caps[sym], max(bound, -1) // coeff)
        return caps

    def extract(self, value, n: int):
        """Keep the symbol monomials satisfying every constraint, then drop the symbols."""
        if not self.symbols:
            return value
        value = Poly.lift(value)
        syms = {s: p for p, s in self.symbols.items()}
        idx = [(i, syms[v]) for i, v in enumerate(value.vars) if v in syms]
        rest = [i for i, v in enumerate(value.vars) if v not in syms]
        out: dict = {}
        for exp, coeff in value.terms.items():
            counts = {p: exp[i] for i, p in idx}
            if all(c.satisfied(counts, n) for c in self.cardinality):
                key = tuple(exp[i] for i in rest)
                out[key] = out.get(key, 0) + coeff
        kept = tuple(value.vars[i] for i in rest)
        result = Poly({k: c for k, c in out.items() if c}, kept)
        return result.constant_value() if not kept else result

    def with_weight(self, pred: str, w, wbar) -> "NormalizedSentence":
        return replace(self, weights=self.weights.with_weight(pred, w, wbar))

    def describe(self) -> str:
        from .parser import format_cardinality, format_formula
        lines = ["matrix: forall x. forall y. " + format_formula(self.matrix)]
        for name, p in self.vocabulary.items():
            w, wb = self.weights[name]
            lines.append(f"predicate {p}  weight ({w}, {wb})")
        for c in self.cardinality:
            lines.append(f"cardinality: {format_cardinality(c)}")
        for pred, sym in self.symbols.items():
            lines.append(f"symbol {sym} tracks |{pred}|")
        if self.evidence:
            lines.append("evidence: " + ", ".join(
                f"{'' if e.positive else '~'}{e.pred}({e.element})" for e in self.evidence))
        return "\n".join(lines)


# --------------------------------------------------------------------------
# exactly-one templates

def _n_minus(bound: CountExpr) -> CountExpr:
    return CountExpr.of(f"n - ({bound.text})")


def encode_counting_templates(s: Sentence) -> Sentence:
    """Replace supported ``exists_eq 1`` patterns by ``exists`` plus exact cardinality.

    Supported conjuncts (any variable names):

    * ``forall x. exists_eq 1 y. R(x,y)`` and ``forall x. exists_eq 1 y. R(y,x)``
      become the ``exists`` form plus ``|R| = n``;
    * ``forall x. (~G(x) -> exists_eq 1 y. R(y,x))``, with ``|G| = k`` declared,
      is encoded through a fresh ``Q(y,x) <-> R(y,x) & ~G(x)`` with
      ``forall x. (~G(x) -> exists y. Q(y,x))`` and ``|Q| = n - k``.
    """
    if not any(isinstance(g, ExistsEq) for g in walk(s.formula)):
        return s
    parts: list[Formula] = []
    total_n: list[str] = []
    extra_preds: list[Predicate] = []
    extra_card: list[CardinalityConstraint] = []
    taken = set(s.vocabulary)
    for part in top_conjuncts(s.formula):
        m = _match_template(part)
        if m is None:
            parts.append(part)
            continue
        kind, a, b, rel, guard = m
        if kind in ("out", "in"):
            atom = Atom(rel, (a, b) if kind == "out" else (b, a))
            parts.append(Forall(a, Exists(b, atom)))
            if rel not in total_n:
                total_n.append(rel)
            continue
        bound = _equality_bound(s.cardinality, guard)
        if bound is None:
            raise UnsupportedSentence(
                f"guarded exactly-one on {rel} needs an exact cardinality |{guard}| = k")
        q = fresh_name(f"{HIDDEN_PREFIX}q_{rel}", taken)
        taken.add(q)
        extra_preds.append(Predicate(q, 2))
        qa = Atom(q, (b, a))
        not_g = Not(Atom(guard, (a,)))
        parts.append(Forall(a, Forall(b, Iff(qa, And((Atom(rel, (b, a)), not_g))))))
        parts.append(Forall(a, Implies(not_g, Exists(b, qa))))
        extra_card.append(CardinalityConstraint.single(q, "=", _n_minus(bound)))
    for g in parts:
        for h in walk(g):
            if isinstance(h, ExistsEq):
                raise UnsupportedSentence(
                    "counting quantifier outside the supported exactly-one templates")
    for rel in total_n:
        extra_card.append(CardinalityConstraint.single(rel, "=", "n"))
    vocab = dict(s.vocabulary)
    for p in extra_preds:
        vocab[p.name] = p
    weights = s.weights
    for p in extra_preds:
        weights = weights.with_weight(p.name, 1, 1)
    return replace(s, formula=conj(*parts), vocabulary=vocab, weights=weights.completed(vocab),
                   cardinality=s.cardinality + tuple(extra_card))


def _match_template(f: Formula):
    if not isinstance(f, Forall):
        return None
    a, body = f.var, f.body
    guard = None
    if isinstance(body, Implies) and isinstance(body.left, Not):
        g = body.left.arg
        if isinstance(g, Atom) and g.args == (a,):
            guard, body = g.pred, body.right
    elif isinstance(body, Or) and len(body.args) == 2:
        g, rest = body.args
        if isinstance(g, Atom) and g.args == (a,):
            guard, body = g.pred, rest
    if not isinstance(body, ExistsEq):
        return None
    if body.count != 1:
        raise UnsupportedSentence(f"exists_eq {body.count} is not supported (only exists_eq 1)")
    b, atom = body.var, body.body
    if b == a or not isinstance(atom, Atom) or len(atom.args) != 2:
        return None
    if guard is None:
        if atom.args == (a, b):
            return ("out", a, b, atom.pred, None)
        if atom.args == (b, a):
            return ("in", a, b, atom.pred, None)
        return None
    if atom.args == (b, a):
        return ("guarded", a, b, atom.pred, guard)
    return None


def _equality_bound(cards, pred):
    for c in cards:
        if c.comparator == "=" and c.terms == ((pred, 1),):
            return c.bound
    return None


# --------------------------------------------------------------------------
# symmetric / irreflexive closure

def symmetric_irreflexive_clauses(rel: str) -> Formula:
    x, y = "x", "y"
    return And((Forall(x, Not(Atom(rel, (x, x)))),
                Forall(x, Forall(y, Implies(Atom(rel, (x, y)), Atom(rel, (y, x)))))))


def close_symmetric_irreflexive(s: Sentence, rel: str | Predicate) -> Sentence:
    name = rel.name if isinstance(rel, Predicate) else rel
    pred = s.vocabulary.get(name)
    if pred is None:
        pred = Predicate(name, 2)
    if pred.arity != 2:
        raise LiftpolyError(f"{name} is not binary")
    return s.conjoin(symmetric_irreflexive_clauses(name), [pred])


# --------------------------------------------------------------------------
# quantifier elimination

def _canonical(f: Formula) -> Formula:
    order: list[str] = []
    for g in walk(f):
        names = g.args if isinstance(g, Atom) else (g.var,) if isinstance(g, QUANTIFIERS) else ()
        for v in names:
            if v not in order:
                order.append(v)
    targets = ["x", "y"]
    if len(order) > 2:
        raise LiftpolyError(f"at most two logical variables are supported, found {order}")
    return rename(f, dict(zip(order, targets)))


def _other(v: str) -> str:
    return "y" if v == "x" else "x"


def _swap(f: Formula) -> Formula:
    return rename(f, {"x": "y", "y": "x"})


def _has_quantifier(f: Formula) -> bool:
    return any(isinstance(g, QUANTIFIERS) for g in walk(f))


def _quantified_occurrences(f: Formula, polarity: int = 1, out=None):
    """Maximal quantified subformulas with polarity (+1, -1, or 0 under iff)."""
    if out is None:
        out = []
    if isinstance(f, QUANTIFIERS):
        out.append((f, polarity))
    elif isinstance(f, Not):
        _quantified_occurrences(f.arg, -polarity, out)
    elif isinstance(f, (And, Or)):
        for a in f.args:
            _quantified_occurrences(a, polarity, out)
    elif isinstance(f, Implies):
        _quantified_occurrences(f.left, -polarity, out)
        _quantified_occurrences(f.right, polarity, out)
    elif isinstance(f, Iff):
        _quantified_occurrences(f.left, 0, out)
        _quantified_occurrences(f.right, 0, out)
    return out


def _replace(f: Formula, target: Formula, new: Formula) -> Formula:
    if f is target:
        return new
    if isinstance(f, Not):
        return Not(_replace(f.arg, target, new))
    if isinstance(f, And):
        return And(tuple(_replace(a, target, new) for a in f.args))
    if isinstance(f, Or):
        return Or(tuple(_replace(a, target, new) for a in f.args))
    if isinstance(f, Implies):
        return Implies(_replace(f.left, target, new), _replace(f.right, target, new))
    if isinstance(f, Iff):
        return Iff(_replace(f.left, target, new), _replace(f.right, target, new))
    return f


class _Flattener:
    def __init__(self, taken: Iterable[str]):
        self.taken = set(taken)
        self.universal: list[Formula] = []      # bodies of forall x forall y
        self.skolem_bodies: list[Formula] = []  # bodies of forall x exists y
        self.new_preds: list[Predicate] = []
        self.aux_weights: dict[str, tuple] = {}

    def fresh(self, base: str, arity: int, weights) -> str:
        i = 0
        while f"{base}{i}" in self.taken:
            i += 1
        name = f"{base}{i}"
        self.taken.add(name)
        self.new_preds.append(Predicate(name, arity))
        self.aux_weights[name] = weights
        return name

    # top-level conjunct, closed
    def top(self, f: Formula) -> None:
        if isinstance(f, Truth):
            if not f.value:
                self.universal.append(FALSE)
            return
        if isinstance(f, And):
            for a in f.args:
                self.top(a)
            return
        if isinstance(f, Not):
            a = f.arg
            if isinstance(a, Not):
                return self.top(a.arg)
            if isinstance(a, Forall):
                return self.top(Exists(a.var, Not(a.body)))
            if isinstance(a, Exists):
                return self.top(Forall(a.var, Not(a.body)))
            if isinstance(a, Or):
                return self.top(And(tuple(Not(b) for b in a.args)))
            if isinstance(a, Implies):
                return self.top(And((a.left, Not(a.right))))
        if isinstance(f, Forall):
            return self.forall(f.var, f.body)
        if isinstance(f, Exists):
            # exists v. B(v) == forall w. exists v. B(v)
            return self.forall_exists(_other(f.var), f.var, f.body)
        self.universal.append(self.flatten(f))

    def forall(self, v: str, body: Formula) -> None:
        w = _other(v)
        if isinstance(body, And):
            for a in body.args:
                self.forall(v, a)
            return
        if isinstance(body, Forall):
            if body.var == v:
                return self.forall(v, body.body)
            self.universal.append(self.flatten(body.body))
            return
        if isinstance(body, Exists):
            if body.var == v:
                return self.top(body)
            return self.forall_exists(v, body.var, body.body)
        if not _has_quantifier(body):
            self.universal.append(body)
            return
        occ = _quantified_occurrences(body)
        if len(occ) == 1:
            q, pol = occ[0]
            if pol != 0 and q.var == w and not isinstance(q, ExistsEq):
                inner = _replace(body, q, q.body)
                universal = isinstance(q, Forall) == (pol > 0)
                if universal:
                    self.universal.append(self.flatten(inner))
                else:
                    self.forall_exists(v, w, inner)
                return
        self.universal.append(self.flatten(body))

    def forall_exists(self, outer: str, inner: str, body: Formula) -> None:
        body = self.flatten(body)
        if outer != "x":
            body = _swap(body)
        self.skolem_bodies.append(body)

    def flatten(self, f: Formula) -> Formula:
        """Replace each maximal quantified subformula by a defined unary atom."""
        if isinstance(f, (Truth, Atom)):
            return f
        if isinstance(f, QUANTIFIERS):
            return self.define(f)
        if isinstance(f, Not):
            return Not(self.flatten(f.arg))
        if isinstance(f, And):
            return And(tuple(self.flatten(a) for a in f.args))
        if isinstance(f, Or):
            return Or(tuple(self.flatten(a) for a in f.args))
        if isinstance(f, Implies):
            return Implies(self.flatten(f.left), self.flatten(f.right))
        return Iff(self.flatten(f.left), self.flatten(f.right))

    def define(self, q: Formula) -> Formula:
        if isinstance(q, ExistsEq):
            raise UnsupportedSentence(
                "counting quantifier outside the supported exactly-one templates")
        v = q.var
        w = _other(v)
        z = Atom(self.fresh(f"{HIDDEN_PREFIX}z", 1, (1, 1)), (w,))
        phi = self.flatten(q.body)
        if isinstance(q, Forall):
            self.universal.append(Or((Not(z), phi)))
            self.forall_exists(w, v, Or((z, Not(phi))))
        else:
            self.forall_exists(w, v, Or((Not(z), phi)))
            self.universal.append(Or((z, Not(phi))))
        return z


def skolemize(s: Sentence, group_limit: int = DEFAULT_GROUP_LIMIT) -> NormalizedSentence:
    """Eliminate quantifiers; each ``forall x exists y phi`` becomes
    ``forall x forall y (Sk(x) | ~phi)`` with Skolem weights ``(1, -1)``."""
    fl = _Flattener(s.vocabulary)
    for part in top_conjuncts(s.formula):
        fl.top(_canonical(part))
    clauses = list(fl.universal)
    for body in fl.skolem_bodies:
        sk = fl.fresh(f"{HIDDEN_PREFIX}sk", 1, (1, -1))
        clauses.append(Or((Atom(sk, ("x",)), Not(body))))
    vocab = dict(s.vocabulary)
    for p in fl.new_preds:
        vocab[p.name] = p
    weights = s.weights
    for name, (w, wb) in fl.aux_weights.items():
        weights = weights.with_weight(name, w, wb)
    matrix = conj(*clauses)
    assert free_vars(matrix) <= {"x", "y"} and all_vars(matrix) <= {"x", "y"}
    return NormalizedSentence(matrix, vocab, weights.completed(vocab), s.cardinality,
                              s.evidence, {}, group_limit)


def attach_cardinality_symbols(ns: NormalizedSentence) -> NormalizedSentence:
    preds: list[str] = []
    for c in ns.cardinality:
        for p in c.predicates:
            if p not in preds:
                preds.append(p)
    return replace(ns, symbols={p: f"x_{p}" for p in preds})


def normalize(s: Sentence, group_limit: int = DEFAULT_GROUP_LIMIT) -> NormalizedSentence:
    return attach_cardinality_symbols(skolemize(encode_counting_templates(s), group_limit))
