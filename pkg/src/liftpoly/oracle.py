"""Brute-force ground truth by enumerating every interpretation on a small domain.

Worlds are bit vectors over the ground atoms, evaluated in numpy chunks. The
oracle works on the original sentence (quantifiers, counting quantifiers,
cardinality, evidence), never on the normalized form, so it is independent
of the lifted engines.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Callable, Iterator

import numpy as np

from .fol import (
    And, Atom, AxiomAnnotation, Exists, ExistsEq, Forall, Formula, Iff, Implies, LiftpolyError,
    Not, Or, Sentence, Truth, compare,
)
from .poly import Poly, interpolate_1d

ATOM_LIMIT = 30
CHUNK_BITS = 20


class OracleTooLarge(LiftpolyError):
    pass


# --------------------------------------------------------------------------
# graphs

@dataclass(frozen=True)
class DirectedGraph:
    """Vertices ``0..n-1``; ``edges`` holds ordered pairs (loops allowed)."""
    n: int
    edges: frozenset

    @classmethod
    def from_code(cls, n: int, code: int) -> "DirectedGraph":
        return cls(n, frozenset((i, j) for i in range(n) for j in range(n)
                                if code >> (i * n + j) & 1))

    @property
    def code(self) -> int:
        return sum(1 << (i * self.n + j) for i, j in self.edges)

    def loops(self) -> bool:
        return any(i == j for i, j in self.edges)

    def is_symmetric(self) -> bool:
        return all((j, i) in self.edges for i, j in self.edges)

    def undirected(self) -> set[frozenset]:
        return {frozenset(e) for e in self.edges if e[0] != e[1]}

    def in_degree(self, v: int) -> int:
        return sum(1 for _, j in self.edges if j == v)


def weak_components(g: DirectedGraph) -> int:
    parent = list(range(g.n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i, j in g.edges:
        parent[find(i)] = find(j)
    return len({find(v) for v in range(g.n)})


def is_acyclic(g: DirectedGraph) -> bool:
    indeg = [0] * g.n
    succ = [[] for _ in range(g.n)]
    for i, j in g.edges:
        succ[i].append(j)
        indeg[j] += 1
    queue = deque(v for v in range(g.n) if indeg[v] == 0)
    seen = 0
    while queue:
        v = queue.popleft()
        seen += 1
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    return seen == g.n


def _reach(n: int, adj: list[list[int]], start: int) -> set[int]:
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def is_strongly_connected(g: DirectedGraph) -> bool:
    if g.n <= 1:
        return True
    fwd = [[] for _ in range(g.n)]
    bwd = [[] for _ in range(g.n)]
    for i, j in g.edges:
        fwd[i].append(j)
        bwd[j].append(i)
    return len(_reach(g.n, fwd, 0)) == g.n and len(_reach(g.n, bwd, 0)) == g.n


def is_two_colourable(g: DirectedGraph) -> bool:
    if g.loops():
        return False
    adj = [[] for _ in range(g.n)]
    for e in g.undirected():
        a, b = tuple(e)
        adj[a].append(b)
        adj[b].append(a)
    side = [-1] * g.n
    for s in range(g.n):
        if side[s] >= 0:
            continue
        side[s] = 0
        stack = [s]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if side[w] < 0:
                    side[w] = 1 - side[v]
                    stack.append(w)
                elif side[w] == side[v]:
                    return False
    return True


def _simple_undirected(g: DirectedGraph) -> bool:
    return not g.loops() and g.is_symmetric()


def _is_tournament(g: DirectedGraph) -> bool:
    if g.loops():
        return False
    return all(((i, j) in g.edges) != ((j, i) in g.edges)
               for i in range(g.n) for j in range(i + 1, g.n))


def graph_property_check(g: DirectedGraph, kind: AxiomAnnotation | str, k: int | None = None,
                         root: frozenset | None = None) -> bool:
    """Direct check of an axiom's graph condition.

    Undirected kinds require a symmetric loop-free relation. ``root`` is the
    set of vertices where the root predicate holds (for DT).
    """
    if isinstance(kind, AxiomAnnotation):
        kind, k = kind.kind, kind.k
    cc = weak_components(g)
    if kind in ("connected", "bipartite", "tree", "forest"):
        if not _simple_undirected(g):
            return False
        m = len(g.undirected())
        ok = {
            "connected": cc == (1 if k is None else k),
            "bipartite": is_two_colourable(g) and (k is None or cc == k),
            "tree": cc == 1 and m == g.n - 1,
            "forest": m == g.n - cc and (k is None or cc == k),
        }[kind]
        return ok
    if kind == "SC":
        return is_strongly_connected(DirectedGraph(g.n, frozenset(
            e for e in g.edges if e[0] != e[1])))
    if kind == "SCT":
        return _is_tournament(g) and is_strongly_connected(g)
    if kind == "AC":
        return is_acyclic(g) and (k is None or cc == k)
    if kind == "BiAC":
        return is_acyclic(g) and is_two_colourable(g)
    if kind == "polytree":
        return is_acyclic(g) and cc == 1 and len(g.edges) == g.n - 1
    if kind == "polyforest":
        return is_acyclic(g) and len(g.edges) == g.n - cc
    if kind == "DF":
        return is_acyclic(g) and all(g.in_degree(v) <= 1 for v in range(g.n))
    if kind == "DT":
        if not is_acyclic(g):
            return False
        sources = [v for v in range(g.n) if g.in_degree(v) == 0]
        if len(sources) != 1 or any(g.in_degree(v) > 1 for v in range(g.n)):
            return False
        return root is None or sources[0] in root
    if kind == "LO":
        if any((v, v) not in g.edges for v in range(g.n)):
            return False
        strict = DirectedGraph(g.n, frozenset(e for e in g.edges if e[0] != e[1]))
        return _is_tournament(strict) and is_acyclic(strict)
    if kind == "perm":
        outs = [sum(1 for i, _ in g.edges if i == v) for v in range(g.n)]
        ins = [g.in_degree(v) for v in range(g.n)]
        return all(o == 1 for o in outs) and all(d == 1 for d in ins) and cc == k
    raise LiftpolyError(f"unknown axiom kind {kind!r}")


# --------------------------------------------------------------------------
# colourings

@lru_cache(maxsize=None)
def _colour_table(n: int, colours: int) -> np.ndarray:
    return np.array(list(product(range(colours), repeat=n)), dtype=np.int64).reshape(-1, n)


@lru_cache(maxsize=200_000)
def colouring_counts(g: DirectedGraph, strict: bool, max_colours: int) -> tuple[int, ...]:
    """Number of proper colourings with ``1..k`` colours for ``k = 1..max_colours``.

    An edge ``a -> b`` needs ``colour(a) < colour(b)`` (strict) or ``<=`` (non-strict).
    """
    if g.n == 0:
        return (1,) * max_colours
    table = _colour_table(g.n, max_colours)
    ok = np.ones(len(table), dtype=bool)
    for a, b in g.edges:
        ok &= (table[:, a] < table[:, b]) if strict else (table[:, a] <= table[:, b])
    top = table.max(axis=1)[ok]
    hist = np.bincount(top, minlength=max_colours)
    return tuple(int(x) for x in np.cumsum(hist))


def chromatic_polynomial(g: DirectedGraph, strict: bool, var: str = "x") -> Poly:
    counts = colouring_counts(g, strict, g.n + 1)
    return interpolate_1d([(k, counts[k - 1]) for k in range(1, g.n + 2)], g.n, var)


def surjective_colourings(g: DirectedGraph, strict: bool, colours: int) -> int:
    """Colourings using every one of ``colours`` colours."""
    if g.n == 0:
        return 1 if colours == 0 else 0
    if colours == 0:
        return 0
    table = _colour_table(g.n, colours)
    ok = np.ones(len(table), dtype=bool)
    for a, b in g.edges:
        ok &= (table[:, a] < table[:, b]) if strict else (table[:, a] <= table[:, b])
    used = np.zeros(len(table), dtype=np.int64)
    for c in range(colours):
        used += (table == c).any(axis=1)
    return int(np.count_nonzero(ok & (used == colours)))


# --------------------------------------------------------------------------
# Tutte polynomial by deletion and contraction

def _connected_without(edges: tuple, a: int, b: int) -> bool:
    adj: dict = {}
    for p, q in edges:
        adj.setdefault(p, set()).add(q)
        adj.setdefault(q, set()).add(p)
    seen, todo = {a}, [a]
    while todo:
        for w in adj.get(todo.pop(), ()):
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return b in seen


@lru_cache(maxsize=None)
def _tutte(edges: tuple) -> Poly:
    if not edges:
        return Poly.const(1)
    (a, b), rest = edges[0], edges[1:]
    if a == b:
        return Poly.var("y") * _tutte(rest)
    contracted = tuple(sorted(tuple(sorted((a if p == b else p, a if q == b else q)))
                              for p, q in rest))
    if not _connected_without(rest, a, b):
        return Poly.var("x") * _tutte(contracted)
    return _tutte(rest) + _tutte(contracted)


def tutte_deletion_contraction(edges) -> Poly:
    """Tutte polynomial ``T(x, y)`` of an undirected multigraph given as vertex pairs."""
    return _tutte(tuple(sorted(tuple(sorted(e)) for e in edges)))


# --------------------------------------------------------------------------
# world enumeration

@dataclass(frozen=True)
class PossibleWorld:
    n: int
    truth: dict

    def holds(self, pred: str, *args: int) -> bool:
        return self.truth[(pred, tuple(args))]

    def graph(self, rel: str) -> DirectedGraph:
        return DirectedGraph(self.n, frozenset(
            (a - 1, b - 1) for (p, args), val in self.truth.items()
            if val and p == rel for a, b in [args]))


class _Space:
    def __init__(self, s: Sentence, n: int, limit: int):
        if n < 1:
            raise LiftpolyError("domain size must be positive")
        self.s = s
        self.n = n
        self.atoms: list[tuple[str, tuple[int, ...]]] = []
        for name, pred in s.vocabulary.items():
            for args in product(range(1, n + 1), repeat=pred.arity):
                self.atoms.append((name, args))
        if len(self.atoms) > limit:
            raise OracleTooLarge(
                f"{len(self.atoms)} ground atoms exceed the oracle limit of {limit}")
        self.pos = {a: i for i, a in enumerate(self.atoms)}

    def chunks(self) -> Iterator[np.ndarray]:
        """World indices (int64) of models, chunk by chunk."""
        total = 1 << len(self.atoms)
        step = 1 << CHUNK_BITS
        for start in range(0, total, step):
            idx = np.arange(start, min(total, start + step), dtype=np.int64)
            mask = self._models(idx)
            yield idx[mask]

    def bit(self, idx: np.ndarray, atom) -> np.ndarray:
        return ((idx >> self.pos[atom]) & 1).astype(bool)

    def count(self, idx: np.ndarray, pred: str) -> np.ndarray:
        out = np.zeros(len(idx), dtype=np.int64)
        for a, i in self.pos.items():
            if a[0] == pred:
                out += (idx >> i) & 1
        return out

    def _models(self, idx: np.ndarray) -> np.ndarray:
        ok = self._eval(self.s.formula, {}, idx)
        if ok.shape == ():
            ok = np.full(len(idx), bool(ok))
        for lit in self.s.evidence:
            v = self.bit(idx, (lit.pred, (lit.element,)))
            ok &= v if lit.positive else ~v
        for c in self.s.cardinality:
            lhs = np.zeros(len(idx), dtype=np.int64)
            for p, coeff in c.terms:
                lhs += coeff * self.count(idx, p)
            ok &= compare(lhs, c.comparator, c.bound.at(self.n))
        return ok

    def _eval(self, f: Formula, env: dict, idx: np.ndarray):
        size = len(idx)
        if isinstance(f, Truth):
            return np.full(size, f.value)
        if isinstance(f, Atom):
            return self.bit(idx, (f.pred, tuple(env[v] for v in f.args)))
        if isinstance(f, Not):
            return ~self._eval(f.arg, env, idx)
        if isinstance(f, And):
            out = np.ones(size, dtype=bool)
            for a in f.args:
                out &= self._eval(a, env, idx)
            return out
        if isinstance(f, Or):
            out = np.zeros(size, dtype=bool)
            for a in f.args:
                out |= self._eval(a, env, idx)
            return out
        if isinstance(f, Implies):
            return ~self._eval(f.left, env, idx) | self._eval(f.right, env, idx)
        if isinstance(f, Iff):
            return self._eval(f.left, env, idx) == self._eval(f.right, env, idx)
        vals = [self._eval(f.body, {**env, f.var: e}, idx) for e in range(1, self.n + 1)]
        if isinstance(f, Forall):
            return np.logical_and.reduce(vals)
        if isinstance(f, Exists):
            return np.logical_or.reduce(vals)
        if isinstance(f, ExistsEq):
            return np.sum(vals, axis=0) == f.count
        raise LiftpolyError(f"cannot evaluate {f}")

    def relation_code(self, idx: np.ndarray, rel: str) -> np.ndarray:
        code = np.zeros(len(idx), dtype=np.int64)
        for i in range(self.n):
            for j in range(self.n):
                code |= ((idx >> self.pos[(rel, (i + 1, j + 1))]) & 1) << (i * self.n + j)
        return code

    def unary_code(self, idx: np.ndarray, pred: str) -> np.ndarray:
        code = np.zeros(len(idx), dtype=np.int64)
        for i in range(self.n):
            code |= ((idx >> self.pos[(pred, (i + 1,))]) & 1) << i
        return code

    def weight_of_counts(self, counts: dict[str, int]):
        w = 1
        for name, pred in self.s.vocabulary.items():
            wp, wbp = self.s.weights[name]
            k = counts[name]
            w = w * wp ** k * wbp ** (self.n ** pred.arity - k)
        return w


def _aggregate(s: Sentence, n: int, keys: Callable, limit: int = ATOM_LIMIT):
    """Sum of weights grouped by extra integer keys computed from model indices."""
    sp = _Space(s, n, limit)
    preds = list(s.vocabulary)
    acc: dict[tuple, int] = {}
    for idx in sp.chunks():
        if not len(idx):
            continue
        cols = [sp.count(idx, p) for p in preds] + [k for k in keys(sp, idx)]
        table = np.stack(cols, axis=1)
        uniq, cnt = np.unique(table, axis=0, return_counts=True)
        for row, c in zip(uniq.tolist(), cnt.tolist()):
            key = tuple(row)
            acc[key] = acc.get(key, 0) + c
    out: dict[tuple, object] = {}
    for key, c in acc.items():
        counts = dict(zip(preds, key[:len(preds)]))
        w = sp.weight_of_counts(counts) * c
        rest = key[len(preds):]
        out[rest] = out.get(rest, 0) + w
    return out


def enumerate_models(s: Sentence, n: int, limit: int = ATOM_LIMIT
                     ) -> Iterator[tuple[PossibleWorld, object]]:
    sp = _Space(s, n, limit)
    for idx in sp.chunks():
        for world in idx.tolist():
            truth = {a: bool(world >> i & 1) for a, i in sp.pos.items()}
            counts = {p: sum(1 for a, v in truth.items() if v and a[0] == p)
                      for p in s.vocabulary}
            yield PossibleWorld(n, truth), sp.weight_of_counts(counts)


def wfomc_by_enumeration(s: Sentence, n: int, limit: int = ATOM_LIMIT):
    return sum(_aggregate(s, n, lambda sp, idx: [], limit).values(), 0)


def _check_relation(s: Sentence, rel: str) -> None:
    p = s.vocabulary.get(rel)
    if p is None or p.arity != 2:
        raise LiftpolyError(f"relation {rel} must be a declared binary predicate")


def relation_sum(s: Sentence, n: int, rel: str, fn: Callable[[DirectedGraph], object],
                 limit: int = ATOM_LIMIT):
    """``sum_models W * fn(G(rel))``."""
    _check_relation(s, rel)
    groups = _aggregate(s, n, lambda sp, idx: [sp.relation_code(idx, rel)], limit)
    total = 0
    for (code,), w in groups.items():
        val = fn(DirectedGraph.from_code(n, code))
        total = total + (val * w if isinstance(val, Poly) else val * w)
    return total


def wcp_by_enumeration(s: Sentence, n: int, rel: str, limit: int = ATOM_LIMIT) -> Poly:
    """``sum_models W * (u+1)^cc``."""
    u1 = Poly.var("u") + 1
    return Poly.lift(relation_sum(s, n, rel, lambda g: u1.pow(weak_components(g)), limit))


def extended_wcp_by_enumeration(s: Sentence, n: int, rel: str, limit: int = ATOM_LIMIT) -> Poly:
    """``sum_models W * (u+1)^cc * v^|R|`` (for symmetric loop-free R, ``|R|`` is twice the edges)."""
    u1 = Poly.var("u") + 1
    return Poly.lift(relation_sum(
        s, n, rel, lambda g: u1.pow(weak_components(g)) * Poly.var("v", len(g.edges)), limit))


def scp_by_enumeration(s: Sentence, n: int, rel: str, mode: str,
                       limit: int = ATOM_LIMIT) -> Poly:
    """``sum_models W * (u+1)^cc * chi(v+1)`` with the strict or non-strict chromatic polynomial."""
    if mode not in ("strict", "nonstrict"):
        raise LiftpolyError(f"unknown mode {mode!r}")
    strict = mode == "strict"
    u1 = Poly.var("u") + 1
    v1 = Poly.var("v") + 1

    def term(g):
        chi = chromatic_polynomial(g, strict, "x").eval({"x": v1})
        return u1.pow(weak_components(g)) * chi

    return Poly.lift(relation_sum(s, n, rel, term, limit))


def axiom_by_enumeration(s: Sentence, n: int, axiom: AxiomAnnotation,
                         limit: int = ATOM_LIMIT):
    """Weighted count of models whose relation graph satisfies the axiom."""
    _check_relation(s, axiom.relation)
    base = s.without_axioms()

    def keys(sp, idx):
        cols = [sp.relation_code(idx, axiom.relation)]
        if axiom.root is not None:
            cols.append(sp.unary_code(idx, axiom.root))
        return cols

    groups = _aggregate(base, n, keys, limit)
    total = 0
    for key, w in groups.items():
        g = DirectedGraph.from_code(n, key[0])
        root = None
        if axiom.root is not None:
            root = frozenset(i for i in range(n) if key[1] >> i & 1)
        if graph_property_check(g, axiom, root=root):
            total = total + w
    return total
