"""Tutte and directed chromatic polynomials of graphs described by a sentence.

A family is a sentence whose models on ``n`` elements all induce the same
graph (up to isomorphism) on a distinguished edge relation. Complete graphs
and block-structured graphs are built in.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cells import compute_coefficients, enumerate_cells
from .dp import Stats
from .fol import (
    And, Atom, CardinalityConstraint, Forall, GroundUnaryLiteral, Implies, LiftpolyError, Not,
    Or, Predicate, Sentence, TRUE, fresh_name,
)
from .normalize import HIDDEN_PREFIX, normalize
from .oracle import DirectedGraph, weak_components
from .poly import Poly
from .scp import scp_at_u0
from .wcp import compute_extended_wcp, wfomc


class InexactDivision(LiftpolyError):
    pass


@dataclass(frozen=True)
class EncodedGraphFamily:
    sentence: Sentence
    edge: str
    components: int | None = None    # weak components of the encoded graph; needed for Tutte
    size: int | None = None          # fixed vertex count, when the encoding pins it

    def domain(self, n: int | None) -> int:
        if self.size is not None:
            if n is not None and n != self.size:
                raise LiftpolyError(f"this family has exactly {self.size} vertices, not {n}")
            return self.size
        if n is None:
            raise LiftpolyError("domain size required")
        return n


x, y = "x", "y"


def _sym_irreflexive(rel: str):
    return And((Forall(x, Not(Atom(rel, (x, x)))),
                Forall(x, Forall(y, Implies(Atom(rel, (x, y)), Atom(rel, (y, x)))))))


def complete_family(edge: str = "E") -> EncodedGraphFamily:
    """``K_n``: symmetric, loop-free, and ``|E| = n(n-1)``."""
    s = Sentence(_sym_irreflexive(edge), {edge: Predicate(edge, 2)},
                 cardinality=(CardinalityConstraint.single(edge, "=", "n*(n-1)"),))
    return EncodedGraphFamily(s, edge, components=1)


def parse_block_spec(spec: str) -> tuple[list[int], list[list[int]]]:
    """``sizes=2,3;adj=01,10`` into block sizes and a 0/1 adjacency matrix."""
    fields = {}
    for part in spec.split(";"):
        if "=" not in part:
            raise LiftpolyError(f"bad block spec component {part!r}")
        key, val = part.split("=", 1)
        fields[key.strip()] = val.strip()
    try:
        sizes = [int(t) for t in fields["sizes"].split(",")]
        rows = [r.strip() for r in fields["adj"].split(",")]
    except (KeyError, ValueError):
        raise LiftpolyError("block spec needs sizes=... and adj=...") from None
    if len(rows) != len(sizes) or any(len(r) != len(sizes) or set(r) - {"0", "1"} for r in rows):
        raise LiftpolyError("adjacency must be a square 0/1 matrix matching the block count")
    return sizes, [[int(c) for c in r] for r in rows]


def block_graph(sizes: Sequence[int], adj: Sequence[Sequence[int]], directed: bool = False,
                loops: bool = False) -> DirectedGraph:
    """The explicit graph: block ``i`` joined to block ``k`` whenever ``adj[i][k]``.

    Undirected graphs are returned with both edge directions.
    """
    start = [sum(sizes[:i]) for i in range(len(sizes))]
    edges = set()
    for i, si in enumerate(sizes):
        for k, sk in enumerate(sizes):
            if not adj[i][k]:
                continue
            for a in range(start[i], start[i] + si):
                for b in range(start[k], start[k] + sk):
                    if a != b or loops:
                        edges.add((a, b))
                        if not directed:
                            edges.add((b, a))
    return DirectedGraph(sum(sizes), frozenset(edges))


def block_family(sizes: Sequence[int], adj: Sequence[Sequence[int]], edge: str = "E",
                 directed: bool = False, loops: bool = False) -> EncodedGraphFamily:
    """Block-structured graph encoded by one unary evidence predicate per block.

    Edges may only join adjacent blocks, and an exact edge count forces all of them.
    """
    m = len(sizes)
    if any(s < 1 for s in sizes):
        raise LiftpolyError("block sizes must be positive")
    if not directed and any(adj[i][k] != adj[k][i] for i in range(m) for k in range(m)):
        raise LiftpolyError("undirected block adjacency must be symmetric")
    blocks = [fresh_name(f"{HIDDEN_PREFIX}block{i}", {edge}) for i in range(m)]
    allowed = [And((Atom(blocks[i], (x,)), Atom(blocks[k], (y,))))
               for i in range(m) for k in range(m) if adj[i][k]]
    parts = [Forall(x, Forall(y, Implies(Atom(edge, (x, y)),
                                         Or(tuple(allowed)) if allowed else Not(TRUE))))]
    if not loops:
        parts.append(Forall(x, Not(Atom(edge, (x, x)))))
    if not directed:
        parts.append(Forall(x, Forall(y, Implies(Atom(edge, (x, y)), Atom(edge, (y, x))))))
    g = block_graph(sizes, adj, directed=directed, loops=loops)
    evidence = []
    element = 1
    for i, size in enumerate(sizes):
        for _ in range(size):
            for k in range(m):
                evidence.append(GroundUnaryLiteral(blocks[k], element, k == i))
            element += 1
    vocab = {edge: Predicate(edge, 2), **{b: Predicate(b, 1) for b in blocks}}
    s = Sentence(And(tuple(parts)), vocab,
                 cardinality=(CardinalityConstraint.single(edge, "=", len(g.edges)),),
                 evidence=tuple(evidence))
    return EncodedGraphFamily(s, edge, components=weak_components(g), size=sum(sizes))


def digraph_family(g: DirectedGraph, edge: str = "E") -> EncodedGraphFamily:
    """A single digraph, one vertex per block."""
    adj = [[1 if (i, j) in g.edges else 0 for j in range(g.n)] for i in range(g.n)]
    return block_family([1] * g.n, adj, edge, directed=True, loops=g.loops())


def _family_count(fam: EncodedGraphFamily, n: int, stats: Stats | None = None):
    count = wfomc(fam.sentence, n, stats)
    if count == 0:
        raise LiftpolyError("the family has no models at this size")
    return count


def tutte(fam: EncodedGraphFamily, n: int | None = None, stats: Stats | None = None) -> Poly:
    """Tutte polynomial ``T(x, y)`` of the family's graph on ``n`` vertices."""
    n = fam.domain(n)
    if fam.components is None:
        raise LiftpolyError("the number of connected components of the family's graph is required")
    s = fam.sentence
    e = fam.edge
    ns = normalize(s)
    co = compute_coefficients(ns, enumerate_cells(ns), e)
    if not co.is_symmetric_irreflexive():
        raise LiftpolyError(f"{e} must be symmetric and loop-free in the family sentence")
    sub = fresh_name(HIDDEN_PREFIX + "span", s.vocabulary)
    spanning = Forall(x, Forall(y, And((Implies(Atom(sub, (x, y)), Atom(e, (x, y))),
                                        Implies(Atom(sub, (x, y)), Atom(sub, (y, x)))))))
    psi = s.conjoin(spanning, [Predicate(sub, 2)])
    ext = compute_extended_wcp(psi, n, sub, stats).shift("u", -1)
    # u^cc v^(2|A|)  ->  X^cc Y^(cc+|A|), then divide by X^components Y^n
    out: dict = {}
    iu, iv = ext.vars.index("u"), (ext.vars.index("v") if "v" in ext.vars else None)
    for exp, coeff in ext.terms.items():
        cc = exp[iu]
        ve = exp[iv] if iv is not None else 0
        if ve % 2:
            raise LiftpolyError("odd power of v: the edge relation is not symmetric")
        ex, ey = cc - fam.components, cc + ve // 2 - n
        if ex < 0 or ey < 0:
            raise InexactDivision(
                "Tutte normalisation left a remainder; the family's component count looks wrong")
        out[(ex, ey)] = out.get((ex, ey), 0) + coeff
    shifted = Poly(out, ("X", "Y")) / _family_count(fam, n, stats)
    result = shifted.eval({"X": Poly.var("x") - 1, "Y": Poly.var("y") - 1})
    result = Poly.lift(result)
    for c in result.terms.values():
        if Fraction(c).denominator != 1:
            raise InexactDivision("non-integer Tutte coefficient; models do not share one graph")
    return result


def directed_chromatic(fam: EncodedGraphFamily, n: int | None = None,
                       mode: str = "strict", stats: Stats | None = None) -> Poly:
    """Strict or non-strict directed chromatic polynomial in ``x`` of the family's digraph."""
    n = fam.domain(n)
    column = scp_at_u0(fam.sentence, n, fam.edge, mode, stats=stats)
    chi = Poly.lift(column.eval({"v": Poly.var("x") - 1})) / _family_count(fam, n, stats)
    for k in range(0, n + 2):
        if Fraction(chi.eval({"x": k})).denominator != 1:
            raise InexactDivision("chromatic values are not integers; models do not share one graph")
    return chi
