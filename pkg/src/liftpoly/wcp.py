"""WFOMC and the weak connectedness polynomial via the layered configuration DP.

Evaluating with ``u + 1`` layers assigns each weakly connected component of
the relation's graph to one of ``u + 1`` layers, so the layered count at
``u`` equals ``sum_models W * (u+1)^cc``. Evaluating at ``u = 0..n`` and
interpolating recovers the polynomial.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .cells import CellCoefficients, compute_coefficients, enumerate_cells
from .dp import ConfigSpace, Ops, Stats, extend, full_total, in_layer_table, w_cross, w_in
from .fol import LiftpolyError, Sentence, WeightMap
from .normalize import NormalizedSentence, normalize
from .poly import Poly, interpolate_1d


@dataclass
class Prepared:
    """A normalized sentence with its cells and coefficients at one weighting."""
    ns: NormalizedSentence
    coeffs: CellCoefficients
    weights: WeightMap
    stats: Stats = field(default_factory=Stats)

    def space(self, n: int, cells=None) -> ConfigSpace:
        return ConfigSpace(self.coeffs, self.ns.evidence_groups(n), cells)

    def ops(self, n: int, extra_caps: Mapping[str, int] | None = None) -> Ops:
        caps = self.ns.symbol_caps(n)
        caps.update(extra_caps or {})
        return Ops(caps)


def as_normalized(s: Sentence | NormalizedSentence) -> NormalizedSentence:
    return s if isinstance(s, NormalizedSentence) else normalize(s)


def prepare(s: Sentence | NormalizedSentence, relation: str | None = None,
            edge_marker: str | None = None) -> Prepared:
    """Normalize and compute cell coefficients.

    ``edge_marker`` names a polynomial variable multiplied onto ``w(relation)``
    (``v`` for the extended polynomial, ``t`` for edge tracking).
    """
    ns = as_normalized(s)
    if relation is not None:
        pred = ns.vocabulary.get(relation)
        if pred is None or pred.arity != 2:
            raise LiftpolyError(f"relation {relation} must be a declared binary predicate")
    weights = ns.symbolic_weights()
    if edge_marker is not None:
        w, wb = weights[relation]
        weights = weights.with_weight(relation, Poly.var(edge_marker) * w, wb)
    cells = enumerate_cells(ns)
    coeffs = compute_coefficients(ns, cells, relation, weights)
    return Prepared(ns, coeffs, weights, Stats(cells=len(cells)))


def _check_n(n: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise LiftpolyError("domain size must be a positive integer")


def wfomc(s: Sentence | NormalizedSentence, n: int, stats: Stats | None = None):
    """Weighted first-order model count: one layer, all cells."""
    _check_n(n)
    prep = prepare(s)
    space = prep.space(n)
    ops = prep.ops(n)
    table = {c: w_in(space, c, prep.coeffs.r, ops) for c in space.full}
    if stats is not None:
        stats.merge(Stats(1, len(space.full), len(prep.coeffs.cells)))
    return prep.ns.extract(full_total(space, table), n)


def wcp_points(prep: Prepared, n: int, u_max: int | None = None,
               extra_caps: Mapping[str, int] | None = None) -> list[tuple[int, object]]:
    """Layered counts at ``u = 0..u_max`` (default ``n``), after cardinality extraction."""
    u_max = n if u_max is None else u_max
    space = prep.space(n)
    ops = prep.ops(n, extra_caps)
    inw = in_layer_table(space, prep.coeffs.r, ops)
    h = inw
    points = []
    for u in range(u_max + 1):
        if u:
            h = extend(space, h, inw, prep.coeffs.r_nonadj, ops, prep.stats,
                       full_only=(u == u_max))
        points.append((u, prep.ns.extract(full_total(space, h), n)))
    return points


def compute_wcp(s: Sentence | NormalizedSentence, n: int, relation: str,
                stats: Stats | None = None) -> Poly:
    """``f_n(u) = sum_models W * (u+1)^cc`` as a polynomial in ``u`` (degree <= n)."""
    _check_n(n)
    prep = prepare(s, relation)
    poly = interpolate_1d(wcp_points(prep, n), n, "u")
    if stats is not None:
        stats.merge(prep.stats)
    return poly


def compute_extended_wcp(s: Sentence | NormalizedSentence, n: int, relation: str,
                         stats: Stats | None = None, v_cap: int | None = None) -> Poly:
    """Bivariate ``sum_models W * (u+1)^cc * v^(2 * edges)`` for symmetric irreflexive R.

    ``v_cap`` drops powers of ``v`` above it (useful when only low edge counts matter).
    """
    _check_n(n)
    prep = prepare(s, relation, edge_marker="v")
    if not prep.coeffs.is_symmetric_irreflexive():
        raise LiftpolyError(
            f"{relation} is not provably symmetric and irreflexive in this sentence; "
            "add the closure clauses")
    caps = {"v": v_cap} if v_cap is not None else None
    poly = interpolate_1d(wcp_points(prep, n, extra_caps=caps), n, "u")
    if stats is not None:
        stats.merge(prep.stats)
    return poly


def evaluate_wcp(s: Sentence | NormalizedSentence, n: int, relation: str, point):
    """``f_n(point)`` for a rational point."""
    return compute_wcp(s, n, relation).eval({"u": point})


__all__ = [
    "Prepared", "prepare", "wfomc", "wcp_points", "compute_wcp", "compute_extended_wcp",
    "evaluate_wcp", "w_in", "w_cross",
]
