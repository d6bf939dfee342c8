"""Strict and non-strict connectedness polynomials on the ``(u+1) x (v+1)`` layer grid.

Vertical layers are colours: a later colour may not send an edge back to an
earlier one, and in strict mode no edge stays inside a colour. Horizontal
layers separate weakly connected components. The count on the grid point
``(u, v)`` is ``sum_models W * (u+1)^cc * chi(v+1)`` where ``chi`` is the
strict or non-strict directed chromatic polynomial.
"""
from __future__ import annotations

from typing import Mapping, Sequence

from .dp import ConfigSpace, Ops, Stats, extend, full_total, in_layer_table, w_in
from .fol import LiftpolyError, Sentence
from .normalize import NormalizedSentence
from .poly import Poly, interpolate_1d, interpolate_2d
from .wcp import Prepared, _check_n, prepare

MODES = ("strict", "nonstrict")


def _mode(mode: str) -> str:
    if mode not in MODES:
        raise LiftpolyError(f"mode must be one of {MODES}, got {mode!r}")
    return mode


def _grid_parts(prep: Prepared, mode: str):
    co = prep.coeffs
    if mode == "strict":
        cells = [c.index for c in co.cells if c.index not in co.reflexive_cells]
        return cells, co.r_nonadj
    return None, co.r


def w_in_vertical(space: ConfigSpace, c, prep: Prepared, mode: str, ops: Ops):
    """In-colour weight: full pair weights (non-strict) or edge-free pairs (strict)."""
    _, pair = _grid_parts(prep, _mode(mode))
    return w_in(space, c, pair, ops)


def scp_grid(prep: Prepared, n: int, mode: str, u_values: Sequence[int],
             v_values: Sequence[int], extra_caps: Mapping[str, int] | None = None
             ) -> list[tuple[int, int, object]]:
    """Counts at every ``(u, v)`` requested, after cardinality extraction."""
    _mode(mode)
    cells, pair = _grid_parts(prep, mode)
    space = prep.space(n, cells)
    ops = prep.ops(n, extra_caps)
    co = prep.coeffs
    u_max, v_max = max(u_values), max(v_values)
    want_u, want_v = set(u_values), set(v_values)
    vin = in_layer_table(space, pair, ops)
    vertical = vin
    out = []
    for v in range(v_max + 1):
        if v:
            vertical = extend(space, vertical, vin, co.r_arrow, ops, prep.stats)
        if v not in want_v:
            continue
        h = vertical
        for u in range(u_max + 1):
            if u:
                h = extend(space, h, vertical, co.r_nonadj, ops, prep.stats,
                           full_only=(u == u_max))
            if u in want_u:
                out.append((u, v, prep.ns.extract(full_total(space, h), n)))
    return out


def _compute(s, n: int, relation: str, mode: str, edge_marker: str | None = None,
             extra_caps=None, stats: Stats | None = None) -> Poly:
    _check_n(n)
    prep = prepare(s, relation, edge_marker)
    grid = scp_grid(prep, n, mode, range(n + 1), range(n + 1), extra_caps)
    poly = interpolate_2d(grid, n, n, ("u", "v"))
    if stats is not None:
        stats.merge(prep.stats)
    return poly


def compute_nscp(s: Sentence | NormalizedSentence, n: int, relation: str,
                 stats: Stats | None = None) -> Poly:
    """``sum_models W * (u+1)^cc * nonstrict_chi(v+1)``."""
    return _compute(s, n, relation, "nonstrict", stats=stats)


def compute_sscp(s: Sentence | NormalizedSentence, n: int, relation: str,
                 stats: Stats | None = None) -> Poly:
    """``sum_models W * (u+1)^cc * strict_chi(v+1)``; loops on the relation contribute 0."""
    return _compute(s, n, relation, "strict", stats=stats)


def compute_scp(s, n: int, relation: str, mode: str, stats: Stats | None = None) -> Poly:
    return _compute(s, n, relation, _mode(mode), stats=stats)


def compute_sscp_edges(s: Sentence | NormalizedSentence, n: int, relation: str,
                       t_cap: int | None = None, stats: Stats | None = None) -> Poly:
    """Strict polynomial with an extra variable ``t`` marking each edge of the relation.

    Returns ``sum_models W * (u+1)^cc * strict_chi(v+1) * t^edges``; powers of
    ``t`` above ``t_cap`` are dropped.
    """
    caps = {"t": t_cap} if t_cap is not None else None
    return _compute(s, n, relation, "strict", edge_marker="t", extra_caps=caps, stats=stats)


def scp_at_u0(s: Sentence | NormalizedSentence, n: int, relation: str, mode: str,
              edge_marker: str | None = None, extra_caps=None,
              stats: Stats | None = None) -> Poly:
    """The column ``u = 0`` only, as a polynomial in ``v``; needs no horizontal passes."""
    _check_n(n)
    prep = prepare(s, relation, edge_marker)
    grid = scp_grid(prep, n, _mode(mode), [0], range(n + 1), extra_caps)
    poly = interpolate_1d([(v, val) for _, v, val in grid], n, "v")
    if stats is not None:
        stats.merge(prep.stats)
    return poly
