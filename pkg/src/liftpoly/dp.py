"""Configuration lattice and the layer-extension step shared by both engines.

A configuration counts how many elements of each evidence group sit in each
cell. Tables map configurations to weights (exact rationals, or polynomials
when symbolic weights are present). Extending a table by one layer places a
fresh batch of elements into a new layer, weighting pairs inside the new
layer with one coefficient matrix and pairs across layers with another.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import comb, factorial
from typing import Mapping, Sequence

from .cells import CellCoefficients
from .normalize import EvidenceGroup
from .poly import Poly, canonical_vars

Config = tuple[int, ...]


def _is_zero(x) -> bool:
    return x.is_zero() if isinstance(x, Poly) else x == 0


class Ops:
    """Arithmetic on table values, truncating symbolic degrees at ``caps``."""

    def __init__(self, caps: Mapping[str, int] | None = None):
        self.caps = dict(caps or {})

    def _positional(self, vars: Sequence[str]):
        return [self.caps.get(v) for v in vars]

    def mul(self, a, b):
        pa, pb = isinstance(a, Poly), isinstance(b, Poly)
        if not pa and not pb:
            return a * b
        if not pa:
            a, b = b, a
        if not isinstance(b, Poly):
            return a.scale(b)
        if self.caps:
            return a.mul(b, self._positional(canonical_vars(a.vars + b.vars)))
        return a.mul(b)

    def pow(self, a, k: int):
        if k == 0:
            return 1
        if k == 1:
            return a
        if isinstance(a, Poly):
            return a.pow(k, self._positional(a.vars) if self.caps else None)
        return a ** k

    def truncate(self, a):
        if isinstance(a, Poly) and self.caps:
            return a.truncate(self._positional(a.vars))
        return a


@dataclass
class Stats:
    layers: int = 0
    pairs: int = 0
    cells: int = 0

    def merge(self, other: "Stats") -> None:
        self.layers += other.layers
        self.pairs += other.pairs
        self.cells = max(self.cells, other.cells)

    def as_dict(self) -> dict:
        return {"cells": self.cells, "layers": self.layers, "pairs_visited": self.pairs}


class ConfigSpace:
    """All configurations with per-group totals at most the group sizes."""

    def __init__(self, coeffs: CellCoefficients, groups: Sequence[EvidenceGroup],
                 cells: Sequence[int] | None = None):
        allowed = set(range(len(coeffs.cells)) if cells is None else cells)
        self.coeffs = coeffs
        self.groups = list(groups)
        self.sizes = [g.size for g in groups]
        self.slots: list[tuple[int, int]] = []
        for gi, g in enumerate(groups):
            for cell in coeffs.cells:
                if cell.index in allowed and g.admits(cell.as_dict()):
                    self.slots.append((gi, cell.index))
        self.slot_cell = [c for _, c in self.slots]
        self.group_slots = [[k for k, (g, _) in enumerate(self.slots) if g == gi]
                            for gi in range(len(groups))]

        per_group = []
        for gi, size in enumerate(self.sizes):
            per_group.append(list(_vectors(len(self.group_slots[gi]), size)))
        configs = []
        for parts in product(*per_group):
            vec = [0] * len(self.slots)
            for gi, part in enumerate(parts):
                for k, c in zip(self.group_slots[gi], part):
                    vec[k] = c
            configs.append(tuple(vec))
        configs.sort(key=lambda c: (sum(c), tuple(-x for x in c)))
        self.configs: list[Config] = configs
        self.totals = {c: self.group_totals(c) for c in configs}
        self.by_totals: dict[tuple, list[Config]] = {}
        for c in configs:
            self.by_totals.setdefault(self.totals[c], []).append(c)
        self.full = [c for c in configs if list(self.totals[c]) == self.sizes]

    def group_totals(self, c: Config) -> tuple[int, ...]:
        return tuple(sum(c[k] for k in ks) for ks in self.group_slots)

    def fits_under(self, totals: tuple[int, ...]):
        """Configurations whose group totals are at most ``totals``."""
        ranges = [range(t + 1) for t in totals]
        for key in product(*ranges):
            yield from self.by_totals.get(key, ())

    def multinomial(self, c: Config) -> int:
        out = 1
        for ks in self.group_slots:
            out *= factorial(sum(c[k] for k in ks))
            for k in ks:
                out //= factorial(c[k])
        return out


def _vectors(length: int, bound: int):
    """Non-negative integer vectors of ``length`` with sum at most ``bound``."""
    if length == 0:
        yield ()
        return
    for first in range(bound + 1):
        for rest in _vectors(length - 1, bound - first):
            yield (first,) + rest


def w_in(space: ConfigSpace, c: Config, pair: Sequence[Sequence], ops: Ops):
    """Weight of placing ``c`` elements in one fresh layer.

    ``pair[i][j]`` weights an unordered pair of distinct elements in cells
    ``i`` and ``j`` (the diagonal gives the in-cell weight).
    """
    cw = space.coeffs.cell_weight
    cell = space.slot_cell
    val = space.multinomial(c)
    occupied = [k for k, x in enumerate(c) if x]
    for k in occupied:
        val = ops.mul(val, ops.pow(cw[cell[k]], c[k]))
        if c[k] >= 2:
            val = ops.mul(val, ops.pow(pair[cell[k]][cell[k]], comb(c[k], 2)))
        if _is_zero(val):
            return 0
    for a in range(len(occupied)):
        for b in range(a + 1, len(occupied)):
            ka, kb = occupied[a], occupied[b]
            val = ops.mul(val, ops.pow(pair[cell[ka]][cell[kb]], c[ka] * c[kb]))
            if _is_zero(val):
                return 0
    return ops.truncate(val)


def w_cross(space: ConfigSpace, earlier: Config, later: Config, cross: Sequence[Sequence],
            ops: Ops):
    """Weight between an earlier batch and a new batch: prod cross[i][j]^(earlier_i * later_j)."""
    cell = space.slot_cell
    val = 1
    for s, a in enumerate(earlier):
        if not a:
            continue
        for t, b in enumerate(later):
            if b:
                val = ops.mul(val, ops.pow(cross[cell[s]][cell[t]], a * b))
    return val


def in_layer_table(space: ConfigSpace, pair: Sequence[Sequence], ops: Ops) -> dict:
    table = {}
    for c in space.configs:
        val = w_in(space, c, pair, ops)
        if not _is_zero(val):
            table[c] = val
    return table


def extend(space: ConfigSpace, prev: Mapping[Config, object], in_table: Mapping[Config, object],
           cross: Sequence[Sequence], ops: Ops, stats: Stats | None = None,
           full_only: bool = False) -> dict:
    """One layer step: ``h[c] = sum binom * prev[c_bar] * in_table[c_star] * cross``."""
    n_slots = len(space.slots)
    cell = space.slot_cell
    sizes = space.sizes
    out: dict = {}
    visited = 0
    for cbar, hv in prev.items():
        tbar = space.totals[cbar]
        room = tuple(n - t for n, t in zip(sizes, tbar))
        # cross factor per target slot, as powers
        base = []
        for t in range(n_slots):
            y = 1
            for s in range(n_slots):
                if cbar[s]:
                    y = ops.mul(y, ops.pow(cross[cell[s]][cell[t]], cbar[s]))
            base.append(y)
        powers: list[dict] = [{0: 1, 1: base[t]} for t in range(n_slots)]
        for cstar in space.fits_under(room):
            iv = in_table.get(cstar)
            if iv is None:
                continue
            c = tuple(a + b for a, b in zip(cbar, cstar))
            if full_only and list(space.totals[c]) != sizes:
                continue
            visited += 1
            tstar = space.totals[cstar]
            coef = 1
            for tb, ts in zip(tbar, tstar):
                coef *= comb(tb + ts, ts)
            val = ops.mul(hv, iv)
            if coef != 1:
                val = ops.mul(val, coef)
            for t, k in enumerate(cstar):
                if k:
                    pw = powers[t]
                    if k not in pw:
                        pw[k] = ops.pow(base[t], k)
                    val = ops.mul(val, pw[k])
            if _is_zero(val):
                continue
            prior = out.get(c)
            out[c] = val if prior is None else prior + val
    for c in [c for c, v in out.items() if _is_zero(v)]:
        del out[c]
    if stats is not None:
        stats.layers += 1
        stats.pairs += visited
    return out


def full_total(space: ConfigSpace, table: Mapping[Config, object]):
    total = 0
    for c in space.full:
        v = table.get(c)
        if v is not None:
            total = total + v
    return total
