"""Cells (1-types) of a normalized matrix and the weighted pair coefficients."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Mapping, Sequence

import numpy as np

from .fol import (
    And, Atom, Formula, Iff, Implies, LiftpolyError, Not, Or, Truth, WeightMap, atoms, holds,
    literal_set_weight, rename, simplify,
)
from .normalize import NormalizedSentence
from .poly import Poly


@dataclass(frozen=True)
class Cell:
    """Truth values of every unary atom ``P(x)`` and reflexive atom ``R(x,x)``."""
    index: int
    values: tuple[tuple[str, bool], ...]

    def __getitem__(self, pred: str) -> bool:
        return dict(self.values)[pred]

    def as_dict(self) -> dict[str, bool]:
        return dict(self.values)

    def describe(self, arity: Mapping[str, int]) -> str:
        lits = []
        for p, val in self.values:
            atom = f"{p}(x)" if arity[p] == 1 else f"{p}(x,x)"
            lits.append(atom if val else "~" + atom)
        return " & ".join(lits) if lits else "true"


def cell_atoms(ns: NormalizedSentence) -> list[str]:
    unary = [p for p, d in ns.vocabulary.items() if d.arity == 1]
    binary = [p for p, d in ns.vocabulary.items() if d.arity == 2]
    return unary + binary


def enumerate_cells(ns: NormalizedSentence, prune: bool = True) -> list[Cell]:
    """All 1-types, canonically ordered; with ``prune`` only those satisfying psi(x,x)."""
    names = cell_atoms(ns)
    diag = rename(ns.matrix, {"y": "x"})
    cells = []
    for bits in product((False, True), repeat=len(names)):
        values = dict(zip(names, bits))
        if prune and not holds(diag, lambda a: values[a.pred]):
            continue
        cells.append(Cell(len(cells), tuple(zip(names, bits))))
    return cells


def wmc_ground(formula: Formula, weights: WeightMap):
    """Weighted model count of a ground quantifier-free formula by truth table."""
    ground = sorted({(a.pred, a.args) for a in atoms(formula)})
    total = 0
    for bits in product((False, True), repeat=len(ground)):
        val = dict(zip(ground, bits))
        if holds(formula, lambda a: val[(a.pred, a.args)]):
            lits = [(p, args, b) for (p, args), b in zip(ground, bits)]
            total = total + literal_set_weight(lits, weights)
    return total


def vec_eval(f: Formula, columns: Mapping[tuple, np.ndarray], size: int) -> np.ndarray:
    """Evaluate a quantifier-free formula over boolean columns keyed by ``(pred, args)``."""
    if isinstance(f, Truth):
        return np.full(size, f.value)
    if isinstance(f, Atom):
        return columns[(f.pred, f.args)]
    if isinstance(f, Not):
        return ~vec_eval(f.arg, columns, size)
    if isinstance(f, And):
        out = np.ones(size, dtype=bool)
        for a in f.args:
            out &= vec_eval(a, columns, size)
        return out
    if isinstance(f, Or):
        out = np.zeros(size, dtype=bool)
        for a in f.args:
            out |= vec_eval(a, columns, size)
        return out
    if isinstance(f, Implies):
        return ~vec_eval(f.left, columns, size) | vec_eval(f.right, columns, size)
    if isinstance(f, Iff):
        return vec_eval(f.left, columns, size) == vec_eval(f.right, columns, size)
    raise LiftpolyError(f"quantifier inside a matrix: {f}")


def _dot(counts: np.ndarray, weights: Sequence):
    total = 0
    for c, w in zip(counts.tolist(), weights):
        if c:
            total = total + (w * c if isinstance(w, Poly) else w * c)
    return total


@dataclass
class CellCoefficients:
    """Weights of cells and of cell pairs.

    ``r[i][j]`` counts both pair orientations; ``r_arrow[i][j]`` additionally
    forbids the edge from the ``j`` element to the ``i`` element;
    ``r_nonadj[i][j]`` forbids both edge directions. ``s`` and ``s_nonadj``
    are the diagonals.
    """
    cells: list[Cell]
    relation: str | None
    cell_weight: list
    r: list[list]
    r_arrow: list[list] | None
    r_nonadj: list[list] | None
    asymmetric_pairs: bool
    reflexive_cells: tuple[int, ...]

    @property
    def s(self) -> list:
        return [self.r[i][i] for i in range(len(self.cells))]

    @property
    def s_nonadj(self) -> list:
        return [self.r_nonadj[i][i] for i in range(len(self.cells))]

    def is_symmetric_irreflexive(self) -> bool:
        return not self.asymmetric_pairs and not self.reflexive_cells

    def table(self) -> str:
        lines = []
        for name in ("cell_weight",):
            lines.append(f"{name}: " + ", ".join(str(v) for v in self.cell_weight))
        for name in ("r", "r_arrow", "r_nonadj"):
            mat = getattr(self, name)
            if mat is None:
                continue
            lines.append(f"{name}:")
            for row in mat:
                lines.append("  " + " | ".join(str(v) for v in row))
        return "\n".join(lines)


def _substitute(psi: Formula, cx: dict, cy: dict, ex: str, ey: str, binary: set) -> Formula:
    """psi with x := element ex (cell cx), y := ey (cell cy); cross atoms become ground."""
    cell_of = {"x": cx, "y": cy}
    elem = {"x": ex, "y": ey}

    def value(a: Atom):
        if len(a.args) == 1 or a.args[0] == a.args[1]:
            return cell_of[a.args[0]][a.pred]
        return None

    f = simplify(psi, value)
    return rename_ground(f, elem)


def rename_ground(f: Formula, elem: Mapping[str, str]) -> Formula:
    return rename(f, elem)


def compute_coefficients(ns: NormalizedSentence, cells: list[Cell], relation: str | None = None,
                         weights: WeightMap | None = None) -> CellCoefficients:
    if weights is None:
        weights = ns.symbolic_weights()
    if relation is not None:
        pred = ns.vocabulary.get(relation)
        if pred is None or pred.arity != 2:
            raise LiftpolyError(f"relation {relation} must be a declared binary predicate")
    binary = [p for p, d in ns.vocabulary.items() if d.arity == 2]
    keys = []
    for p in binary:
        keys.append((p, ("a", "b")))
        keys.append((p, ("b", "a")))
    size = 1 << len(keys)
    idx = np.arange(size, dtype=np.int64)
    columns = {k: ((idx >> i) & 1).astype(bool) for i, k in enumerate(keys)}

    # weight of a cross assignment depends only on positive counts per predicate
    sig = np.zeros(size, dtype=np.int64)
    for j, p in enumerate(binary):
        pos = columns[(p, ("a", "b"))].astype(np.int64) + columns[(p, ("b", "a"))]
        sig += pos * (3 ** j)
    n_sig = 3 ** len(binary)
    sig_weight = []
    for code in range(n_sig):
        w = 1
        c = code
        for p in binary:
            k = c % 3
            c //= 3
            wp, wbp = weights[p]
            for _ in range(k):
                w = w * wp
            for _ in range(2 - k):
                w = w * wbp
        sig_weight.append(w)

    cell_weight = []
    for cell in cells:
        lits = [(p, ("x",), v) for p, v in cell.values]
        cell_weight.append(literal_set_weight(lits, weights))

    L = len(cells)
    r = [[0] * L for _ in range(L)]
    r_arrow = [[0] * L for _ in range(L)] if relation else None
    r_nonadj = [[0] * L for _ in range(L)] if relation else None
    if relation:
        rab = columns[(relation, ("a", "b"))]
        rba = columns[(relation, ("b", "a"))]
    asym = False
    for i in range(L):
        ci = cells[i].as_dict()
        for j in range(i, L):
            cj = cells[j].as_dict()
            f = And((_substitute(ns.matrix, ci, cj, "a", "b", set(binary)),
                     _substitute(ns.matrix, cj, ci, "b", "a", set(binary))))
            mask = vec_eval(f, columns, size)
            counts = np.bincount(sig[mask], minlength=n_sig)
            r[i][j] = r[j][i] = _dot(counts, sig_weight)
            if relation:
                if np.any(mask & (rab != rba)):
                    asym = True
                # r_arrow[i][j]: element of cell j has no edge towards the cell-i element
                m_ij = mask & ~rba
                m_ji = mask & ~rab
                r_arrow[i][j] = _dot(np.bincount(sig[m_ij], minlength=n_sig), sig_weight)
                r_arrow[j][i] = _dot(np.bincount(sig[m_ji], minlength=n_sig), sig_weight)
                both = mask & ~rab & ~rba
                r_nonadj[i][j] = r_nonadj[j][i] = _dot(
                    np.bincount(sig[both], minlength=n_sig), sig_weight)
    reflexive = tuple(c.index for c in cells if relation and c[relation])
    return CellCoefficients(cells, relation, cell_weight, r, r_arrow, r_nonadj, asym, reflexive)
