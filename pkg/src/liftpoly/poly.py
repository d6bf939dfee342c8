"""Sparse multivariate polynomials over the rationals.

Coefficients are kept as ``int`` when integral and ``fractions.Fraction``
otherwise, so the common all-integer case stays on the fast path.
"""
from __future__ import annotations

import json
from fractions import Fraction
from math import comb
from numbers import Rational
from typing import Iterable, Mapping, Sequence, Union

Number = Union[int, Fraction]

# display/storage order for well-known symbols; everything else sorts after
_PRIORITY = {"u": 0, "v": 1, "t": 2, "x": 3, "y": 4}


def _var_key(name: str):
    return (_PRIORITY.get(name, len(_PRIORITY)), name)


def canonical_vars(names: Iterable[str]) -> tuple[str, ...]:
    return tuple(sorted(set(names), key=_var_key))


def as_rational(value) -> Number:
    """Coerce ints, Fractions and ``"p/q"`` strings to a canonical rational."""
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else value
    if isinstance(value, str):
        return as_rational(Fraction(value.strip()))
    if isinstance(value, Rational):
        return as_rational(Fraction(value.numerator, value.denominator))
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def _norm(c) -> Number:
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


class Poly:
    """Immutable sparse polynomial ``{exponent tuple: coefficient}``.

    ``vars`` fixes the meaning of each exponent position and is always in
    canonical order. Zero coefficients are never stored.
    """

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, terms: Mapping[tuple[int, ...], Number] | None = None,
                 vars: Sequence[str] = ()):
        vars = tuple(vars)
        if vars != canonical_vars(vars):
            raise ValueError(f"variables {vars} are not in canonical order")
        clean: dict[tuple[int, ...], Number] = {}
        for exp, c in (terms or {}).items():
            if len(exp) != len(vars):
                raise ValueError(f"exponent {exp} does not match variables {vars}")
            if any(e < 0 for e in exp):
                raise ValueError(f"negative exponent in {exp}")
            c = as_rational(c)
            if c:
                clean[tuple(exp)] = c
        self.vars = vars
        self.terms = clean
        self._hash = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def _raw(cls, terms: dict, vars: tuple[str, ...]) -> "Poly":
        p = object.__new__(cls)
        p.vars = vars
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c) -> "Poly":
        c = as_rational(c)
        return cls._raw({(): c} if c else {}, ())

    @classmethod
    def var(cls, name: str, power: int = 1) -> "Poly":
        return cls._raw({(power,): 1}, (name,))

    @classmethod
    def from_dict(cls, mapping: Mapping[Mapping[str, int] | tuple, Number] | Mapping,
                  vars: Sequence[str]) -> "Poly":
        """Build from ``{exp_tuple: coeff}`` positional to ``vars`` (any order)."""
        vars = tuple(vars)
        target = canonical_vars(vars)
        perm = [vars.index(v) for v in target]
        terms: dict[tuple[int, ...], Number] = {}
        for exp, c in mapping.items():
            key = tuple(exp[i] for i in perm)
            terms[key] = terms.get(key, 0) + as_rational(c)
        return cls(terms, target)

    # -- basic queries ----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Number:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return next(iter(self.terms.values()), 0)

    def degree(self, var: str | None = None) -> int:
        """Degree in ``var`` (total degree if omitted); -1 for the zero polynomial."""
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e) for e in self.terms)
        if var not in self.vars:
            return 0
        i = self.vars.index(var)
        return max(e[i] for e in self.terms)

    def coefficient(self, monomial: Mapping[str, int] | Sequence[int] | None = None) -> Number:
        """``[monomial] p``; a mapping names exponents, a sequence is positional."""
        if monomial is None:
            monomial = {}
        if isinstance(monomial, Mapping):
            for name, e in monomial.items():
                if e and name not in self.vars:
                    return 0
            key = tuple(monomial.get(v, 0) for v in self.vars)
        else:
            key = tuple(monomial)
            if len(key) != len(self.vars):
                raise ValueError("positional monomial must match the variable list")
        return self.terms.get(key, 0)

    def coefficient_in(self, var: str, power: int) -> "Poly":
        """Coefficient of ``var**power`` as a polynomial in the remaining variables."""
        if var not in self.vars:
            return self if power == 0 else Poly()
        i = self.vars.index(var)
        rest = self.vars[:i] + self.vars[i + 1:]
        out: dict = {}
        for e, c in self.terms.items():
            if e[i] == power:
                out[e[:i] + e[i + 1:]] = c
        return Poly._raw(out, rest)

    # -- alignment --------------------------------------------------------
    def with_vars(self, vars: Sequence[str]) -> "Poly":
        """Re-express over a superset of the current variables."""
        vars = tuple(vars)
        if vars == self.vars:
            return self
        missing = set(self.vars) - set(vars)
        if missing:
            nonzero = [v for v in missing if self.degree(v) > 0]
            if nonzero:
                raise ValueError(f"cannot drop variables {nonzero} still in use")
        idx = [self.vars.index(v) if v in self.vars else -1 for v in vars]
        out = {}
        for e, c in self.terms.items():
            key = tuple(e[i] if i >= 0 else 0 for i in idx)
            out[key] = out.get(key, 0) + c
        return Poly._raw({k: c for k, c in out.items() if c}, vars)

    def trim(self) -> "Poly":
        """Drop variables that no term uses."""
        used = [v for v in self.vars if self.degree(v) > 0]
        return self.with_vars(tuple(used)) if len(used) != len(self.vars) else self

    @staticmethod
    def _align(a: "Poly", b: "Poly") -> tuple["Poly", "Poly"]:
        if a.vars == b.vars:
            return a, b
        vars = canonical_vars(a.vars + b.vars)
        return a.with_vars(vars), b.with_vars(vars)

    # -- arithmetic -------------------------------------------------------
    @staticmethod
    def lift(x) -> "Poly":
        return x if isinstance(x, Poly) else Poly.const(x)

    def __add__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            other = as_rational(other)
            if not other:
                return self
            other = Poly._raw({(0,) * len(self.vars): other}, self.vars)
        a, b = Poly._align(self, other)
        out = dict(a.terms)
        for e, c in b.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = _norm(s)
            else:
                out.pop(e, None)
        return Poly._raw(out, a.vars)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw({e: -c for e, c in self.terms.items()}, self.vars)

    def __sub__(self, other) -> "Poly":
        return self + (-Poly.lift(other))

    def __rsub__(self, other) -> "Poly":
        return Poly.lift(other) + (-self)

    def scale(self, c) -> "Poly":
        c = as_rational(c)
        if not c:
            return Poly._raw({}, self.vars)
        if c == 1:
            return self
        return Poly._raw({e: _norm(v * c) for e, v in self.terms.items()}, self.vars)

    def mul(self, other, caps: Sequence[int | None] | None = None) -> "Poly":
        """Product, optionally discarding terms whose exponent exceeds ``caps``.

        ``caps`` is positional against the product's variables.
        """
        if not isinstance(other, Poly):
            return self.scale(other)
        a, b = Poly._align(self, other)
        out: dict = {}
        get = out.get
        if caps is None or all(c is None for c in caps):
            for e1, c1 in a.terms.items():
                for e2, c2 in b.terms.items():
                    e = tuple(x + y for x, y in zip(e1, e2))
                    out[e] = get(e, 0) + c1 * c2
        else:
            limits = [10**9 if c is None else c for c in caps]
            for e1, c1 in a.terms.items():
                for e2, c2 in b.terms.items():
                    e = tuple(x + y for x, y in zip(e1, e2))
                    if any(x > m for x, m in zip(e, limits)):
                        continue
                    out[e] = get(e, 0) + c1 * c2
        return Poly._raw({e: _norm(c) for e, c in out.items() if c}, a.vars)

    def __mul__(self, other) -> "Poly":
        return self.mul(other)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Poly":
        if isinstance(other, Poly):
            other = other.constant_value()
        other = as_rational(other)
        if not other:
            raise ZeroDivisionError("polynomial divided by zero")
        return self.scale(Fraction(1) / other)

    def __pow__(self, k: int) -> "Poly":
        return self.pow(k)

    def pow(self, k: int, caps: Sequence[int | None] | None = None) -> "Poly":
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        result = Poly._raw({(0,) * len(self.vars): 1}, self.vars)
        base = self
        while k:
            if k & 1:
                result = result.mul(base, caps)
            k >>= 1
            if k:
                base = base.mul(base, caps)
        return result

    def truncate(self, caps: Sequence[int | None]) -> "Poly":
        limits = [10**9 if c is None else c for c in caps]
        return Poly._raw({e: c for e, c in self.terms.items()
                          if all(x <= m for x, m in zip(e, limits))}, self.vars)

    # -- substitution -----------------------------------------------------
    def eval(self, point: Mapping[str, object] | None = None):
        """Substitute rationals (or polynomials) for some variables.

        Returns a rational when no variable survives, otherwise a Poly.
        """
        fixed = {k: v for k, v in (point or {}).items() if k in self.vars}
        if not fixed:
            return self._collapse()
        if any(isinstance(v, Poly) for v in fixed.values()):
            return self._compose(fixed)
        keep = tuple(v for v in self.vars if v not in fixed)
        keep_idx = [self.vars.index(v) for v in keep]
        num_idx = [(self.vars.index(k), as_rational(val)) for k, val in fixed.items()]
        acc: dict = {}
        for e, c in self.terms.items():
            val = c
            for i, x in num_idx:
                if e[i]:
                    val = val * x ** e[i]
            if not val:
                continue
            key = tuple(e[i] for i in keep_idx)
            acc[key] = acc.get(key, 0) + val
        return Poly._raw({k: _norm(c) for k, c in acc.items() if c}, keep)._collapse()

    def _compose(self, point: Mapping[str, object]):
        out = Poly()
        powers: dict = {}
        for e, c in self.terms.items():
            term = Poly.const(c)
            mono = {}
            for name, k in zip(self.vars, e):
                if not k:
                    continue
                if name in point:
                    key = (name, k)
                    if key not in powers:
                        powers[key] = Poly.lift(point[name]) ** k
                    term = term * powers[key]
                else:
                    mono[name] = k
            if mono:
                names = canonical_vars(mono)
                term = term * Poly._raw({tuple(mono[n] for n in names): 1}, names)
            out = out + term
        return out._collapse()

    def _collapse(self):
        if self.is_constant():
            return self.constant_value()
        return self.trim()

    def subs(self, name: str, value) -> "Poly":
        """Substitute ``value`` (rational or Poly) for ``name``; always returns a Poly."""
        res = self.eval({name: value})
        return Poly.lift(res)

    def shift(self, name: str, delta) -> "Poly":
        """``p(name + delta)``, e.g. ``shift('u', -1)`` gives the tables' f(u-1)."""
        if name not in self.vars:
            return self
        delta = as_rational(delta)
        i = self.vars.index(name)
        out: dict = {}
        for e, c in self.terms.items():
            k = e[i]
            for j in range(k + 1):
                coeff = c * comb(k, j) * delta ** (k - j)
                if not coeff:
                    continue
                key = e[:i] + (j,) + e[i + 1:]
                out[key] = out.get(key, 0) + coeff
        return Poly._raw({e: _norm(c) for e, c in out.items() if c}, self.vars)

    def map_coefficients(self, fn) -> "Poly":
        return Poly({e: fn(c) for e, c in self.terms.items()}, self.vars)

    # -- comparison / display ---------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            try:
                other = Poly.const(other)
            except TypeError:
                return NotImplemented
        a, b = self.trim(), other.trim()
        return a.vars == b.vars and a.terms == b.terms

    def __hash__(self) -> int:
        if self._hash is None:
            t = self.trim()
            self._hash = hash((t.vars, frozenset(t.terms.items())))
        return self._hash

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items()):
            mono = "*".join(
                name if k == 1 else f"{name}^{k}" for name, k in zip(self.vars, e) if k)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                cs = f"({c})" if isinstance(c, Fraction) else str(c)
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"Poly({self})"

    # -- JSON -------------------------------------------------------------
    def to_json_obj(self) -> dict:
        return {
            "vars": list(self.vars),
            "terms": [{"exp": list(e), "coeff": str(c)} for e, c in sorted(self.terms.items())],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), separators=(",", ":"))

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "Poly":
        vars = tuple(obj["vars"])
        terms: dict = {}
        for t in obj["terms"]:
            exp = tuple(int(e) for e in t["exp"])
            terms[exp] = terms.get(exp, 0) + as_rational(str(t["coeff"]))
        return cls.from_dict(terms, vars)

    @classmethod
    def from_json(cls, text: str) -> "Poly":
        return cls.from_json_obj(json.loads(text))


def lagrange_basis(nodes: Sequence[Number], var: str) -> list[Poly]:
    """Lagrange basis polynomials for distinct rational ``nodes``."""
    nodes = [as_rational(x) for x in nodes]
    if len(set(nodes)) != len(nodes):
        raise ValueError("interpolation nodes must be distinct")
    basis = []
    for i, xi in enumerate(nodes):
        # coefficient list, lowest degree first
        coeffs: list = [Fraction(1)]
        denom = Fraction(1)
        for j, xj in enumerate(nodes):
            if j == i:
                continue
            # multiply by (X - xj)
            new = [Fraction(0)] * (len(coeffs) + 1)
            for k, c in enumerate(coeffs):
                new[k + 1] += c
                new[k] -= c * xj
            coeffs = new
            denom *= xi - xj
        basis.append(Poly({(k,): c / denom for k, c in enumerate(coeffs)}, (var,)))
    return basis


def interpolate_1d(points: Sequence[tuple[object, object]], degree: int,
                   var: str = "u") -> Poly:
    """Exact Lagrange interpolation of degree at most ``degree``.

    Values may themselves be Polys (in other variables); the result then
    carries those variables too. Extra points beyond ``degree + 1`` must be
    consistent with the interpolant.
    """
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    xs = [as_rational(x) for x, _ in points]
    if len(set(xs)) != len(xs):
        raise ValueError("duplicate interpolation nodes")
    if len(points) < degree + 1:
        raise ValueError(f"need {degree + 1} points, got {len(points)}")
    used = points[:degree + 1]
    basis = lagrange_basis([x for x, _ in used], var)
    result = Poly()
    for (_, y), b in zip(used, basis):
        result = result + b * Poly.lift(y) if isinstance(y, Poly) else result + b.scale(y)
    for x, y in points[degree + 1:]:
        if Poly.lift(result.eval({var: x})) != Poly.lift(y):
            raise ValueError(f"point ({x}, {y}) is inconsistent with a degree-{degree} fit")
    return result


def interpolate_2d(points: Sequence[tuple[object, object, object]], degree_u: int,
                   degree_v: int, vars: tuple[str, str] = ("u", "v")) -> Poly:
    """Tensor-product Lagrange interpolation on a full rectangular grid."""
    grid: dict = {}
    for u, v, y in points:
        key = (as_rational(u), as_rational(v))
        if key in grid:
            raise ValueError(f"duplicate node {key}")
        grid[key] = y
    us = sorted({k[0] for k in grid})
    vs = sorted({k[1] for k in grid})
    if len(us) < degree_u + 1 or len(vs) < degree_v + 1:
        raise ValueError("not enough grid nodes for the requested degrees")
    if len(grid) != len(us) * len(vs):
        raise ValueError("points do not form a complete grid")
    us, vs = us[:degree_u + 1], vs[:degree_v + 1]
    bu = lagrange_basis(us, vars[0])
    bv = lagrange_basis(vs, vars[1])
    result = Poly()
    for i, ui in enumerate(us):
        row = Poly()
        for j, vj in enumerate(vs):
            y = grid[(ui, vj)]
            row = row + (bv[j] * y if isinstance(y, Poly) else bv[j].scale(y))
        result = result + bu[i] * row
    return result
