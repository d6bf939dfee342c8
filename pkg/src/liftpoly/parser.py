"""Text format for sentences: a formula grammar plus a small directive file format.

Formula grammar (loosest binding first)::

    formula  := quant | iff
    quant    := ('forall' | 'exists') VAR '.' formula
              | 'exists_eq' INT VAR '.' formula
    iff      := implies ('<->' implies)?
    implies  := or ('->' implies)?
    or       := and ('|' and)*
    and      := unary ('&' unary)*
    unary    := '~' unary | quant | '(' formula ')' | 'true' | 'false' | atom
    atom     := NAME '(' VAR (',' VAR)* ')'

A quantifier body extends as far right as possible.
"""
from __future__ import annotations

import ast
import re
from dataclasses import dataclass

from .fol import (
    AXIOM_KINDS, COMPARATORS, And, Atom, AxiomAnnotation, CardinalityConstraint, CountExpr,
    Exists, ExistsEq, Forall, Formula, GroundUnaryLiteral, Iff, Implies, LiftpolyError, Not,
    Or, Predicate, Sentence, Truth, TRUE, VocabularyError, WeightMap, atoms, conj,
)
from .poly import Poly, as_rational


class SentenceSyntaxError(LiftpolyError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<arrow2><->)
  | (?P<arrow>->)
  | (?P<num>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[()~&|.,])
""", re.VERBOSE)

_KEYWORDS = {"forall", "exists", "exists_eq", "true", "false"}


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str, line: int = 1, col0: int = 1) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise SentenceSyntaxError(f"unexpected character {text[pos]!r}", line, col0 + pos)
        kind = m.lastgroup
        if kind != "ws":
            tk = m.group()
            if kind == "name" and tk in _KEYWORDS:
                kind = tk
            elif kind in ("arrow", "arrow2", "punct"):
                kind = tk
            toks.append(_Tok(kind, tk, line, col0 + pos))
        pos = m.end()
    toks.append(_Tok("eof", "", line, col0 + len(text)))
    return toks


class _FormulaParser:
    def __init__(self, toks: list[_Tok]):
        self.toks = toks
        self.i = 0

    @property
    def cur(self) -> _Tok:
        return self.toks[self.i]

    def take(self, kind: str | None = None) -> _Tok:
        tok = self.cur
        if kind is not None and tok.kind != kind:
            want = "end of input" if kind == "eof" else repr(kind)
            got = "end of input" if tok.kind == "eof" else repr(tok.text)
            raise SentenceSyntaxError(f"expected {want}, got {got}", tok.line, tok.col)
        self.i += 1
        return tok

    def formula(self) -> Formula:
        if self.cur.kind in ("forall", "exists", "exists_eq"):
            return self.quant()
        return self.iff()

    def quant(self) -> Formula:
        kw = self.take()
        count = None
        if kw.kind == "exists_eq":
            count = int(self.take("num").text)
        var = self.take("name").text
        self.take(".")
        body = self.formula()
        if kw.kind == "forall":
            return Forall(var, body)
        if kw.kind == "exists":
            return Exists(var, body)
        return ExistsEq(count, var, body)

    def iff(self) -> Formula:
        left = self.implies()
        if self.cur.kind == "<->":
            self.take()
            return Iff(left, self.implies())
        return left

    def implies(self) -> Formula:
        left = self.disj()
        if self.cur.kind == "->":
            self.take()
            return Implies(left, self.implies())
        return left

    def disj(self) -> Formula:
        parts = [self.conj()]
        while self.cur.kind == "|":
            self.take()
            parts.append(self.conj())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def conj(self) -> Formula:
        parts = [self.unary()]
        while self.cur.kind == "&":
            self.take()
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def unary(self) -> Formula:
        tok = self.cur
        if tok.kind == "~":
            self.take()
            return Not(self.unary())
        if tok.kind in ("forall", "exists", "exists_eq"):
            return self.quant()
        if tok.kind == "(":
            self.take()
            f = self.formula()
            self.take(")")
            return f
        if tok.kind in ("true", "false"):
            self.take()
            return Truth(tok.kind == "true")
        if tok.kind == "name":
            return self.atom()
        got = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise SentenceSyntaxError(f"expected a formula, got {got}", tok.line, tok.col)

    def atom(self) -> Formula:
        name = self.take("name").text
        self.take("(")
        args = [self._arg()]
        while self.cur.kind == ",":
            self.take()
            args.append(self._arg())
        self.take(")")
        return Atom(name, tuple(args))

    def _arg(self) -> str:
        tok = self.cur
        if tok.kind == "num":
            raise SentenceSyntaxError(
                "constants may only appear in unary evidence literals", tok.line, tok.col)
        return self.take("name").text


def parse_formula(text: str, line: int = 1, column: int = 1) -> Formula:
    p = _FormulaParser(_tokenize(text, line, column))
    f = p.formula()
    p.take("eof")
    return f


# --------------------------------------------------------------------------
# pretty printing

def format_formula(f: Formula) -> str:
    """Print so that ``parse_formula(format_formula(f)) == f``."""
    return _fmt(f, top=True)


def _fmt(f: Formula, top: bool = False) -> str:
    if isinstance(f, Truth):
        return "true" if f.value else "false"
    if isinstance(f, Atom):
        return f"{f.pred}({','.join(f.args)})"
    if isinstance(f, Not):
        return "~" + _fmt(f.arg)
    if isinstance(f, (Forall, Exists, ExistsEq)):
        if isinstance(f, Forall):
            head = f"forall {f.var}."
        elif isinstance(f, Exists):
            head = f"exists {f.var}."
        else:
            head = f"exists_eq {f.count} {f.var}."
        s = f"{head} {_fmt(f.body, top=True)}"
        return s if top else f"({s})"
    if isinstance(f, And):
        s = " & ".join(_fmt(a) for a in f.args)
    elif isinstance(f, Or):
        s = " | ".join(_fmt(a) for a in f.args)
    elif isinstance(f, Implies):
        s = f"{_fmt(f.left)} -> {_fmt(f.right)}"
    else:
        s = f"{_fmt(f.left)} <-> {_fmt(f.right)}"
    return f"({s})"


# --------------------------------------------------------------------------
# count expressions

_CMP_RE = re.compile(r"(<=|>=|=|<|>|≤|≥)")
_CMP_ALIASES = {"≤": "<=", "≥": ">="}


def parse_count_expr(text: str) -> CountExpr:
    """Integer polynomial in ``n``: integers, ``n``, ``+ - *``, ``^``/``**``, parentheses."""
    src = text.strip().replace("^", "**")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError:
        raise LiftpolyError(f"bad count expression {text!r}") from None
    return CountExpr(text.strip(), _count_poly(tree.body, text))


def _count_poly(node, text) -> Poly:
    if isinstance(node, ast.Constant) and type(node.value) is int:
        return Poly.const(node.value)
    if isinstance(node, ast.Name) and node.id == "n":
        return Poly.var("n")
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        p = _count_poly(node.operand, text)
        return -p if isinstance(node.op, ast.USub) else p
    if isinstance(node, ast.BinOp):
        a = _count_poly(node.left, text)
        if isinstance(node.op, ast.Pow):
            if not (isinstance(node.right, ast.Constant) and type(node.right.value) is int
                    and node.right.value >= 0):
                raise LiftpolyError(f"exponent must be a non-negative integer in {text!r}")
            return a.pow(node.right.value)
        b = _count_poly(node.right, text)
        if isinstance(node.op, ast.Add):
            return a + b
        if isinstance(node.op, ast.Sub):
            return a - b
        if isinstance(node.op, ast.Mult):
            return a * b
    raise LiftpolyError(f"unsupported count expression {text!r}")


def parse_cardinality(text: str, line: int = 1) -> CardinalityConstraint:
    """``|R| = n*(n-1)``, or a positive combination such as ``|R| + 2*|S| <= n``."""
    parts = _CMP_RE.split(text, maxsplit=1)
    if len(parts) != 3:
        raise SentenceSyntaxError(f"cardinality constraint needs one of {COMPARATORS}", line)
    lhs, op, rhs = parts
    op = _CMP_ALIASES.get(op, op)
    terms: dict[str, int] = {}
    for chunk in lhs.split("+"):
        m = re.fullmatch(r"\s*(?:(\d+)\s*\*\s*)?\|\s*([A-Za-z_][A-Za-z0-9_]*)\s*\|\s*", chunk)
        if m is None:
            raise SentenceSyntaxError(f"bad cardinality term {chunk.strip()!r}", line)
        coeff = int(m.group(1) or 1)
        terms[m.group(2)] = terms.get(m.group(2), 0) + coeff
    return CardinalityConstraint(tuple(terms.items()), op, parse_count_expr(rhs))


def format_cardinality(c: CardinalityConstraint) -> str:
    lhs = " + ".join(f"|{p}|" if k == 1 else f"{k}*|{p}|" for p, k in c.terms)
    return f"{lhs} {c.comparator} {c.bound.text}"


# --------------------------------------------------------------------------
# axioms and evidence

def parse_axiom(text: str, line: int = 1) -> AxiomAnnotation:
    m = re.fullmatch(r"\s*([A-Za-z]+)(?:_(\d+))?\s*\(\s*([A-Za-z_]\w*)\s*(?:,\s*([A-Za-z_]\w*)\s*)?\)\s*",
                     text)
    if m is None:
        raise SentenceSyntaxError(f"bad axiom annotation {text.strip()!r}", line)
    kind, k, rel, root = m.groups()
    if kind not in AXIOM_KINDS:
        raise SentenceSyntaxError(f"unsupported axiom kind {kind!r}", line)
    return AxiomAnnotation(kind, rel, None if k is None else int(k), root)


def parse_evidence(text: str, line: int = 1) -> list[GroundUnaryLiteral]:
    out = []
    for chunk in text.split(","):
        m = re.fullmatch(r"\s*(~?)\s*([A-Za-z_]\w*)\s*\(\s*(\d+)\s*\)\s*", chunk)
        if m is None:
            raise SentenceSyntaxError(
                f"bad evidence literal {chunk.strip()!r}; expected P(i) or ~P(i)", line)
        out.append(GroundUnaryLiteral(m.group(2), int(m.group(3)), m.group(1) != "~"))
    return out


# --------------------------------------------------------------------------
# sentence files

def _split_top_commas(text: str) -> list[str]:
    return [c.strip() for c in text.split(",") if c.strip()]


def parse_sentence(text: str) -> Sentence:
    """Parse a sentence file, or a bare formula when no directives are present.

    In a bare formula the vocabulary is inferred from usage. In a file with
    ``predicate`` lines every used predicate must be declared.
    """
    lines = text.splitlines()
    directive = re.compile(r"\s*(predicate|weight|sentence|cardinality|evidence|axiom)\b")
    if not any(directive.match(ln.split("#", 1)[0]) for ln in lines):
        formula = parse_formula(text)
        return Sentence(formula, _infer_vocab(formula, {}))

    vocab: dict[str, Predicate] = {}
    declared = False
    weights: dict[str, tuple] = {}
    formulas: list[Formula] = []
    cards: list[CardinalityConstraint] = []
    evidence: list[GroundUnaryLiteral] = []
    axioms: list[AxiomAnnotation] = []
    for lineno, raw in enumerate(lines, start=1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        m = directive.match(body)
        if m is None:
            col = len(body) - len(body.lstrip()) + 1
            raise SentenceSyntaxError(f"unknown directive {body.strip()!r}", lineno, col)
        key = m.group(1)
        rest = body[m.end():]
        if key in ("sentence", "cardinality", "evidence", "axiom"):
            stripped = rest.lstrip()
            if not stripped.startswith(":"):
                raise SentenceSyntaxError(f"expected ':' after {key}", lineno, m.end() + 1)
            offset = m.end() + (len(rest) - len(stripped)) + 1
            rest = stripped[1:]
        else:
            offset = m.end()
        try:
            if key == "predicate":
                declared = True
                for item in _split_top_commas(rest):
                    pm = re.fullmatch(r"([A-Za-z_]\w*)\s*/\s*(\d+)", item)
                    if pm is None:
                        raise SentenceSyntaxError(f"bad predicate declaration {item!r}", lineno)
                    pred = Predicate(pm.group(1), int(pm.group(2)))
                    if pred.name in vocab and vocab[pred.name] != pred:
                        raise VocabularyError(f"predicate {pred.name} declared twice")
                    vocab[pred.name] = pred
            elif key == "weight":
                wm = re.fullmatch(r"\s*([A-Za-z_]\w*)\s*=\s*([^,]+),\s*([^,]+?)\s*", rest)
                if wm is None:
                    raise SentenceSyntaxError("expected 'weight P = w, wbar'", lineno)
                weights[wm.group(1)] = (as_rational(wm.group(2).strip()),
                                        as_rational(wm.group(3).strip()))
            elif key == "sentence":
                formulas.append(parse_formula(rest, lineno, offset + 1))
            elif key == "cardinality":
                cards.append(parse_cardinality(rest, lineno))
            elif key == "evidence":
                evidence.extend(parse_evidence(rest, lineno))
            else:
                axioms.append(parse_axiom(rest, lineno))
        except SentenceSyntaxError:
            raise
        except (ValueError, ZeroDivisionError) as exc:
            raise SentenceSyntaxError(str(exc), lineno) from None

    formula = conj(*formulas) if formulas else TRUE
    if not declared:
        vocab = _infer_vocab(formula, vocab)
        for c in cards:
            for p in c.predicates:
                vocab.setdefault(p, Predicate(p, 2))
        for lit in evidence:
            vocab.setdefault(lit.pred, Predicate(lit.pred, 1))
        for ax in axioms:
            vocab.setdefault(ax.relation, Predicate(ax.relation, 2))
            if ax.root is not None:
                vocab.setdefault(ax.root, Predicate(ax.root, 1))
    for p in weights:
        if p not in vocab:
            raise VocabularyError(f"weight given for undeclared predicate {p}")
    return Sentence(formula, vocab, WeightMap(weights), tuple(cards), tuple(evidence),
                    tuple(axioms))


def _infer_vocab(formula: Formula, vocab: dict) -> dict:
    vocab = dict(vocab)
    for a in atoms(formula):
        known = vocab.get(a.pred)
        if known is None:
            vocab[a.pred] = Predicate(a.pred, len(a.args))
        elif known.arity != len(a.args):
            raise VocabularyError(
                f"{a.pred} is used with arities {known.arity} and {len(a.args)}")
    return vocab


def format_sentence(s: Sentence) -> str:
    """Render a Sentence in the file format accepted by :func:`parse_sentence`."""
    out = []
    if s.vocabulary:
        out.append("predicate " + ", ".join(str(p) for p in s.vocabulary.values()))
    for name in s.vocabulary:
        w, wb = s.weights[name]
        if (w, wb) != (1, 1) and not isinstance(w, Poly) and not isinstance(wb, Poly):
            out.append(f"weight {name} = {w}, {wb}")
    out.append("sentence: " + format_formula(s.formula))
    for c in s.cardinality:
        out.append("cardinality: " + format_cardinality(c))
    if s.evidence:
        out.append("evidence: " + ", ".join(
            f"{'' if e.positive else '~'}{e.pred}({e.element})" for e in s.evidence))
    for ax in s.axioms:
        out.append(f"axiom: {ax}")
    return "\n".join(out) + "\n"


def load_sentence(path) -> Sentence:
    with open(path, encoding="utf-8") as fh:
        return parse_sentence(fh.read())
