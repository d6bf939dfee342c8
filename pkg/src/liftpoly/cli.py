"""Command-line entry point.

Exit codes: 0 success, 1 usage or input error, 2 computation error.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from fractions import Fraction
from typing import Sequence

from .axioms import plan_axiom, single_axiom, soft_cc_evaluate
from .cells import compute_coefficients, enumerate_cells
from .dp import Stats
from .fol import LiftpolyError, Sentence, VocabularyError
from .graphpoly import (
    EncodedGraphFamily, block_family, complete_family, directed_chromatic, parse_block_spec, tutte,
)
from .normalize import HIDDEN_PREFIX, normalize
from .oracle import (
    axiom_by_enumeration, scp_by_enumeration, wcp_by_enumeration, wfomc_by_enumeration,
)
from .parser import SentenceSyntaxError, load_sentence
from .poly import Poly, as_rational
from .scp import compute_scp
from .wcp import compute_extended_wcp, compute_wcp, wfomc

COMMANDS = ("wfomc", "wcp", "scp", "axiom", "eval-wcp", "tutte", "dichromatic", "oracle")
ORACLE_WHAT = ("wfomc", "wcp", "scp-strict", "scp-nonstrict")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="liftpoly", description="Lifted model counting with graph polynomials.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(name, help, sentence=True, relation=False, n_required=True):
        sp = sub.add_parser(name, help=help)
        if sentence:
            sp.add_argument("--sentence", required=True, metavar="FILE")
        if relation:
            sp.add_argument("--relation", required=relation == "required", metavar="R")
        sp.add_argument("--n", type=int, required=n_required)
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.add_argument("--dump-normalized", action="store_true",
                        help="print the normalized sentence to stderr")
        sp.add_argument("--dump-cells", action="store_true",
                        help="print cells and coefficient tables to stderr")
        return sp

    common("wfomc", "weighted model count (axiom annotations are honoured)")
    sp = common("wcp", "weak connectedness polynomial", relation="required")
    sp.add_argument("--extended", action="store_true", help="track edges with v")
    sp.add_argument("--shifted", action="store_true", help="print f(u-1)")
    sp = common("scp", "strict or non-strict connectedness polynomial", relation="required")
    sp.add_argument("--mode", choices=("strict", "nonstrict"), required=True)
    sp.add_argument("--shifted", action="store_true", help="print g(u-1, v)")
    common("axiom", "weighted count under the file's axiom annotation")
    sp = common("eval-wcp", "evaluate f(u) at a rational point", relation="required")
    sp.add_argument("--at", required=True, metavar="P/Q")
    sp = common("tutte", "Tutte polynomial of a built-in family", sentence=False, n_required=False)
    sp.add_argument("--family", choices=("complete", "blocks"), required=True)
    sp.add_argument("--blocks", metavar="SPEC", help="e.g. 'sizes=2,3;adj=01,10'")
    sp = common("dichromatic", "directed chromatic polynomial of a single-digraph sentence",
                relation="optional")
    sp.add_argument("--mode", choices=("strict", "nonstrict"), required=True)
    sp = common("oracle", "brute-force enumeration", relation="optional")
    sp.add_argument("--what", choices=ORACLE_WHAT, required=True)
    return p


def _threads() -> int:
    raw = os.environ.get("LIFTPOLY_THREADS", "0")
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"LIFTPOLY_THREADS must be a non-negative integer, got {raw!r}") from None
    if value < 0:
        raise UsageError("LIFTPOLY_THREADS must be non-negative")
    return value


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a rational number: {text!r}") from None


def _load(path: str) -> tuple[Sentence, str]:
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return load_sentence(path), hashlib.sha256(data).hexdigest()


def _default_relation(s: Sentence) -> str:
    rels = [p for p in s.binary_predicates() if not p.startswith(HIDDEN_PREFIX)]
    if len(rels) != 1:
        raise UsageError("--relation is required when the sentence has several binary predicates")
    return rels[0]


def _dump(args, s: Sentence, relation: str | None) -> None:
    if not (args.dump_normalized or args.dump_cells):
        return
    ns = normalize(s)
    if args.dump_normalized:
        print(ns.describe(), file=sys.stderr)
    if args.dump_cells:
        cells = enumerate_cells(ns)
        arity = {p: q.arity for p, q in ns.vocabulary.items()}
        for c in cells:
            print(f"cell {c.index}: {c.describe(arity)}", file=sys.stderr)
        print(compute_coefficients(ns, cells, relation).table(), file=sys.stderr)


def _family_from_sentence(s: Sentence, relation: str) -> EncodedGraphFamily:
    return EncodedGraphFamily(s.without_axioms(), relation)


def run(args) -> tuple[object, Stats, str]:
    stats = Stats()
    cmd = args.command
    if cmd == "tutte":
        if args.family == "complete":
            if args.blocks:
                raise UsageError("--blocks only applies to --family blocks")
            if args.n is None:
                raise UsageError("--n is required for --family complete")
            fam, n, digest_src = complete_family(), args.n, f"complete:{args.n}"
        else:
            if not args.blocks:
                raise UsageError("--family blocks requires --blocks SPEC")
            try:
                sizes, adj = parse_block_spec(args.blocks)
            except LiftpolyError as exc:
                raise UsageError(str(exc)) from None
            fam, n, digest_src = block_family(sizes, adj), args.n, f"blocks:{args.blocks}"
            if n is not None and n != fam.size:
                raise UsageError(f"--blocks describes {fam.size} vertices but --n is {n}")
        _dump(args, fam.sentence, fam.edge)
        return tutte(fam, n, stats), stats, hashlib.sha256(digest_src.encode()).hexdigest()

    s, digest = _load(args.sentence)
    relation = getattr(args, "relation", None)
    n = args.n
    if cmd in ("dichromatic",) or (cmd == "oracle" and args.what != "wfomc"):
        relation = relation or _default_relation(s)
    _dump(args, s, relation)

    if cmd == "wfomc":
        if s.axioms:
            q = plan_axiom(s, single_axiom(s))
            return _plain(q.run(n, stats)), stats, digest
        return wfomc(s, n, stats), stats, digest
    if cmd == "axiom":
        if not s.axioms:
            raise UsageError("the sentence file has no axiom annotation")
        q = plan_axiom(s, single_axiom(s))
        return _plain(q.run(n, stats)), stats, digest
    if cmd == "wcp":
        base = s.without_axioms()
        p = (compute_extended_wcp(base, n, relation, stats) if args.extended
             else compute_wcp(base, n, relation, stats))
        return (p.shift("u", -1) if args.shifted else p), stats, digest
    if cmd == "scp":
        p = compute_scp(s.without_axioms(), n, relation, args.mode, stats)
        return (p.shift("u", -1) if args.shifted else p), stats, digest
    if cmd == "eval-wcp":
        return soft_cc_evaluate(s, n, relation, _rational(args.at)), stats, digest
    if cmd == "dichromatic":
        return directed_chromatic(_family_from_sentence(s, relation), n, args.mode, stats), \
            stats, digest
    if cmd == "oracle":
        if args.what == "wfomc":
            if s.axioms:
                return axiom_by_enumeration(s, n, single_axiom(s)), stats, digest
            return wfomc_by_enumeration(s, n), stats, digest
        base = s.without_axioms()
        if args.what == "wcp":
            return wcp_by_enumeration(base, n, relation), stats, digest
        return scp_by_enumeration(base, n, relation, args.what.split("-", 1)[1]), stats, digest
    raise UsageError(f"unknown command {cmd}")


def _plain(value):
    return value.constant_value() if isinstance(value, Poly) and value.is_constant() else value


def _result_json(value):
    if isinstance(value, Poly):
        return value.to_json_obj()
    return str(as_rational(value))


def _result_text(value) -> str:
    return str(value) if isinstance(value, Poly) else str(as_rational(value))


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        threads = _threads()
        if getattr(args, "n", None) is not None and args.n < 1:
            raise UsageError("--n must be a positive integer")
        start = time.perf_counter()
        result, stats, digest = run(args)
        elapsed = time.perf_counter() - start
    except UsageError as exc:
        print(f"liftpoly: error: {exc}", file=sys.stderr)
        return 1
    except (SentenceSyntaxError, VocabularyError) as exc:
        print(f"liftpoly: input error: {exc}", file=sys.stderr)
        return 1
    except LiftpolyError as exc:
        print(f"liftpoly: computation error: {exc}", file=sys.stderr)
        return 2
    if args.format == "json":
        report = {
            "command": ["liftpoly", *argv],
            "input_digest": digest,
            "result": _result_json(result),
            "stats": stats.as_dict(),
            "threads": threads,
            "wall_time_s": round(elapsed, 6),
        }
        print(json.dumps(report, separators=(",", ":")))
    else:
        print(_result_text(result))
    return 0


if __name__ == "__main__":
    sys.exit(main())
