"""Command-line front end.

Reports go to stdout as JSON, diagnostics to stderr.  Exit codes: 0 success
(including "none" verdicts), 2 invalid input, 3 internal verification failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .analysis import VerificationFailure, analyze
from .core import Witness, search_bounded, search_full, witness_failure
from .enumeration import enumerate3
from .errors import ConstructionDegenerate, RDError
from .gf import from_hex, get_field
from .linalg import (
    branch_number_differential,
    branch_number_linear,
    cauchy,
    cauchy_type2,
    circulant,
    hadamard,
    left_circulant,
    matrix_from_json,
    matrix_to_json,
)
from .rd3 import decompose

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_VERIFY = 3


class InputError(Exception):
    pass


def _hex(s: str) -> int:
    try:
        return from_hex(s)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a hex element: {s!r}") from exc


def _load_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise InputError(f"{path}: expected a JSON object")
    return data


def _check_overrides(field, args) -> None:
    if args.m is not None and args.m != field.m:
        raise InputError(f"--m {args.m} contradicts the file's m = {field.m}")
    if args.modulus is not None and args.modulus != field.modulus:
        raise InputError(f"--modulus {args.modulus:#x} contradicts the file's modulus {field.modulus:#x}")


def _load_matrix(path: str, args):
    d = _load_json(path)
    if "m" not in d and args.m is not None:
        d["m"] = args.m
        if args.modulus is not None:
            d["modulus"] = hex(args.modulus)
    M = matrix_from_json(d)
    _check_overrides(M.field, args)
    return M


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def cmd_analyze(args) -> int:
    M = _load_matrix(args.file, args)
    report = analyze(M, cross_check=args.cross_check)
    _emit(report.to_json(M.field, timings=args.timings))
    return EXIT_OK


def cmd_search(args) -> int:
    M = _load_matrix(args.file, args)
    w = search_full(M) if args.full else search_bounded(M)
    if w is None:
        sys.stdout.write("none\n")
    else:
        _emit(w.to_json(M.field))
    return EXIT_OK


def cmd_construct(args) -> int:
    field = get_field(args.m, args.modulus)
    kind = args.kind
    if kind in ("circulant", "left-circulant"):
        if not args.row:
            raise InputError(f"{kind} needs --row")
        M = (circulant if kind == "circulant" else left_circulant)(field, args.row)
    elif kind == "cauchy":
        if not args.xs or not args.ys:
            raise InputError("cauchy needs --xs and --ys")
        M = cauchy(field, args.xs, args.ys)
    elif kind == "cauchy2":
        if not args.xs or args.l is None:
            raise InputError("cauchy2 needs --xs and --l")
        M = cauchy_type2(field, args.xs, args.l)
    else:
        if not args.seed:
            raise InputError("hadamard needs --seed")
        M = hadamard(field, args.seed)
    for a in (a for r in M.rows for a in r):
        if not field.contains(a):
            raise InputError(f"{a:#x} is not an element of {field}")
    text = json.dumps(matrix_to_json(M), indent=2) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_decompose(args) -> int:
    M = _load_matrix(args.file, args)
    _emit(decompose(M).to_json())
    return EXIT_OK


def cmd_witness_check(args) -> int:
    M = _load_matrix(args.matrix, args)
    field, w = Witness.from_json(_load_json(args.witness))
    if field != M.field:
        raise InputError(f"witness field {field} differs from matrix field {M.field}")
    reason = witness_failure(M, w)
    _emit({"valid": reason is None, "reason": reason})
    return EXIT_OK


def cmd_enumerate3(args) -> int:
    field = get_field(args.m, args.modulus)
    res = enumerate3(field, jobs=args.jobs)
    if args.emit == "csv":
        sys.stdout.write(res.to_csv())
    else:
        _emit(res.to_json(timings=args.timings))
    return EXIT_OK


def cmd_branch(args) -> int:
    M = _load_matrix(args.file, args)
    _emit({"branch_diff": branch_number_differential(M), "branch_lin": branch_number_linear(M)})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rdiff", description="Related-differential analysis of linear layers over GF(2^m).")
    p.add_argument("-v", "--verbose", action="store_true", help="log fallback decisions to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def field_opts(sp, required=False):
        sp.add_argument("--m", type=int, required=required)
        sp.add_argument("--modulus", type=_hex)

    sp = sub.add_parser("analyze", help="full report for a matrix file")
    sp.add_argument("file")
    sp.add_argument("--cross-check", action="store_true", help="confirm the verdict with the full search")
    sp.add_argument("--timings", action="store_true")
    field_opts(sp)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("search", help="search for a related-differential witness")
    sp.add_argument("file")
    mode = sp.add_mutually_exclusive_group()
    mode.add_argument("--full", action="store_true")
    mode.add_argument("--bounded", action="store_true", help="weight-bounded search (MDS only; default)")
    field_opts(sp)
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("construct", help="write a structured matrix file")
    sp.add_argument("kind", choices=["circulant", "left-circulant", "cauchy", "cauchy2", "hadamard"])
    field_opts(sp, required=True)
    sp.add_argument("--row", nargs="+", type=_hex)
    sp.add_argument("--xs", nargs="+", type=_hex)
    sp.add_argument("--ys", nargs="+", type=_hex)
    sp.add_argument("--l", type=_hex)
    sp.add_argument("--seed", nargs="+", type=_hex)
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("decompose", help="D1 * M1 * D2 decomposition")
    sp.add_argument("file")
    field_opts(sp)
    sp.set_defaults(func=cmd_decompose)

    sp = sub.add_parser("witness-check", help="verify a witness file against a matrix file")
    sp.add_argument("matrix")
    sp.add_argument("witness")
    field_opts(sp)
    sp.set_defaults(func=cmd_witness_check)

    sp = sub.add_parser("enumerate3", help="count 3x3 MDS matrices with and without related differentials")
    field_opts(sp, required=True)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--emit", choices=["json", "csv"], default="json")
    sp.add_argument("--timings", action="store_true")
    sp.set_defaults(func=cmd_enumerate3)

    sp = sub.add_parser("branch", help="differential and linear branch numbers")
    sp.add_argument("file")
    field_opts(sp)
    sp.set_defaults(func=cmd_branch)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (VerificationFailure, ConstructionDegenerate, AssertionError) as exc:
        print(f"rdiff: verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (InputError, RDError) as exc:
        print(f"rdiff: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())
