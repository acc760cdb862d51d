"""Command line entry point ``nadyn``.

JSON goes to stdout and diagnostics to stderr. Every ``--matrix``, ``--system``
or ``--bundle`` argument accepts a file path, ``-`` for stdin, or inline JSON.

Exit codes: 0 success, 1 example mismatch, 2 malformed input, 3 refinement cap
exceeded, 4 matrix not primitive, 5 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import fixtures, schemas
from . import zeta as zeta_mod
from .markov import CapExceeded, InvalidSystem, analyze, report_to_json, system_from_json
from .realizer import (
    Certificate,
    NotAdmissible,
    NotPrimitive,
    OddM,
    VerificationReport,
    arrangement_from_json,
    check_admissible,
    expr_to_json,
    glue,
    realization_to_json,
    realize,
    verify_realization,
)
from .realizer import report_to_json as verification_to_json
from .valued import FieldContext, NotPrime

EXIT_OK = 0
EXIT_DIFF = 1
EXIT_INPUT = 2
EXIT_CAP = 3
EXIT_NOT_PRIMITIVE = 4
EXIT_VERIFY = 5


class InputError(ValueError):
    pass


def read_json(arg: str, stdin=None):
    """Parse ``arg`` as '-', inline JSON, or a path to a JSON file."""
    try:
        if arg == "-":
            return json.load(stdin or sys.stdin)
        if arg.lstrip().startswith(("{", "[")):
            return json.loads(arg)
        with open(arg, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {arg!r}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON in {arg!r}: {exc}") from None


def _lengths(text: str | None) -> list[int]:
    if not text:
        return []
    try:
        out = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"--excluded expects comma separated integers, got {text!r}") from None
    if any(x < 1 for x in out):
        raise InputError("cycle lengths must be positive")
    return out


def _emit(obj, schema: dict, out) -> None:
    schemas.validate(obj, schema)
    out.write(json.dumps(obj, indent=2) + "\n")


def _tol() -> Fraction:
    try:
        return zeta_mod.tolerance_from_env()
    except ValueError as exc:
        raise InputError(str(exc)) from None


# --- commands ------------------------------------------------------------


def cmd_zeta(args, out) -> int:
    a = zeta_mod.matrix_from_json(read_json(args.matrix))
    excluded = _lengths(args.excluded)
    q = zeta_mod.zeta_quotient(a, excluded)
    if args.human:
        out.write(str(q.zeta) + "\n")
        return EXIT_OK
    _emit(
        {
            "zeta": zeta_mod.rational_function_to_json(q.zeta),
            "det": zeta_mod.poly_to_json(zeta_mod.det_I_minus_tA(a)),
            "excluded": excluded,
            "numerator_cyclotomic": q.numerator_cyclotomic,
            "text": str(q.zeta),
        },
        schemas.ZETA_OUTPUT,
        out,
    )
    return EXIT_OK


def cmd_entropy(args, out) -> int:
    tol = _tol()
    if args.matrix is not None:
        cert = zeta_mod.leading_root(zeta_mod.matrix_from_json(read_json(args.matrix)), tol)
    else:
        cert = analyze(system_from_json(read_json(args.system)), tol).root
    _emit(zeta_mod.entropy_to_json(cert), schemas.ENTROPY, out)
    return EXIT_OK


def cmd_realize(args, out) -> int:
    b = zeta_mod.matrix_from_json(read_json(args.matrix))
    r = realize(b, n0=args.n0, j0=args.j0, ctx=FieldContext(args.p), seeds=args.seeds, M=args.M, tol=_tol())
    for w in r.warnings:
        print(f"warning: {w}", file=sys.stderr)
    bundle = realization_to_json(r)
    if args.out:
        schemas.validate(bundle, schemas.BUNDLE)
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(bundle, fh, indent=2)
    else:
        _emit(bundle, schemas.BUNDLE, out)
    if not r.report.ok:
        for c in r.report.failed():
            print(f"failed: {c.family}/{c.name} index={c.index} margin={c.margin}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def cmd_analyze(args, out) -> int:
    rep = analyze(system_from_json(read_json(args.system)), _tol(), cap_splits=args.cap_splits, cap_m=args.cap_m)
    for w in rep.warnings:
        print(f"warning: {w}", file=sys.stderr)
    _emit(report_to_json(rep), schemas.ANALYSIS_REPORT, out)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    bundle = read_json(args.bundle)
    try:
        schemas.validate(bundle, schemas.BUNDLE)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    a = zeta_mod.matrix_from_json(bundle["matrix"])
    try:
        arr = arrangement_from_json(bundle["arrangement"], a)
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed arrangement: {exc}") from None
    M = bundle["M"]
    expr = glue(arr, M)
    report = verify_realization(arr, M, a, expr)
    # The stored map must be the one the arrangement and M determine.
    same = expr_to_json(expr) == bundle["map"]
    report = VerificationReport(
        report.certificates + (Certificate("bundle_map", None, None, same, "expression"),),
        report.adjacency,
        report.M,
    )
    _emit(verification_to_json(report), schemas.VERIFICATION, out)
    for c in report.failed():
        print(f"failed: {c.family}/{c.name} index={c.index} margin={c.margin}", file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_VERIFY


def cmd_augment(args, out) -> int:
    a = zeta_mod.matrix_from_json(read_json(args.matrix))
    _emit(zeta_mod.matrix_to_json(zeta_mod.augment(a, args.n)), schemas.MATRIX, out)
    return EXIT_OK


def cmd_admissible(args, out) -> int:
    rep = check_admissible(zeta_mod.matrix_from_json(read_json(args.matrix)))
    obj = {
        "ok": rep.ok,
        "nonzero_ok": rep.nonzero_ok,
        "constant_ok": rep.constant_ok,
        "containing_ok": rep.containing_ok,
        "markov_ok": rep.markov_ok,
        "irreducible_ok": rep.irreducible_ok,
        "zero_one": rep.zero_one,
        "witnesses": rep.witnesses,
    }
    _emit(obj, schemas.ADMISSIBILITY, out)
    return EXIT_OK


def cmd_examples(args, out) -> int:
    diffs = fixtures.run(args.name, _tol())
    out.write(json.dumps({"name": args.name, "ok": not diffs, "diff": [d.to_json() for d in diffs]}, indent=2) + "\n")
    return EXIT_OK if not diffs else EXIT_DIFF


# --- parser --------------------------------------------------------------


def _even(text: str) -> int:
    v = int(text)
    if v < 2 or v % 2:
        raise argparse.ArgumentTypeError(f"M must be a positive even integer, got {text}")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nadyn", description="Zeta functions, entropy and rational map realizations over Q_p.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("zeta", help="reduced zeta function of a matrix")
    p.add_argument("--matrix", required=True)
    p.add_argument("--excluded", help="comma separated lengths of excluded cycles")
    p.add_argument("--human", action="store_true", help="print only the human readable form")
    p.set_defaults(func=cmd_zeta)

    p = sub.add_parser("entropy", help="certified entropy of a matrix or piecewise system")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--matrix")
    g.add_argument("--system")
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("realize", help="build and verify a rational map from a matrix")
    p.add_argument("--matrix", required=True)
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--n0", type=_positive, default=1)
    p.add_argument("--j0", type=_positive, default=1)
    p.add_argument("--seeds", choices=("paper", "lex"), default="lex")
    p.add_argument("--M", type=_even)
    p.add_argument("--out", help="write the bundle here instead of stdout")
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("analyze", help="Markov refinement, zeta and entropy of a piecewise system")
    p.add_argument("--system", required=True)
    p.add_argument("--cap-splits", type=_positive, default=10_000)
    p.add_argument("--cap-m", type=_positive, default=64)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify", help="re-check a realization bundle")
    p.add_argument("--bundle", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("augment", help="subdivide every edge into a path")
    p.add_argument("--matrix", required=True)
    p.add_argument("--n", type=_positive, required=True)
    p.set_defaults(func=cmd_augment)

    p = sub.add_parser("admissible", help="report the admissibility properties of a matrix")
    p.add_argument("--matrix", required=True)
    p.set_defaults(func=cmd_admissible)

    p = sub.add_parser("examples", help="run a bundled example and diff it against stored values")
    p.add_argument("--name", required=True, choices=fixtures.NAMES)
    p.set_defaults(func=cmd_examples)
    return ap


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except NotPrimitive as exc:
        print(f"error: not primitive: {exc}", file=sys.stderr)
        return EXIT_NOT_PRIMITIVE
    except (InputError, InvalidSystem, NotAdmissible, NotPrime, OddM, zeta_mod.MalformedMatrix) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, KeyError, TypeError) as exc:
        print(f"error: malformed input: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
