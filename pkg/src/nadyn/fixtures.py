"""Bundled worked examples and a runner that diffs them against fresh computation.

Each fixture file holds a ``payload`` describing what to compute and an
``expected`` mapping whose entries carry a value and a provenance tag.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from . import schemas
from . import zeta as zeta_mod
from .disks import disk_to_json
from .markov import analyze, system_from_json
from .realizer import realize
from .valued import FieldContext, format_rational

NAMES = ("golden", "swap", "tame", "wild")


class UnknownFixture(KeyError):
    pass


@dataclass(frozen=True)
class Diff:
    field: str
    expected: object
    actual: object

    def to_json(self) -> dict:
        return {"field": self.field, "expected": self.expected, "actual": self.actual}


def load(name: str) -> dict:
    if name not in NAMES:
        raise UnknownFixture(f"unknown fixture {name!r}; known: {', '.join(NAMES)}")
    text = resources.files("nadyn").joinpath("data", f"{name}.json").read_text(encoding="utf-8")
    obj = json.loads(text)
    schemas.validate(obj, schemas.FIXTURE)
    return obj


def _entropy_diff(field: str, want: dict, cert: zeta_mod.RootCertificate) -> Diff | None:
    ent = cert.entropy()
    if want.get("exact"):
        if ent.exact_zero and Fraction(want["value"]) == 0:
            return None
        return Diff(field, want["value"], f"{ent.decimal:.9g}")
    target = float(want["value"])
    if abs(ent.decimal - target) <= float(want["tolerance"]) and ent.lo <= target <= ent.hi + 1e-12:
        return None
    return Diff(field, want["value"], f"{ent.decimal:.12g}")


def _check(diffs: list[Diff], field: str, expected, actual) -> None:
    if expected != actual:
        diffs.append(Diff(field, expected, actual))


def _run_matrix(fx: dict, tol: Fraction) -> list[Diff]:
    pay, exp = fx["payload"], fx["expected"]
    a = zeta_mod.matrix_from_json(pay["matrix"])
    diffs: list[Diff] = []
    if "matrix" in exp:
        _check(diffs, "matrix", exp["matrix"]["value"], a)
    if "det" in exp:
        _check(diffs, "det", exp["det"]["value"], zeta_mod.poly_to_json(zeta_mod.det_I_minus_tA(a)))
    q = zeta_mod.zeta_quotient(a, pay.get("excluded", []))
    got = zeta_mod.rational_function_to_json(q.zeta)
    got.pop("text")
    _check(diffs, "zeta", exp["zeta"]["value"], got)
    if "cyclotomic" in exp:
        _check(diffs, "cyclotomic", exp["cyclotomic"]["value"], q.numerator_cyclotomic)
    d = _entropy_diff("entropy", exp["entropy"], zeta_mod.leading_root(a, tol))
    if d:
        diffs.append(d)
    return diffs


def _run_realization(fx: dict, tol: Fraction) -> list[Diff]:
    pay, exp = fx["payload"], fx["expected"]
    b = zeta_mod.matrix_from_json(pay["matrix"])
    r = realize(b, ctx=FieldContext(pay["p"]), seeds=pay.get("seeds", "lex"), M=pay.get("M"), tol=tol)
    diffs: list[Diff] = []
    sys_json = [
        {
            "domain": disk_to_json(dk),
            "alpha": format_rational(al),
            "beta": format_rational(be),
        }
        for dk, (al, be) in zip(r.arrangement.terminal_disks, r.arrangement.maps)
    ]
    _check(diffs, "pieces", exp["pieces"]["value"], sys_json)
    _check(diffs, "terms", exp["terms"]["value"], [str(t) for t in r.expr.terms])
    coeffs = [
        {"numerator": [format_rational(x) for x in t.numerator], "denominator": [format_rational(x) for x in t.denominator]}
        for t in r.expr.terms
    ]
    _check(diffs, "term_coefficients", exp["term_coefficients"]["value"], coeffs)
    _check(diffs, "verified", exp["verified"]["value"], r.report.ok)
    # The published piecewise system is analyzed on its own, not the one just built.
    rep = analyze(system_from_json(pay["system"]), tol)
    _check(diffs, "adjacency", exp["adjacency"]["value"], rep.adjacency)
    got = zeta_mod.rational_function_to_json(rep.zeta)
    got.pop("text")
    _check(diffs, "zeta", exp["zeta"]["value"], got)
    d = _entropy_diff("entropy", exp["entropy"], rep.root)
    if d:
        diffs.append(d)
    return diffs


def run(name: str, tol: Fraction = zeta_mod.DEFAULT_TOL) -> list[Diff]:
    """Recompute fixture ``name``; an empty list means every value was reproduced."""
    fx = load(name)
    kind = fx["payload"].get("kind")
    if kind == "matrix":
        return _run_matrix(fx, tol)
    if kind == "realization":
        return _run_realization(fx, tol)
    raise ValueError(f"fixture {name!r} has unknown payload kind {kind!r}")


def fixture_matrices() -> list[list[list[int]]]:
    """Every matrix appearing in the bundled fixtures."""
    return [zeta_mod.matrix_from_json(load(n)["payload"]["matrix"]) for n in NAMES]
