"""Ultrametric disks in Q_p and their lattice operations.

A disk is stored as ``(center, radius_exp, kind)`` with radius ``p**-radius_exp``.
Open disks with an integer exponent are normalized to the closed disk one
level deeper. ``==`` compares descriptions; ``same_disk`` and ``Disk.key``
compare point sets, which needs the prime.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .valued import (
    INF,
    FieldContext,
    Rational,
    Valuation,
    format_rational,
    format_valuation,
    parse_rational,
    parse_valuation,
    valuation,
)

CLOSED, OPEN, POINT = "closed", "open", "point"


class BadGeometry(ValueError):
    pass


class ZeroScale(ValueError):
    pass


class Relation(enum.Enum):
    DISJOINT = "disjoint"
    EQUAL = "equal"
    INNER = "inner"  # first disk strictly inside the second
    OUTER = "outer"  # first disk strictly contains the second


@dataclass(frozen=True, eq=False)
class Disk:
    center: Fraction
    radius_exp: Valuation
    kind: str = CLOSED

    def __post_init__(self) -> None:
        c = Fraction(self.center)
        r = self.radius_exp if self.radius_exp == INF else Fraction(self.radius_exp)
        kind = self.kind
        if kind not in (CLOSED, OPEN, POINT):
            raise BadGeometry(f"unknown disk kind {kind!r}")
        if r != INF and r.denominator not in (1, 2):
            raise BadGeometry(f"radius exponent {r} is not a half-integer")
        if kind == POINT or r == INF:
            kind, r = POINT, INF
        elif kind == OPEN and r.denominator == 1:
            kind, r = CLOSED, r + 1
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "radius_exp", r)
        object.__setattr__(self, "kind", kind)

    @classmethod
    def closed(cls, center: Rational, radius_exp: int | Fraction) -> "Disk":
        return cls(Fraction(center), Fraction(radius_exp), CLOSED)

    @classmethod
    def point(cls, center: Rational) -> "Disk":
        return cls(Fraction(center), INF, POINT)

    @property
    def is_integral(self) -> bool:
        """True when the disk can take part in exact geometry."""
        return self.kind == POINT or (self.kind == CLOSED and self.radius_exp.denominator == 1)

    def key(self, ctx: FieldContext) -> tuple:
        """Canonical description: equal keys iff equal point sets."""
        _require_integral(self)
        if self.kind == POINT:
            return (POINT, self.center)
        return (CLOSED, int(self.radius_exp), canonical_center(self.center, int(self.radius_exp), ctx))

    def __repr__(self) -> str:
        if self.kind == POINT:
            return f"Disk.point({format_rational(self.center)})"
        return f"D({format_rational(self.center)}, {format_valuation(self.radius_exp)})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Disk):
            return NotImplemented
        return (self.center, self.radius_exp, self.kind) == (other.center, other.radius_exp, other.kind)

    def __hash__(self) -> int:
        return hash((self.center, self.radius_exp, self.kind))


def canonical_center(c: Fraction, r: int, ctx: FieldContext) -> Fraction:
    """Least non-negative representative of c modulo the closed disk of exponent r."""
    p = ctx.p
    if valuation(c, ctx) >= r:
        return Fraction(0)
    den = c.denominator
    s = 0
    while den % p == 0:
        den //= p
        s += 1
    mod = p ** (r + s)
    m = (c.numerator * pow(den, -1, mod)) % mod
    return Fraction(m, p**s)


def _require_integral(*disks: Disk) -> None:
    for d in disks:
        if not d.is_integral:
            raise BadGeometry(f"{d!r} has a non-integral radius exponent")


def contains_point(d: Disk, z: Rational, ctx: FieldContext) -> bool:
    _require_integral(d)
    return valuation(Fraction(z) - d.center, ctx) >= d.radius_exp


def relation(d1: Disk, d2: Disk, ctx: FieldContext) -> Relation:
    _require_integral(d1, d2)
    r1, r2 = d1.radius_exp, d2.radius_exp
    if valuation(d1.center - d2.center, ctx) < min(r1, r2):
        return Relation.DISJOINT
    if r1 == r2:
        return Relation.EQUAL
    return Relation.INNER if r1 > r2 else Relation.OUTER


def same_disk(d1: Disk, d2: Disk, ctx: FieldContext) -> bool:
    return relation(d1, d2, ctx) is Relation.EQUAL


def contains(outer: Disk, inner: Disk, ctx: FieldContext) -> bool:
    """outer ⊇ inner."""
    return relation(outer, inner, ctx) in (Relation.EQUAL, Relation.OUTER)


def strictly_contains(outer: Disk, inner: Disk, ctx: FieldContext) -> bool:
    return relation(outer, inner, ctx) is Relation.OUTER


def disjoint(d1: Disk, d2: Disk, ctx: FieldContext) -> bool:
    return relation(d1, d2, ctx) is Relation.DISJOINT


def affine_image(d: Disk, alpha: Rational, beta: Rational, ctx: FieldContext) -> Disk:
    alpha, beta = Fraction(alpha), Fraction(beta)
    if alpha == 0:
        raise ZeroScale("affine map with zero scale factor")
    if d.kind == POINT:
        return Disk.point(alpha * d.center + beta)
    return Disk(alpha * d.center + beta, d.radius_exp + valuation(alpha, ctx), d.kind)


def affine_preimage(d: Disk, alpha: Rational, beta: Rational, ctx: FieldContext) -> Disk:
    """The disk {z : alpha*z + beta in d}."""
    alpha, beta = Fraction(alpha), Fraction(beta)
    if alpha == 0:
        raise ZeroScale("affine map with zero scale factor")
    return affine_image(d, 1 / alpha, -beta / alpha, ctx)


def enclosing_gap_disk(v: Disk, c0: Rational, u: Disk, ctx: FieldContext) -> Disk:
    """Largest disk containing v, inside u and avoiding the point c0."""
    _require_integral(v, u)
    c0 = Fraction(c0)
    if not contains(u, v, ctx) or not contains_point(u, c0, ctx):
        raise BadGeometry("gap disk requires v and c0 inside u")
    if contains_point(v, c0, ctx):
        raise BadGeometry(f"{v!r} contains the excluded point {c0}")
    gap = Disk.closed(v.center, valuation(v.center - c0, ctx) + 1)
    if not contains(u, gap, ctx):
        raise BadGeometry("gap disk escapes the ambient disk")
    return gap


def sibling_disks(inner: Disk, outer: Disk, ctx: FieldContext) -> list[Disk]:
    """Maximal disks of outer minus inner, for inner strictly inside outer."""
    if not strictly_contains(outer, inner, ctx) or inner.kind == POINT:
        raise BadGeometry("sibling disks need a closed disk strictly inside another")
    p = ctx.p
    c = inner.center
    out = []
    for k in range(int(outer.radius_exp) + 1, int(inner.radius_exp) + 1):
        step = Fraction(p) ** (k - 1)
        out.extend(Disk.closed(c + digit * step, k) for digit in range(1, p))
    return out


def dedupe(disks: Iterable[Disk], ctx: FieldContext) -> list[Disk]:
    seen: set[tuple] = set()
    out = []
    for d in disks:
        k = d.key(ctx)
        if k not in seen:
            seen.add(k)
            out.append(d)
    return out


def split(u: Disk, u0: Disk, marked: Sequence[Disk], ctx: FieldContext) -> list[Disk]:
    """Split u via u0, keeping the maximal gap disks that meet the marked disks.

    A marked disk strictly containing u0 contributes every maximal disk of
    its complement of u0, so the output always covers the marked set.
    """
    _require_integral(u, u0, *marked)
    if not strictly_contains(u, u0, ctx):
        raise BadGeometry(f"{u0!r} is not strictly inside {u!r}")
    out = [u0]
    for m in marked:
        if not contains(u, m, ctx):
            raise BadGeometry(f"marked disk {m!r} is not inside {u!r}")
        rel = relation(m, u0, ctx)
        if rel is Relation.DISJOINT:
            out.append(enclosing_gap_disk(m, u0.center, u, ctx))
        elif rel is Relation.OUTER:
            out.extend(sibling_disks(u0, m, ctx))
    return dedupe(out, ctx)


# --- serialization -------------------------------------------------------


def disk_to_json(d: Disk) -> dict:
    return {
        "center": format_rational(d.center),
        "radius_exp": format_valuation(d.radius_exp),
        "kind": d.kind,
    }


def disk_from_json(obj: dict) -> Disk:
    if not isinstance(obj, dict):
        raise ValueError(f"disk must be an object, got {obj!r}")
    try:
        center = parse_rational(obj["center"])
        radius = parse_valuation(obj.get("radius_exp", "inf"))
    except KeyError as exc:
        raise ValueError(f"disk is missing field {exc}") from None
    kind = obj.get("kind", CLOSED)
    if kind not in (CLOSED, OPEN, POINT):
        raise ValueError(f"unknown disk kind {kind!r}")
    return Disk(center, radius, kind)
