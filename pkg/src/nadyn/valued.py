"""Exact rationals with p-adic valuations.

Elements are plain :class:`fractions.Fraction` values. Valuations are
``Fraction`` instances whose denominator divides 2 (so that the square root
of the uniformizer, with valuation 1/2, can be tracked) or ``math.inf``
for zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Rational = Union[int, Fraction]
Valuation = Union[Fraction, float]  # float only for math.inf

INF = math.inf

LESS, EQUAL, GREATER = -1, 0, 1


class NotPrime(ValueError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FieldContext:
    """The field Q_p, with |p| = 1/p."""

    p: int

    def __post_init__(self) -> None:
        if not isinstance(self.p, int) or not _is_prime(self.p):
            raise NotPrime(f"{self.p!r} is not a prime")


def int_valuation(n: int, p: int) -> int:
    """Multiplicity of p in the nonzero integer n."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    n = abs(n)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def valuation(x: Rational, ctx: FieldContext) -> Valuation:
    x = Fraction(x)
    if x == 0:
        return INF
    p = ctx.p
    v = 0
    if x.numerator % p == 0:
        v = int_valuation(x.numerator, p)
    elif x.denominator % p == 0:
        v = -int_valuation(x.denominator, p)
    return Fraction(v)


def norm_compare(x: Rational, y: Rational, ctx: FieldContext) -> int:
    """Compare |x| with |y|; returns LESS, EQUAL or GREATER."""
    vx, vy = valuation(x, ctx), valuation(y, ctx)
    if vx == vy:
        return EQUAL
    return LESS if vx > vy else GREATER


def unit_part(x: Rational, ctx: FieldContext) -> Fraction:
    """x / p^val(x) for nonzero x."""
    x = Fraction(x)
    v = valuation(x, ctx)
    return x / Fraction(ctx.p) ** int(v)


# --- serialization -------------------------------------------------------


def format_rational(x: Rational) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str | int) -> Fraction:
    if isinstance(text, bool):
        raise ValueError("boolean is not a rational")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"expected a rational string, got {text!r}")
    s = text.strip()
    num, sep, den = s.partition("/")
    try:
        n = int(num)
        d = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"malformed rational {text!r}") from None
    if d == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(n, d)


def format_valuation(v: Valuation) -> str:
    if v == INF:
        return "inf"
    v = Fraction(v)
    if v.denominator not in (1, 2):
        raise ValueError(f"valuation {v} is not a half-integer")
    return format_rational(v)


def parse_valuation(text: str | int) -> Valuation:
    if isinstance(text, str) and text.strip() == "inf":
        return INF
    v = parse_rational(text)
    if v.denominator not in (1, 2):
        raise ValueError(f"valuation {text!r} is not a half-integer")
    return v
