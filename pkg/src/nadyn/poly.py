"""Dense univariate polynomials over Q as coefficient lists, constant term first.

Everything here works on plain lists of ints or Fractions; the typed wrappers
live in :mod:`nadyn.zeta`. The zero polynomial is the empty list.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

Coeffs = list  # list[int] or list[Fraction]


def trim(a: Sequence) -> list:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def degree(a: Sequence) -> int:
    """Degree, with -1 for the zero polynomial."""
    return len(trim(a)) - 1


def add(a: Sequence, b: Sequence) -> list:
    n = max(len(a), len(b))
    return trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def neg(a: Sequence) -> list:
    return [-c for c in a]


def sub(a: Sequence, b: Sequence) -> list:
    return add(a, neg(b))


def scale(a: Sequence, c) -> list:
    return trim([c * x for x in a])


def mul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return trim(out)


def power(a: Sequence, k: int) -> list:
    out: list = [1]
    base = list(a)
    while k:
        if k & 1:
            out = mul(out, base)
        base = mul(base, base)
        k >>= 1
    return out


def divmod_poly(a: Sequence, b: Sequence) -> tuple[list, list]:
    """Quotient and remainder over Q."""
    b = trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = [Fraction(x) for x in trim(a)]
    db = len(b) - 1
    lead = Fraction(b[-1])
    if len(r) - 1 < db:
        return [], r
    q = [Fraction(0)] * (len(r) - db)
    for k in range(len(r) - 1 - db, -1, -1):
        c = r[k + db] / lead
        q[k] = c
        if c:
            for j in range(db + 1):
                r[k + j] -= c * b[j]
    return trim(q), trim(r[:db])


def exact_div(a: Sequence, b: Sequence) -> list:
    q, r = divmod_poly(a, b)
    if r:
        raise ArithmeticError("polynomial division is not exact")
    return q


def divides(b: Sequence, a: Sequence) -> bool:
    return not divmod_poly(a, b)[1]


def monic(a: Sequence) -> list:
    a = trim(a)
    lead = Fraction(a[-1])
    return [Fraction(x) / lead for x in a]


def gcd(a: Sequence, b: Sequence) -> list:
    """Monic gcd over Q (the zero polynomial when both inputs are zero)."""
    a, b = trim(a), trim(b)
    while b:
        a, b = b, divmod_poly(a, b)[1]
    return monic(a) if a else []


def derivative(a: Sequence) -> list:
    return trim([i * a[i] for i in range(1, len(a))])


def evaluate(a: Sequence, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def reverse(a: Sequence) -> list:
    """x^deg(a) * a(1/x)."""
    return trim(list(reversed(trim(a))))


def content(a: Sequence) -> Fraction:
    """Positive rational c with a / c primitive in Z[t]."""
    a = [Fraction(x) for x in trim(a)]
    if not a:
        return Fraction(0)
    den = math.lcm(*(x.denominator for x in a))
    num = math.gcd(*(int(x * den) for x in a))
    return Fraction(num, den)


def to_int(a: Sequence) -> list[int]:
    out = []
    for x in a:
        x = Fraction(x)
        if x.denominator != 1:
            raise ValueError(f"coefficient {x} is not an integer")
        out.append(x.numerator)
    return trim(out)


def primitive(a: Sequence) -> list[int]:
    a = trim(a)
    if not a:
        return []
    return to_int([Fraction(x) / content(a) for x in a])


def cyclotomic_product(lengths: Sequence[int]) -> list[int]:
    """prod (1 - t^l) over the given lengths."""
    out = [1]
    for ell in lengths:
        if ell < 1:
            raise ValueError(f"cycle length must be positive, got {ell}")
        out = mul(out, [1] + [0] * (ell - 1) + [-1])
    return out


def to_string(a: Sequence, var: str = "t") -> str:
    """Human form, ascending powers: [1, -1, -1] -> '1-t-t^2'."""
    a = trim(a)
    if not a:
        return "0"
    parts = []
    for k, c in enumerate(a):
        if c == 0:
            continue
        c = Fraction(c)
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if not mono:
            body = _fmt(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{_fmt(mag)}{mono}" if mag.denominator == 1 else f"({_fmt(mag)}){mono}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += sign + body
    return out


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# --- power series --------------------------------------------------------


def series_inverse(a: Sequence, order: int) -> list[Fraction]:
    """Coefficients of 1/a(t) up to t^order; needs a(0) != 0."""
    a = [Fraction(x) for x in a]
    if not a or a[0] == 0:
        raise ZeroDivisionError("series inverse needs a nonzero constant term")
    out = [1 / a[0]]
    for n in range(1, order + 1):
        s = sum((a[k] * out[n - k] for k in range(1, min(n, len(a) - 1) + 1)), Fraction(0))
        out.append(-s / a[0])
    return out


def series_exp(h: Sequence, order: int) -> list[Fraction]:
    """exp(h(t)) up to t^order for h(0) = 0, via n*g_n = sum k*h_k*g_{n-k}."""
    h = [Fraction(x) for x in h] + [Fraction(0)] * (order + 1)
    if h[0] != 0:
        raise ValueError("series exponential needs h(0) = 0")
    g = [Fraction(1)]
    for n in range(1, order + 1):
        g.append(sum((k * h[k] * g[n - k] for k in range(1, n + 1)), Fraction(0)) / n)
    return g


# --- real roots ----------------------------------------------------------


def squarefree(a: Sequence) -> list:
    a = trim(a)
    g = gcd(a, derivative(a))
    if len(g) <= 1:
        return [Fraction(x) for x in a]
    return exact_div(a, g)


def sturm_chain(a: Sequence) -> list[list]:
    chain = [[Fraction(x) for x in trim(a)], derivative([Fraction(x) for x in trim(a)])]
    while chain[-1]:
        r = divmod_poly(chain[-2], chain[-1])[1]
        if not r:
            break
        # Positive rescaling keeps signs and tames coefficient growth.
        c = content(r)
        chain.append([-x / c for x in r])
    return [c for c in chain if c]


def sign_changes(chain: Sequence[Sequence], x) -> int:
    signs = [s for s in (_sign(evaluate(c, x)) for c in chain) if s]
    return sum(1 for u, v in zip(signs, signs[1:]) if u != v)


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def root_bound(a: Sequence) -> Fraction:
    """Cauchy bound: every complex root has modulus below this."""
    a = trim(a)
    lead = abs(Fraction(a[-1]))
    return 1 + max((abs(Fraction(c)) / lead for c in a[:-1]), default=Fraction(0))


def divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]
