"""Zeta functions of subshifts, leading roots and graph augmentation.

Matrices are square lists of lists of non-negative Python ints. Polynomials
in ``t`` are stored constant term first.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from . import poly
from .valued import format_rational, parse_rational

Matrix = list  # list[list[int]]

DEFAULT_TOL = Fraction(1, 10**12)


class NotSimpleAtN1(ValueError):
    pass


class NoRealRoot(ValueError):
    pass


class MalformedMatrix(ValueError):
    pass


@dataclass(frozen=True)
class IntPolynomial:
    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Sequence[int] = ()):
        object.__setattr__(self, "coeffs", tuple(poly.to_int(coeffs)))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        return poly.evaluate(self.coeffs, x)

    def __str__(self) -> str:
        return poly.to_string(self.coeffs)


@dataclass(frozen=True)
class RationalFunctionZ:
    numerator: IntPolynomial
    denominator: IntPolynomial

    @classmethod
    def reduced(cls, num: Sequence, den: Sequence) -> "RationalFunctionZ":
        """Cancel the gcd over Q and normalize so that denominator(0) = 1."""
        num, den = poly.trim(num), poly.trim(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        g = poly.gcd(num, den) if num else poly.monic(den)
        num, den = poly.exact_div(num, g), poly.exact_div(den, g)
        lead = den[0] if den[0] != 0 else next(c for c in den if c != 0)
        num = [Fraction(c) / lead for c in num]
        den = [Fraction(c) / lead for c in den]
        clear = math.lcm(*(Fraction(c).denominator for c in num + den))
        return cls(IntPolynomial([c * clear for c in num]), IntPolynomial([c * clear for c in den]))

    def __str__(self) -> str:
        num = poly.to_string(self.numerator.coeffs)
        den = self.denominator.coeffs
        if len(self.numerator.coeffs) > 1:
            num = f"({num})"
        if den == (1,):
            return num
        den_s = poly.to_string(den)
        if sum(1 for c in den if c) > 1:
            den_s = f"({den_s})"
        return f"{num}/{den_s}"


@dataclass(frozen=True)
class RootCertificate:
    """Largest real root of ``polynomial`` (in x, constant term first) lies in [lo, hi]."""

    polynomial: IntPolynomial
    lo: Fraction
    hi: Fraction
    exact: Fraction | None = None

    @property
    def bracket(self) -> tuple[Fraction, Fraction]:
        return (self.lo, self.hi)

    @property
    def decimal(self) -> float:
        return float((self.lo + self.hi) / 2)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def entropy(self) -> "EntropyValue":
        """Natural log of the root, or 0 when the root is below 1."""
        if self.hi < 1 or (self.exact is not None and self.exact <= 1):
            return EntropyValue(0.0, 0.0, 0.0, exact_zero=True)
        lo = math.log(self.lo) if self.lo >= 1 else 0.0
        return EntropyValue(math.log(self.decimal), lo, math.log(self.hi))


@dataclass(frozen=True)
class EntropyValue:
    decimal: float
    lo: float
    hi: float
    exact_zero: bool = False


# --- matrices ------------------------------------------------------------


def check_matrix(a: Sequence[Sequence[int]]) -> Matrix:
    """Validate a square non-negative integer matrix and return a copy."""
    rows = [list(r) for r in a]
    n = len(rows)
    for r in rows:
        if len(r) != n:
            raise MalformedMatrix("matrix is not square")
        for x in r:
            if isinstance(x, bool) or not isinstance(x, int) or x < 0:
                raise MalformedMatrix(f"entry {x!r} is not a non-negative integer")
    return rows


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    bt = list(zip(*b)) if b else []
    return [[sum(x * y for x, y in zip(a[i], bt[j])) for j in range(n)] for i in range(n)]


def matpow(a: Matrix, k: int) -> Matrix:
    out = identity(len(a))
    base = a
    while k:
        if k & 1:
            out = matmul(out, base)
        base = matmul(base, base)
        k >>= 1
    return out


def charpoly(a: Matrix) -> list[int]:
    """Coefficients of det(xI - A), leading coefficient first.

    Division-free Berkowitz recursion over the leading principal blocks,
    using sparse rows for the block products.
    """
    n = len(a)
    if n == 0:
        return [1]
    nz = [[(j, x) for j, x in enumerate(row) if x] for row in a]
    v = [1, -a[0][0]]
    for r in range(1, n):
        w = [a[i][r] for i in range(r)]
        col = [1, -a[r][r]]
        row_r = [(j, x) for j, x in nz[r] if j < r]
        for k in range(r):
            col.append(-sum(x * w[j] for j, x in row_r))
            if k < r - 1:
                w = [sum(x * w[j] for j, x in nz[i] if j < r) for i in range(r)]
        v = [sum(col[i - j] * v[j] for j in range(max(0, i - r - 1), min(i, r) + 1)) for i in range(r + 2)]
    return v


def det_I_minus_tA(a: Sequence[Sequence[int]]) -> IntPolynomial:
    # det(I - tA) = t^n det(t^-1 I - A): the coefficient lists coincide.
    return IntPolynomial(charpoly(check_matrix(a)))


def zeta_sft(a: Sequence[Sequence[int]]) -> RationalFunctionZ:
    return RationalFunctionZ.reduced([1], det_I_minus_tA(a).coeffs)


@dataclass(frozen=True)
class QuotientZeta:
    zeta: RationalFunctionZ
    numerator_cyclotomic: bool


def zeta_quotient(b: Sequence[Sequence[int]], excluded_lengths: Sequence[int] = ()) -> QuotientZeta:
    """prod(1 - t^l) / det(I - tB), reduced, with a cyclotomic certificate."""
    top = poly.cyclotomic_product(list(excluded_lengths))
    z = RationalFunctionZ.reduced(top, det_I_minus_tA(b).coeffs)
    cyclotomic = bool(z.numerator.coeffs) and poly.divides(z.numerator.coeffs, top)
    return QuotientZeta(z, cyclotomic)


def trace_powers(a: Sequence[Sequence[int]], n_max: int) -> list[int]:
    a = check_matrix(a)
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    out, p = [], identity(len(a))
    for _ in range(n_max):
        p = matmul(p, a)
        out.append(sum(p[i][i] for i in range(len(a))))
    return out


def series_consistency(a: Sequence[Sequence[int]], order: int) -> bool:
    """Compare 1/det(I - tA) with exp(sum tr(A^m) t^m / m) through t^order."""
    if order < 1:
        raise ValueError("order must be at least 1")
    lhs = poly.series_inverse(det_I_minus_tA(a).coeffs, order)
    traces = trace_powers(a, order)
    log_series = [Fraction(0)] + [Fraction(tr, m) for m, tr in enumerate(traces, start=1)]
    return lhs == poly.series_exp(log_series, order)


def augment(a0: Sequence[Sequence[int]], n: int) -> Matrix:
    """Subdivide every edge of the multigraph of a0 into a path of n edges.

    Original vertices keep their indices; new vertices follow, edge by edge
    in row-major order, n - 1 per edge.
    """
    a0 = check_matrix(a0)
    if n < 1:
        raise ValueError("n must be at least 1")
    if n == 1:
        if any(x > 1 for row in a0 for x in row):
            raise NotSimpleAtN1("n = 1 keeps parallel edges; matrix must be 0/1")
        return [row[:] for row in a0]
    size0 = len(a0)
    edges = [(i, j) for i in range(size0) for j in range(size0) for _ in range(a0[i][j])]
    size = size0 + (n - 1) * len(edges)
    out = [[0] * size for _ in range(size)]
    nxt = size0
    for i, j in edges:
        path = [i] + list(range(nxt, nxt + n - 1)) + [j]
        nxt += n - 1
        for u, v in zip(path, path[1:]):
            out[u][v] = 1
    return out


def tolerance_from_env(default: Fraction = DEFAULT_TOL) -> Fraction:
    raw = os.environ.get("NADYN_TOL")
    if not raw:
        return default
    try:
        tol = Fraction(raw)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"NADYN_TOL={raw!r} is not a number") from None
    if tol <= 0:
        raise ValueError("NADYN_TOL must be positive")
    return tol


def leading_root(
    source: Union[IntPolynomial, Sequence[Sequence[int]]],
    tol: Fraction = DEFAULT_TOL,
) -> RootCertificate:
    """Certify the largest real root of det(xI - A).

    ``source`` is a matrix or the polynomial det(I - tA); in the latter case
    the root is taken of its reversal. Rational roots are returned exactly.
    """
    if isinstance(source, IntPolynomial):
        base = source.coeffs
    else:
        base = det_I_minus_tA(source).coeffs
    if not base:
        raise NoRealRoot("zero polynomial")
    q = IntPolynomial(poly.reverse(base))
    if q.degree <= 0:
        # no nonzero eigenvalues: nilpotent case
        return RootCertificate(q, Fraction(0), Fraction(0), Fraction(0))
    tol = Fraction(tol)
    s = poly.squarefree(q.coeffs)
    chain = poly.sturm_chain(s)
    bound = poly.root_bound(s)
    lo, hi = -bound, bound
    v_hi = poly.sign_changes(chain, hi)
    if poly.sign_changes(chain, lo) - v_hi == 0:
        raise NoRealRoot(f"{poly.to_string(q.coeffs, 'x')} has no real root")
    rational_checked = False
    while hi - lo > tol:
        if not rational_checked and hi - lo < 1:
            rational_checked = True
            r = _rational_root_in(s, lo, hi, chain, v_hi)
            if r is not None:
                return RootCertificate(q, r, r, r)
        mid = (lo + hi) / 2
        v_mid = poly.sign_changes(chain, mid)
        if v_mid - v_hi >= 1:
            lo = mid
        else:
            hi, v_hi = mid, v_mid
    if not rational_checked:
        r = _rational_root_in(s, lo, hi, chain, v_hi)
        if r is not None:
            return RootCertificate(q, r, r, r)
    return RootCertificate(q, lo, hi)


def _rational_root_in(s, lo, hi, chain, v_hi) -> Fraction | None:
    """The largest root in (lo, hi] if it is rational, else None."""
    ints = poly.primitive(s)
    lead, const = ints[-1], ints[0]
    if const == 0:
        if lo < 0 <= hi and poly.sign_changes(chain, Fraction(0)) == v_hi:
            return Fraction(0)
        return None
    found = None
    for e in poly.divisors(lead):
        k = math.floor(lo * e) + 1
        while Fraction(k, e) <= hi:
            r = Fraction(k, e)
            if r and const % r.numerator == 0 and lead % r.denominator == 0 and poly.evaluate(ints, r) == 0:
                if found is None or r > found:
                    found = r
            k += 1
    if found is not None and poly.sign_changes(chain, found) == v_hi:
        return found
    return None


def entropy_of(a: Sequence[Sequence[int]], tol: Fraction = DEFAULT_TOL) -> tuple[RootCertificate, EntropyValue]:
    cert = leading_root(a, tol)
    return cert, cert.entropy()


# --- serialization -------------------------------------------------------


def matrix_to_json(a: Matrix) -> dict:
    return {"n": len(a), "rows": [list(r) for r in a]}


def matrix_from_json(obj) -> Matrix:
    if isinstance(obj, list):
        rows = obj
    elif isinstance(obj, dict) and "rows" in obj:
        rows = obj["rows"]
        if "n" in obj and obj["n"] != len(rows):
            raise MalformedMatrix("declared size does not match the rows")
    else:
        raise MalformedMatrix("matrix must be {'n':..,'rows':[...]} or a list of rows")
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise MalformedMatrix("rows must be a list of lists")
    return check_matrix(rows)


def poly_to_json(p: IntPolynomial) -> dict:
    return {"coeffs": [str(c) for c in p.coeffs]}


def poly_from_json(obj) -> IntPolynomial:
    if not isinstance(obj, dict) or not isinstance(obj.get("coeffs"), list):
        raise ValueError("polynomial must be {'coeffs': [...]}")
    coeffs = []
    for c in obj["coeffs"]:
        v = parse_rational(c)
        if v.denominator != 1:
            raise ValueError(f"coefficient {c!r} is not an integer")
        coeffs.append(v.numerator)
    return IntPolynomial(coeffs)


def rational_function_to_json(z: RationalFunctionZ) -> dict:
    return {
        "numerator": poly_to_json(z.numerator),
        "denominator": poly_to_json(z.denominator),
        "text": str(z),
    }


def rational_function_from_json(obj) -> RationalFunctionZ:
    return RationalFunctionZ(poly_from_json(obj["numerator"]), poly_from_json(obj["denominator"]))


def certificate_to_json(c: RootCertificate) -> dict:
    out = {
        "polynomial": poly_to_json(c.polynomial),
        "bracket": [format_rational(c.lo), format_rational(c.hi)],
        "decimal": c.decimal,
    }
    if c.exact is not None:
        out["exact"] = format_rational(c.exact)
    return out


def certificate_from_json(obj) -> RootCertificate:
    lo, hi = (parse_rational(x) for x in obj["bracket"])
    exact = parse_rational(obj["exact"]) if "exact" in obj else None
    return RootCertificate(poly_from_json(obj["polynomial"]), lo, hi, exact)


def entropy_to_json(c: RootCertificate) -> dict:
    e = c.entropy()
    return {
        "root": certificate_to_json(c),
        "log": f"{e.decimal:.9g}",
        "log_bracket": [e.lo, e.hi],
        "exact_zero": e.exact_zero,
    }
