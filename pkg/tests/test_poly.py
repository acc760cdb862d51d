from fractions import Fraction

import sympy
from hypothesis import given, strategies as st

from nadyn import poly

coeffs = st.lists(st.integers(-20, 20), max_size=7)
T = sympy.Symbol("t")


def _sym(a):
    return sympy.Poly(list(reversed(a)) or [0], T)


def test_to_string():
    assert poly.to_string([1, -1, -1]) == "1-t-t^2"
    assert poly.to_string([0, 3, 0, -1], "x") == "3x-x^3"
    assert poly.to_string([]) == "0"
    assert poly.to_string([Fraction(1, 2), 1]) == "1/2+t"


@given(coeffs, coeffs)
def test_mul_matches_sympy(a, b):
    got = poly.mul(a, b)
    want = _sym(a) * _sym(b)
    assert got == poly.trim([int(c) for c in reversed(want.all_coeffs())])


@given(coeffs, coeffs.filter(lambda b: poly.trim(b)))
def test_divmod_reconstructs(a, b):
    q, r = poly.divmod_poly(a, b)
    assert poly.add(poly.mul(q, b), r) == poly.trim(a)
    assert poly.degree(r) < poly.degree(b)


@given(coeffs, coeffs)
def test_gcd_matches_sympy(a, b):
    g = poly.gcd(a, b)
    want = sympy.gcd(_sym(a), _sym(b))
    if want.is_zero:
        assert g == []
    else:
        assert g == [Fraction(str(c)) for c in reversed(want.monic().all_coeffs())]


def test_cyclotomic_product():
    assert poly.cyclotomic_product([2]) == [1, 0, -1]
    assert poly.cyclotomic_product([1, 1]) == [1, -2, 1]
    assert poly.cyclotomic_product([]) == [1]


@given(st.lists(st.integers(-5, 5), min_size=2, max_size=6).filter(lambda a: a[0] != 0))
def test_series_inverse(a):
    inv = poly.series_inverse(a, 8)
    prod = poly.mul(a, inv)[:9]
    assert prod[0] == 1 and all(c == 0 for c in prod[1:])


def test_series_exp_of_log_geometric():
    # log 1/(1-t) = sum t^m/m
    h = [0] + [Fraction(1, m) for m in range(1, 9)]
    assert poly.series_exp(h, 8) == [1] * 9


def test_sturm_counts_real_roots():
    # (x-1)(x-2)(x^2+1)
    a = poly.mul(poly.mul([-1, 1], [-2, 1]), [1, 0, 1])
    chain = poly.sturm_chain(a)
    assert poly.sign_changes(chain, -10) - poly.sign_changes(chain, 10) == 2
    assert poly.sign_changes(chain, 0) - poly.sign_changes(chain, Fraction(3, 2)) == 1


@given(st.lists(st.integers(-9, 9), min_size=2, max_size=6).filter(lambda a: a[-1] != 0))
def test_root_bound_dominates_roots(a):
    bound = poly.root_bound(a)
    for r in sympy.Poly(list(reversed(a)), T).nroots():
        assert abs(complex(r)) < float(bound) + 1e-9


def test_squarefree_removes_repeats():
    a = poly.mul(poly.power([-1, 1], 3), [3, 1])
    assert poly.monic(poly.squarefree(a)) == poly.monic(poly.mul([-1, 1], [3, 1]))
