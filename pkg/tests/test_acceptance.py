"""Acceptance criteria, each run at its stated tolerance and time limit.

Every test records one PASS/FAIL line; pytest prints them in the terminal
summary, and ``python tests/test_acceptance.py`` prints them directly.
"""

import math
import random
import sys
import time
from fractions import Fraction
from functools import wraps
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from hypothesis import given, settings, strategies as st  # noqa: E402

import _acceptance_log  # noqa: E402
from _systems import random_system  # noqa: E402
from nadyn import poly  # noqa: E402
from nadyn import zeta as z  # noqa: E402
from nadyn.fixtures import fixture_matrices, load  # noqa: E402
from nadyn.markov import adjacency, analyze, refine_to_markov, system_from_json  # noqa: E402
from nadyn.realizer import arrange, choose_M, hierarchy, realize, verify_realization  # noqa: E402
from nadyn.valued import FieldContext  # noqa: E402

TAME = z.matrix_from_json(load("tame")["payload"]["matrix"])
WILD = z.matrix_from_json(load("wild")["payload"]["matrix"])


def criterion(name: str, limit: float):
    """Time the body, enforce the limit and record one result line."""

    def deco(fn):
        @wraps(fn)
        def run(*args, **kwargs):
            start = time.perf_counter()
            detail, ok = "", False
            try:
                detail = fn(*args, **kwargs) or ""
                ok = True
            except AssertionError as exc:
                detail = str(exc).splitlines()[0] if str(exc) else "assertion failed"
                raise
            finally:
                elapsed = time.perf_counter() - start
                if ok and elapsed >= limit:
                    ok, detail = False, f"took {elapsed:.2f}s, limit {limit}s"
                _acceptance_log.RESULTS.append((name, ok, elapsed, detail))
                print(_acceptance_log.line(name, ok, elapsed, detail))
            assert elapsed < limit, f"{name} took {elapsed:.2f}s (limit {limit}s)"

        return run

    return deco


@criterion("1 tame matrix: det, quotient, sqrt(3) bracket", 1.0)
def test_criterion_1_tame():
    assert z.det_I_minus_tA(TAME).coeffs == tuple(poly.mul([1, -1], [1, 0, -3]))
    q = z.zeta_quotient(TAME, [2])
    assert q.zeta == z.RationalFunctionZ.reduced([1, 1], [1, 0, -3])
    assert str(q.zeta) == "(1+t)/(1-3t^2)"
    cert = z.leading_root(TAME, Fraction(1, 10**12))
    # sqrt(3) in [lo, hi] iff lo^2 <= 3 <= hi^2 (both positive)
    assert 0 < cert.lo and cert.lo**2 <= 3 <= cert.hi**2, cert.bracket
    assert cert.width <= Fraction(1, 10**12)
    return f"width {float(cert.width):.2e}"


@criterion("2 wild matrix: det, quotient, log 3", 1.0)
def test_criterion_2_wild():
    assert z.det_I_minus_tA(WILD).coeffs == tuple(poly.mul(poly.power([1, -1], 2), [1, -3]))
    q = z.zeta_quotient(WILD, [1, 1])
    assert str(q.zeta) == "1/(1-3t)"
    ent = z.leading_root(WILD).entropy()
    assert abs(ent.decimal - math.log(3)) <= 1e-9
    return f"log {ent.decimal:.12f}"


@criterion("3 golden map end to end", 5.0)
def test_criterion_3_golden():
    r = realize([[1, 1], [1, 0]], ctx=FieldContext(2), seeds="paper", M=14)
    expected = [
        ([3 * 2**33, 2**33], poly.sub([2**35], poly.power([-1, 1], 14))),
        ([-2 * 2**21, 2**21], poly.sub([2**21], poly.power([-3, 1], 14))),
        ([0, 2**7], poly.sub([2**7], poly.power([0, 1], 14))),
    ]
    got = [(t.numerator, t.denominator) for t in r.expr.terms]
    assert got == expected, "term coefficients differ"
    assert r.report.ok, [c for c in r.report.failed()]
    rep = analyze(system_from_json(load("golden")["payload"]["system"]))
    assert rep.adjacency == [[1, 1], [1, 0]]
    assert str(rep.zeta) == "1/(1-t-t^2)"
    assert abs(rep.entropy.decimal - math.log((1 + math.sqrt(5)) / 2)) <= 1e-9
    return f"entropy {rep.entropy.decimal:.10f}"


@criterion("4 swap map end to end", 5.0)
def test_criterion_4_swap():
    r = realize([[0, 1], [1, 0]], ctx=FieldContext(2), seeds="paper", M=6)
    expected = [
        ([5 * 2**14, 2**14], poly.sub([2**15], poly.power([-1, 1], 6))),
        ([-(2**14), 2**14], poly.sub([2**15], poly.power([-3, 1], 6))),
        ([0, 2**3], poly.sub([2**3], poly.power([0, 1], 6))),
    ]
    assert [(t.numerator, t.denominator) for t in r.expr.terms] == expected, "term coefficients differ"
    assert r.entropy.exact == 1 and r.entropy.entropy().exact_zero
    rep = analyze(system_from_json(load("swap")["payload"]["system"]))
    assert rep.root.exact == 1 and rep.entropy.exact_zero
    return "entropy exactly 0"


@criterion("5 splitting index law on 200 random systems", 30.0)
def test_criterion_5_index_law():
    rng = random.Random(20240)
    systems = splits = 0
    bad = []
    for k in range(200):
        system = random_system(rng, (2, 3)[k % 2], max_pieces=5, max_depth=6)
        state = refine_to_markov(system)
        assert all(m == 1 for m in state.m_values), f"system {k} ended without the Markov property"
        systems += 1
        splits += len(state.splits)
        bad.extend((k, e.index_before, e.index_after) for e in state.splits if e.drop != 1)
    assert not bad, f"{len(bad)} of {splits} splits did not drop the index by exactly 1, e.g. {bad[:3]}"
    return f"{systems} systems, {splits} splits"


@settings(max_examples=50, deadline=None, derandomize=True)
@given(
    st.integers(1, 4).flatmap(
        lambda n: st.lists(st.lists(st.integers(0, 3), min_size=n, max_size=n), min_size=n, max_size=n)
    ).filter(lambda a: any(z.trace_powers(a, len(a))))
)
def _augmentation_law(a):
    lam = z.leading_root(a).decimal
    for n in (2, 3, 4):
        root = z.leading_root(z.augment(a, n)).decimal
        assert abs(root**n - lam) <= 1e-9, (a, n, root**n, lam)


@criterion("6 augmentation spectral law", 30.0)
def test_criterion_6_augmentation():
    _augmentation_law()
    return "50 matrices, n in {2,3,4}"


@criterion("7 series identity", 10.0)
def test_criterion_7_series():
    mats = fixture_matrices()
    rng = random.Random(7)
    for _ in range(100):
        n = rng.randint(1, 5)
        mats.append([[rng.randint(0, 3) for _ in range(n)] for _ in range(n)])
    for a in mats:
        assert z.series_consistency(a, 10), a
    return f"{len(mats)} matrices"


@criterion("8 bound sharpness for the golden map", 2.0)
def test_criterion_8_sharpness():
    a = [[1, 1], [1, 0]]
    arr = arrange(hierarchy(a), FieldContext(2), "paper")
    low = verify_realization(arr, 4, a)
    assert low.failed("escape"), "M = 4 passed every escape bound"
    M = choose_M(arr)
    rep = verify_realization(arr, M, a)
    assert rep.ok, [c for c in rep.failed()]
    return f"M=4 fails {len(low.failed('escape'))} escape bounds; minimal M={M} passes"


def _quotient_shape(b, lengths):
    q = z.zeta_quotient(b, lengths)
    top = poly.cyclotomic_product(lengths)
    num, den = q.zeta.numerator.coeffs, q.zeta.denominator.coeffs
    assert q.numerator_cyclotomic and poly.divides(num, top), (b, lengths)
    assert poly.degree(poly.gcd(num, den)) == 0, (b, lengths)


@settings(max_examples=100, deadline=None, derandomize=True)
@given(
    st.integers(1, 5).flatmap(
        lambda n: st.lists(st.lists(st.integers(0, 3), min_size=n, max_size=n), min_size=n, max_size=n)
    ),
    st.lists(st.integers(1, 4), max_size=3),
)
def _quotient_law(b, lengths):
    _quotient_shape(b, lengths)


@criterion("9 cyclotomic numerator shape", 5.0)
def test_criterion_9_ratzeta_shape():
    _quotient_shape(TAME, [2])
    _quotient_shape(WILD, [1, 1])
    for a in fixture_matrices():
        _quotient_shape(a, [])
    _quotient_law()
    return "fixtures and 100 random quotients"


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
