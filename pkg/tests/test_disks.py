from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from nadyn.disks import (
    BadGeometry,
    Disk,
    Relation,
    ZeroScale,
    affine_image,
    affine_preimage,
    contains,
    contains_point,
    disjoint,
    disk_from_json,
    disk_to_json,
    enclosing_gap_disk,
    relation,
    same_disk,
    sibling_disks,
    split,
)
from nadyn.valued import FieldContext, valuation

Q2 = FieldContext(2)
D = Disk.closed


def test_relation_examples():
    assert relation(D(1, 3), D(3, 2), Q2) is Relation.DISJOINT
    assert relation(D(1, 3), D(1, 1), Q2) is Relation.INNER
    assert relation(D(1, 1), D(1, 3), Q2) is Relation.OUTER
    assert relation(D(3, 2), D(3, 2), Q2) is Relation.EQUAL
    assert same_disk(D(3, 2), D(7, 2), Q2)


def test_affine_image_examples():
    assert same_disk(affine_image(D(1, 3), Fraction(1, 4), Fraction(3, 4), Q2), D(1, 1), Q2)
    assert same_disk(affine_image(D(3, 2), 1, -2, Q2), D(1, 2), Q2)
    d = D(Fraction(5, 3), 4)
    assert affine_image(d, 1, 0, Q2) == d
    with pytest.raises(ZeroScale):
        affine_image(d, 0, 1, Q2)


def test_open_disk_normalizes_to_closed():
    assert Disk(3, 2, "open") == D(3, 3)
    assert Disk(3, Fraction(5, 2), "open").kind == "open"


def test_gap_disk_examples():
    assert same_disk(enclosing_gap_disk(D(3, 3), 1, D(1, 1), Q2), D(3, 2), Q2)
    assert same_disk(enclosing_gap_disk(Disk.point(5), 1, D(1, 0), Q2), D(5, 3), Q2)
    with pytest.raises(BadGeometry):
        enclosing_gap_disk(D(1, 3), 1, D(1, 1), Q2)


def _brute_gap_is_maximal(v, c0, u, ctx, gap):
    # Every strictly larger disk around v inside u contains c0.
    assert not contains_point(gap, c0, ctx)
    for r in range(int(u.radius_exp), int(gap.radius_exp)):
        assert contains_point(D(v.center, r), c0, ctx)


def test_gap_disk_oracle():
    ctx = Q2
    for v, c0, u in [(D(3, 3), 1, D(1, 1)), (D(13, 5), 1, D(1, 0)), (D(6, 4), 2, D(0, 1))]:
        _brute_gap_is_maximal(v, c0, u, ctx, enclosing_gap_disk(v, c0, u, ctx))


def test_split_examples():
    out = split(D(1, 1), D(1, 3), [D(3, 2)], Q2)
    assert [d.key(Q2) for d in out] == [D(1, 3).key(Q2), D(3, 2).key(Q2)]
    assert split(D(1, 1), D(1, 3), [], Q2) == [D(1, 3)]
    out = split(D(1, 1), D(1, 3), [D(3, 3), D(7, 3)], Q2)
    assert [d.key(Q2) for d in out] == [D(1, 3).key(Q2), D(3, 2).key(Q2)]


def test_split_marked_disk_around_u0_keeps_siblings():
    out = split(D(0, 0), D(0, 3), [D(0, 1)], Q2)
    keys = {d.key(Q2) for d in out}
    assert keys == {D(0, 3).key(Q2), D(4, 3).key(Q2), D(2, 2).key(Q2)}


def test_siblings_partition_the_annulus():
    sib = sibling_disks(D(0, 3), D(0, 0), Q2)
    for z in range(8):
        inside = [d for d in sib + [D(0, 3)] if contains_point(d, z, Q2)]
        assert len(inside) == 1


centers = st.integers(min_value=-200, max_value=200)
radii = st.integers(min_value=0, max_value=6)
primes = st.sampled_from([2, 3, 5])


@given(centers, radii, centers, radii, primes)
def test_ultrametric_dichotomy(c1, r1, c2, r2, p):
    ctx = FieldContext(p)
    a, b = D(c1, r1), D(c2, r2)
    rel = relation(a, b, ctx)
    # Membership sampling oracle over a full residue system.
    pts = range(-(p**6), p**6, max(1, p ** 6 // 50))
    in_a = {z for z in pts if contains_point(a, z, ctx)}
    in_b = {z for z in pts if contains_point(b, z, ctx)}
    if rel is Relation.DISJOINT:
        assert not in_a & in_b
    elif rel is Relation.INNER:
        assert in_a <= in_b
    elif rel is Relation.OUTER:
        assert in_b <= in_a
    else:
        assert in_a == in_b


@given(centers, radii, st.integers(1, 50), st.integers(-50, 50), st.integers(0, 4), primes, centers)
def test_affine_image_maps_points(c, r, num, beta, shift, p, z):
    ctx = FieldContext(p)
    alpha = Fraction(num, p**shift)
    d = D(c, r)
    img = affine_image(d, alpha, beta, ctx)
    if contains_point(d, z, ctx):
        assert contains_point(img, alpha * z + beta, ctx)
    assert same_disk(affine_preimage(img, alpha, beta, ctx), d, ctx)


@given(centers, st.integers(1, 6), centers, primes)
def test_split_output_is_disjoint_and_inside(c, depth, c0, p):
    ctx = FieldContext(p)
    u = D(c, 0)
    u0 = D(c + c0 * p, depth)
    assume(contains(u, u0, ctx) and u0.radius_exp > 0)
    marked = [D(c + k, depth) for k in range(1, p**2)]
    marked = [m for m in marked if contains(u, m, ctx)]
    out = split(u, u0, marked, ctx)
    for i, x in enumerate(out):
        assert contains(u, x, ctx)
        for y in out[i + 1 :]:
            assert disjoint(x, y, ctx)
    for m in marked:
        assert any(contains(x, m, ctx) for x in out)


@given(st.fractions(max_denominator=1000), st.one_of(st.integers(-3, 8).map(Fraction), st.integers(-3, 8).map(lambda k: Fraction(2 * k + 1, 2))))
def test_disk_json_round_trip(c, r):
    kind = "closed" if r.denominator == 1 else "open"
    d = Disk(c, r, kind)
    assert disk_from_json(disk_to_json(d)) == d


def test_key_identifies_point_sets():
    assert D(Fraction(1, 3), 2).key(Q2) == D(Fraction(1, 3) + 4, 2).key(Q2)
    assert D(Fraction(1, 3), 2).key(Q2) != D(Fraction(1, 3) + 2, 2).key(Q2)
    assert valuation(Fraction(1, 3) - Fraction(1, 3) - 4, Q2) == 2
