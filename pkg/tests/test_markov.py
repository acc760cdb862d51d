import math
import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from _systems import random_system
from nadyn import zeta as z
from nadyn.disks import Disk, contains, contains_point, disjoint, same_disk
from nadyn.markov import (
    AffinePiece,
    CoverDisk,
    Escaped,
    IndexLawViolation,
    InvalidSystem,
    PiecewiseSystem,
    adjacency,
    analyze,
    m_index,
    refine_to_markov,
    report_to_json,
    system_from_json,
    system_to_json,
)
from nadyn.valued import FieldContext

Q2 = FieldContext(2)
D = Disk.closed
F = Fraction

MAP_A = PiecewiseSystem(Q2, (AffinePiece(D(1, 3), F(1, 4), F(3, 4)), AffinePiece(D(3, 2), 1, -2)), D(0, 1))
MAP_B = PiecewiseSystem(Q2, (AffinePiece(D(1, 3), F(1, 2), F(5, 2)), AffinePiece(D(3, 3), F(1, 2), F(-1, 2))), D(0, 1))


def _cover(system):
    return [CoverDisk(pc.domain, k) for k, pc in enumerate(system.pieces)]


def periodic_point_count(system: PiecewiseSystem, period: int) -> int:
    """Count z with f^period(z) = z and the whole orbit inside the domains, by itineraries."""
    ctx = system.ctx
    found = set()
    for word in product(range(len(system.pieces)), repeat=period):
        a, b = F(1), F(0)
        for k in word:
            pc = system.pieces[k]
            a, b = pc.alpha * a, pc.alpha * b + pc.beta
        if a == 1:
            continue
        x = b / (1 - a)
        w = x
        for k in word:
            pc = system.pieces[k]
            if not contains_point(pc.domain, w, ctx):
                break
            w = pc(w)
        else:
            found.add(x)
    return len(found)


def test_adjacency_examples():
    assert adjacency(_cover(MAP_A), MAP_A) == [[1, 1], [1, 0]]
    assert adjacency(_cover(MAP_B), MAP_B) == [[0, 1], [1, 0]]
    one = PiecewiseSystem(Q2, (AffinePiece(D(1, 2), 1, 0),))
    assert adjacency(_cover(one), one) == [[1]]


def test_m_index_examples():
    cover = _cover(MAP_A)
    assert m_index(cover[0], cover, MAP_A) == 1
    inner = PiecewiseSystem(Q2, (AffinePiece(D(1, 3), 1, 2), AffinePiece(D(3, 2), F(1, 2), F(-1, 2))))
    c = _cover(inner)
    assert m_index(c[0], c, inner) >= 2
    gone = PiecewiseSystem(Q2, (AffinePiece(D(1, 3), 2, 4),))
    with pytest.raises(Escaped):
        m_index(_cover(gone)[0], _cover(gone), gone)


def test_overlapping_domains_rejected():
    with pytest.raises(InvalidSystem):
        PiecewiseSystem(Q2, (AffinePiece(D(1, 2), 1, 0), AffinePiece(D(1, 3), 1, 0)))
    with pytest.raises(InvalidSystem):
        AffinePiece(D(1, 2), 0, 1)


def test_refine_already_markov():
    for system, a in ((MAP_A, [[1, 1], [1, 0]]), (MAP_B, [[0, 1], [1, 0]])):
        state = refine_to_markov(system)
        assert state.splits == [] and state.index == 0
        assert adjacency(state.cover, system) == a


def test_refine_single_split():
    # U1 -> strictly inside U2, U2 -> over both.
    system = PiecewiseSystem(Q2, (AffinePiece(D(1, 3), 1, 2), AffinePiece(D(3, 2), F(1, 2), F(-1, 2))))
    state = refine_to_markov(system, strict=True)
    assert len(state.splits) == 1
    ev = state.splits[0]
    assert (ev.index_before, ev.index_after) == (1, 0)
    keys = sorted(d.key(Q2) for d in state.disks)
    assert keys == sorted(d.key(Q2) for d in (D(1, 3), D(3, 3), D(7, 3)))
    assert adjacency(state.cover, system) == [[0, 1, 0], [1, 0, 0], [0, 1, 1]]


def test_split_can_drop_index_by_two():
    # Two disks share the same intermediate image, so one split repairs both.
    system = PiecewiseSystem(
        Q2,
        (
            AffinePiece(D(0, 3), F(1, 2), 3),
            AffinePiece(D(2, 3), F(1, 2), 2),
            AffinePiece(D(1, 1), F(1, 2), F(-1, 2)),
        ),
    )
    cover = _cover(system)
    assert [m_index(c, cover, system) for c in cover] == [2, 2, 1]
    state = refine_to_markov(system)
    assert [(e.index_before, e.index_after) for e in state.splits] == [(2, 0)]
    assert all(m == 1 for m in state.m_values)
    with pytest.raises(IndexLawViolation):
        refine_to_markov(system, strict=True)
    # The resulting partition is still a correct Markov coding.
    a = adjacency(state.cover, system)
    for n in range(1, 5):
        assert z.trace_powers(a, n)[-1] == periodic_point_count(system, n)


def test_analyze_examples():
    rep = analyze(MAP_A)
    assert rep.adjacency == [[1, 1], [1, 0]]
    assert str(rep.zeta) == "1/(1-t-t^2)"
    assert abs(rep.entropy.decimal - math.log((1 + math.sqrt(5)) / 2)) < 1e-9
    rep = analyze(MAP_B)
    assert str(rep.zeta) == "1/(1-t^2)"
    assert rep.entropy.exact_zero and rep.root.exact == 1


def test_analyze_empty_julia():
    gone = PiecewiseSystem(Q2, (AffinePiece(D(1, 3), 2, 4),))
    rep = analyze(gone)
    assert rep.warnings == ("EmptyJulia",)
    assert str(rep.zeta) == "1" and rep.entropy.exact_zero
    assert len(rep.escaped) == 1


def test_system_json_round_trip():
    assert system_from_json(system_to_json(MAP_A)) == MAP_A
    with pytest.raises(InvalidSystem):
        system_from_json({"p": 2, "pieces": [{"domain": {"center": "1"}}]})


def _check_markov_result(system):
    ctx = system.ctx
    state = refine_to_markov(system)
    cover = state.cover
    assert all(m == 1 for m in state.m_values)
    for i, c in enumerate(cover):
        assert contains(system.pieces[c.piece].domain, c.disk, ctx)
        for d in cover[i + 1 :]:
            assert disjoint(c.disk, d.disk, ctx)
    a = adjacency(cover, system)
    for row in a:
        assert any(row)
    return state, a


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9), st.sampled_from([2, 3]))
def test_refinement_gives_markov_cover(seed, p):
    _check_markov_result(random_system(random.Random(seed), p))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9), st.sampled_from([2, 3]))
def test_traces_count_periodic_points(seed, p):
    system = random_system(random.Random(seed), p, max_pieces=4)
    state, a = _check_markov_result(system)
    if not a:
        assert all(periodic_point_count(system, n) == 0 for n in (1, 2, 3))
        return
    traces = z.trace_powers(a, 3)
    assert traces == [periodic_point_count(system, n) for n in (1, 2, 3)]


def test_report_json_has_all_fields():
    obj = report_to_json(analyze(MAP_A))
    assert set(obj) == {"adjacency", "zeta", "entropy", "cover", "escaped", "warnings"}
    assert same_disk(D(1, 3), D(int(obj["cover"][0]["center"]), 3), Q2)
