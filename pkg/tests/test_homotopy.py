"""Mayer-Vietoris suite, closed-bounded replacement, annulus reduction,
and the tube-family decomposition."""

import random
from fractions import Fraction as F

import pytest

from ominarr import homotopy, onedim
from ominarr.arrangement2d import PlanarSet, build_arrangement
from ominarr.errors import EpsilonTooLarge, InadmissibleLadder
from ominarr.family import circle_member
from ominarr.homotopy import (
    EpsilonLadder,
    annulus_reduction,
    build_betti_table,
    build_ladder_1d,
    closed_replacement_1d,
    closed_replacement_2d,
    mv_intersection_bound,
    mv_pair_check,
    mv_union_bound,
    serialize_trace,
    tube_family_decomposition,
)
from ominarr.onedim import IntervalSet


def IS_closed(a, b):
    return IntervalSet.closed(F(a), F(b))


def IS_pt(a):
    return IntervalSet.point(F(a))


def rand_closed_set(rng, lo=-12, hi=12):
    ps = []
    for _ in range(rng.randint(0, 4)):
        a = F(rng.randint(lo, hi), rng.randint(1, 4))
        if rng.random() < 0.3:
            ps.append(("pt", a))
        else:
            ps.append(("closed", a, a + F(rng.randint(1, 8), rng.randint(1, 3))))
    return onedim.normalize(ps)


def test_mv_1d_examples():
    r = mv_pair_check(IS_closed(0, 2), IS_closed(1, 3))
    row = [x for x in r.rows if x[0] == "MV1" and x[1] == 0][0]
    assert (row[2], row[3]) == (2, 2)
    assert r.all_ok()


def test_mv_1d_fuzz():
    rng = random.Random(17)
    for _ in range(3000):
        s1 = rand_closed_set(rng)
        s2 = rand_closed_set(rng)
        assert mv_pair_check(s1, s2).all_ok()


def test_mv_2d_identical_circles_and_crossing():
    arr = build_arrangement([circle_member(0, 0, 1)])
    s = PlanarSet.member(arr, 0)
    r = mv_pair_check(s, s)
    row = [x for x in r.rows if x[0] == "MV1" and x[1] == 1][0]
    assert (row[2], row[3]) == (2, 2)
    # two circles crossing at 2 points
    arr = build_arrangement([circle_member(0, 0, 2), circle_member(2, 0, 2)])
    s1, s2 = PlanarSet.member(arr, 0), PlanarSet.member(arr, 1)
    union = s1.union(s2)
    inter = s1.intersect(s2)
    assert union.betti().as_tuple() == (1, 3)
    assert inter.betti().as_tuple() == (2, 0)
    row = [x for x in mv_pair_check(s1, s2).rows if x[0] == "MV2" and x[1] == 1][0]
    assert row[2] == 3 and row[3] == 1 + 1 + 2


def test_prop7_bounds_1d():
    sets = [IS_closed(0, 2), IS_closed(1, 3)]
    amb = IS_closed(-10, 10)
    table = build_betti_table(sets, amb, cap=2)
    bound = mv_union_bound(table, 0, 2)
    assert bound == 2  # b0(S1) + b0(S2)
    union_b0 = sets[0].union(sets[1]).b0()
    assert union_b0 <= bound
    # single-set equality case
    t1 = build_betti_table(sets[:1], amb, cap=1)
    assert mv_union_bound(t1, 0, 1) == 1


def test_prop7_intersection_bound_3_segments():
    sets = [IS_closed(0, 5), IS_closed(1, 6), IS_closed(2, 7)]
    amb = IS_closed(0, 10)
    table = build_betti_table(sets, amb, cap=3)
    bound = mv_intersection_bound(table, 0, 3, kprime=1)
    inter = sets[0]
    for s in sets[1:]:
        inter = inter.intersect(s)
    assert inter.b0() <= bound


def test_prop7_planar_circles():
    circles = [(0, 0, 2), (3, 0, 2), (F(3, 2), 2, 2)]
    arr = build_arrangement([circle_member(*c) for c in circles])
    sets = [PlanarSet.member(arr, i) for i in range(3)]
    amb = PlanarSet(arr, range(len(arr.cad.cells)))
    table = build_betti_table(sets, amb, cap=3)
    bound = mv_union_bound(table, 1, 3)
    # bound = sum b1(singles) + sum b0(pairwise intersections) = 3 + 6
    assert bound == 9
    union = sets[0].union(sets[1]).union(sets[2])
    assert union.betti().b1 == 7 <= bound


def test_ladder_1d():
    members = [IS_pt(0), IS_closed(2, 3)]
    v = IS_closed(-5, 5)
    ladder = build_ladder_1d(members, v, 4)
    ladder.validate()
    assert len(ladder) == 4
    assert all(ladder.values[i] < ladder.values[i + 1] for i in range(3))
    with pytest.raises(InadmissibleLadder):
        EpsilonLadder((F(1), F(1)), (F(2), F(2))).validate()


def test_gv_worked_example():
    # V = [-1,1], one member {0}, X = V minus the point
    members = [IS_pt(0)]
    v = IS_closed(-1, 1)
    ladder = build_ladder_1d(members, v, 2)
    res = closed_replacement_1d(members, v, [frozenset()], ladder)
    assert res.betti_in == (2, 0)
    assert res.betti_out == (2, 0)
    assert res.final.is_closed() and res.final.is_bounded()
    e1 = ladder.values[0]
    want = IS_closed(-1, -e1).union(IS_closed(e1, 1))
    assert res.final == want
    trace = serialize_trace(res)
    assert trace.count("X^") == len(members) + 2


def test_gv_closed_input_identity_betti():
    rng = random.Random(5)
    for _ in range(120):
        m1 = rand_closed_set(rng, -6, 6)
        m2 = rand_closed_set(rng, -6, 6)
        members = [m for m in (m1, m2) if not m.is_empty()]
        if not members:
            continue
        v = IS_closed(-20, 20)
        n = len(members)
        ladder = build_ladder_1d(members, v, 2 * n)
        # sigma realizing the closed union of all members
        import itertools as it

        def basic(I):
            out = v
            for i in range(n):
                out = out.intersect(members[i] if i in I else members[i].complement())
            return out

        sigma = []
        for r in range(1, n + 1):
            for I in it.combinations(range(n), r):
                if not basic(I).is_empty():
                    sigma.append(frozenset(I))
        if not sigma:
            continue
        res = closed_replacement_1d(members, v, sigma, ladder)
        x = IntervalSet.empty()
        for m in members:
            x = x.union(m)
        x = x.intersect(v)
        assert res.betti_in == (x.b0(), 0)
        assert res.betti_out == res.betti_in
        assert res.final.is_closed() and res.final.is_bounded()


def test_gv_2d_circle_in_disk():
    # A = {unit circle}, V = closed disk radius 3
    members = [circle_member(0, 0, 1)]
    v = circle_member(0, 0, 3, rel="<=")
    ladder = EpsilonLadder((F(1, 8), F(1, 4)), (F(1, 4), F(1, 2)))
    # X = the circle itself (closed): Betti preserved
    res = closed_replacement_2d(members, v, [frozenset({0})], ladder)
    assert res.betti_in == (1, 1)
    assert res.betti_out == (1, 1)
    assert res.final.is_closed() and res.final.is_bounded()
    # X = V (everything): closed, Betti (1, 0)
    res = closed_replacement_2d(members, v, [frozenset(), frozenset({0})], ladder)
    assert res.betti_in == (1, 0) == res.betti_out


def test_gv_2d_disk_member():
    members = [circle_member(0, 0, 1, rel="<=")]
    v = circle_member(0, 0, 3, rel="<=")
    ladder = EpsilonLadder((F(1, 8), F(1, 4)), (F(1, 4), F(1, 2)))
    res = closed_replacement_2d(members, v, [frozenset({0})], ladder)
    assert res.betti_in == (1, 0) == res.betti_out
    assert res.final.is_closed() and res.final.is_bounded()


def test_annulus_reduction_1d():
    out = annulus_reduction([IS_pt(0)], IS_closed(-1, 1), F(1, 4), F(1, 8))
    assert out["b0_cells"] == out["b0_reduced"] == 3
    out = annulus_reduction([], IS_closed(-1, 1), F(1, 4), F(1, 8))
    assert out["b0_cells"] == out["b0_reduced"] == 1
    out = annulus_reduction([IS_pt(0), IS_pt(1)], IS_closed(-2, 2), F(1, 8), F(1, 16))
    assert out["b0_cells"] == out["b0_reduced"] == 5
    with pytest.raises(EpsilonTooLarge):
        annulus_reduction([IS_pt(0), IS_pt(1)], IS_closed(-2, 2), F(2), F(1, 16))


def test_annulus_reduction_2d():
    members = [circle_member(0, 0, 1)]
    v = circle_member(0, 0, 3, rel="<=")
    out = annulus_reduction(members, v, F(1, 4), F(1, 8))
    # cells: interior, circle, ring between circle and rim
    assert out["b0_cells"] == out["b0_reduced"] == 3


def test_tube_family_decomposition():
    members = [IS_closed(0, 1)]
    v = IS_closed(-2, 2)
    out = tube_family_decomposition(members, v, [F(1, 8)], test_sets=[IS_closed(0, 1)])
    assert all(ok for _, _, ok in out["checks"])
    assert out["census"] >= 1
    # empty test set
    out = tube_family_decomposition(members, v, [F(1, 8)], test_sets=[IntervalSet.empty()])
    assert out["checks"][0][0] == 0
    # two crossing segments, union tested
    members = [IS_closed(0, 2), IS_closed(1, 3)]
    u = members[0].union(members[1])
    out = tube_family_decomposition(members, v.union(IS_closed(-4, 4)), [F(1, 8), F(1, 64)], test_sets=[u])
    assert all(ok for _, _, ok in out["checks"])
