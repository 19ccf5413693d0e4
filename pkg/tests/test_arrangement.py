"""Planar engine: cell counts against the brute-force subdivision oracle,
sign conditions, basic sets, Betti vectors, censuses, curve restriction."""

import random
from fractions import Fraction as F

import pytest

from ominarr import arrangement2d as arr2d
from ominarr.arrangement2d import (
    all_cells_census,
    basic_set_cells,
    betti_of_cells,
    betti_of_set,
    build_arrangement,
    realizable_sign_conditions,
    restrict_to_curve,
)
from ominarr.family import circle_member, line_member, member_from_mpoly, point_member, segment_member, MPoly
from oracles import circle_arrangement_counts, is_generic_circle_family


def circles_members(circles, rel="="):
    return [circle_member(*c, rel=rel) for c in circles]


GENERIC3 = [(0, 0, 2), (3, 0, 2), (F(3, 2), 2, 2)]


def test_empty_arrangement():
    arr = build_arrangement([])
    assert arr.total_cells() == 1
    assert arr.cells[0].dimension == 2
    census = all_cells_census(arr)
    assert census["sum_b0"] == 1 and census["sum_b1"] == 0


def test_one_circle():
    arr = build_arrangement(circles_members([(0, 0, 1)]))
    assert arr.total_cells() == 3
    dims = sorted(c.dimension for c in arr.cells)
    assert dims == [1, 2, 2]
    census = all_cells_census(arr)
    assert census["sum_b0"] == 3
    assert census["sum_b1"] == 2  # curve 1, exterior 1, interior 0
    sigma = realizable_sign_conditions(arr)
    assert set(sigma) == {(-1,), (0,), (1,)}
    assert all(v == 1 for v in sigma.values())
    bv = betti_of_set(arr, lambda m: m[0])
    assert (bv.b0, bv.b1) == (1, 1)


def test_closed_disk_and_annulus():
    arr = build_arrangement(
        [circle_member(0, 0, 1, rel="<=")]
    )
    bv = betti_of_set(arr, lambda m: m[0])
    assert (bv.b0, bv.b1) == (1, 0)
    # closed annulus: inside r=2 closed, outside r=1 open
    members = [circle_member(0, 0, 1, rel="<"), circle_member(0, 0, 2, rel="<=")]
    arr = build_arrangement(members)
    bv = betti_of_set(arr, lambda m: (not m[0]) and m[1])
    assert (bv.b0, bv.b1) == (1, 1)


def test_two_disjoint_circles():
    arr = build_arrangement(circles_members([(0, 0, 1), (4, 0, 1)]))
    sigma = realizable_sign_conditions(arr)
    assert (-1, -1) not in sigma
    # only sign pairs with at most one non-positive entry are realizable
    assert sigma == {
        (-1, 1): 1,
        (0, 1): 1,
        (1, 1): 1,
        (1, 0): 1,
        (1, -1): 1,
    }
    assert sum(sigma.values()) == arr.total_cells()


def test_three_generic_circles():
    assert is_generic_circle_family(GENERIC3)
    v, e, f, total = circle_arrangement_counts(GENERIC3)
    assert (v, e, f, total) == (6, 12, 8, 26)
    arr = build_arrangement(circles_members(GENERIC3))
    assert arr.total_cells() == 26
    by_dim = {0: 0, 1: 0, 2: 0}
    for c in arr.cells:
        by_dim[c.dimension] += 1
    assert (by_dim[0], by_dim[1], by_dim[2]) == (6, 12, 8)
    sigma = realizable_sign_conditions(arr)
    assert sum(sigma.values()) == 26
    # partition invariant: basic sets partition the cell census
    total_comps = 0
    import itertools

    for r in range(4):
        for idx in itertools.combinations(range(3), r):
            total_comps += len(basic_set_cells(arr, idx).components)
    assert total_comps == 26
    # union of 3 pairwise-crossing circles: b0 = 1, b1 = E - V + 1 = 7
    bv = betti_of_set(arr, lambda m: any(m))
    assert (bv.b0, bv.b1) == (1, 7)


def test_circle_census_formula_small():
    rng = random.Random(20)
    for n in (2, 3, 4):
        while True:
            circles = []
            for _ in range(n):
                circles.append(
                    (F(rng.randint(-6, 6), 2), F(rng.randint(-6, 6), 2), F(rng.randint(4, 8), 2))
                )
            if is_generic_circle_family(circles):
                break
        v, e, f, total = circle_arrangement_counts(circles)
        assert total == 4 * n * n - 4 * n + 2
        assert f == n * n - n + 2
        arr = build_arrangement(circles_members(circles))
        assert arr.total_cells() == total


def test_tangent_circle_and_line():
    # circle tangent to the x-axis at the origin: exact degeneracy
    members = [line_member(0, 1, 0), circle_member(0, 1, 1)]
    arr = build_arrangement(members)
    # cells: 1 vertex, 2 rays + 1 arc, 3 faces
    by_dim = {0: 0, 1: 0, 2: 0}
    for c in arr.cells:
        by_dim[c.dimension] += 1
    assert by_dim[0] == 1
    assert by_dim[1] == 3
    assert by_dim[2] == 3
    census = all_cells_census(arr)
    # every face is simply connected: the circular bite touches the line,
    # so the outer face has no hole; the arc cell is not a loop
    assert census["sum_b1"] == 0
    bv = betti_of_set(arr, lambda m: m[1])
    assert (bv.b0, bv.b1) == (1, 1)


def test_coincident_members():
    members = circles_members([(0, 0, 1), (0, 0, 1)])
    arr = build_arrangement(members)
    assert arr.total_cells() == 3
    sigma = realizable_sign_conditions(arr)
    assert set(sigma) == {(-1, -1), (0, 0), (1, 1)}


def test_vertical_line_member():
    members = [line_member(1, 0, 0), circle_member(0, 0, 1)]
    arr = build_arrangement(members)
    # vertical line through circle: V=2, E: line 3 pieces + circle 4 arcs..
    by_dim = {0: 0, 1: 0, 2: 0}
    for c in arr.cells:
        by_dim[c.dimension] += 1
    assert by_dim[0] == 2
    assert by_dim[1] == 3 + 4 - 2  # line segments: 3; circle arcs: 2
    assert by_dim[2] == 4


def test_point_member_and_segment():
    arr = build_arrangement([point_member(0, 0)])
    assert arr.total_cells() == 2
    bv = betti_of_set(arr, lambda m: m[0])
    assert (bv.b0, bv.b1) == (1, 0)
    arr = build_arrangement([segment_member((0, 0), (1, 1))])
    bv = betti_of_set(arr, lambda m: m[0])
    assert (bv.b0, bv.b1) == (1, 0)
    # the plane minus a segment retracts to a circle
    bvc = betti_of_set(arr, lambda m: not m[0])
    assert (bvc.b0, bvc.b1) == (1, 1)


def test_open_set_b1_rules_agree():
    # disk interior minus two inner circles: both open-set rules agree
    members = [
        circle_member(0, 0, 4, rel="<"),
        circle_member(-1, 0, F(1, 2), rel="<="),
        circle_member(1, 0, F(1, 2), rel="<="),
    ]
    arr = build_arrangement(members)
    c = arr.cad
    ids = [cell.id for cell in c.cells if cell.membership[0] and not cell.membership[1] and not cell.membership[2]]
    slow = betti_of_cells(c, ids, fast_open=False)
    fast = betti_of_cells(c, ids, fast_open=True)
    assert slow.as_tuple() == fast.as_tuple() == (1, 2)


def test_parabola_and_cubic():
    x, y = MPoly.var(2, 0), MPoly.var(2, 1)
    arr = build_arrangement([member_from_mpoly(y - x * x)])
    assert arr.total_cells() == 3
    census = all_cells_census(arr)
    assert census["sum_b0"] == 3 and census["sum_b1"] == 0
    arr = build_arrangement([member_from_mpoly(y - x * x * x)])
    assert all_cells_census(arr)["sum_b1"] == 0
    # hyperbola xy = 1: 2 branches, complement pieces
    arr = build_arrangement([member_from_mpoly(x * y - MPoly.const(2, 1))])
    bv = betti_of_set(arr, lambda m: m[0])
    assert (bv.b0, bv.b1) == (2, 0)
    census = all_cells_census(arr)
    # 2 branches + 3 complement pieces (xy > 1 splits into two quadrants)
    assert census["sum_b0"] == 5
    assert census["sum_b1"] == 0


def test_restrict_to_curve():
    # V = x-axis crossed by two circles
    members = circles_members([(0, 0, 1), (3, 0, 1)])
    v = line_member(0, 1, 0)
    census, comps, _ = restrict_to_curve(members, v)
    # intersections with the axis: 4 points -> 4 pts + 5 open arcs
    assert census["sum_b0"] == 9
    assert census["sum_b1"] == 0
    # V = circle disjoint from everything
    census, comps, _ = restrict_to_curve(circles_members([(10, 10, 1)]), circle_member(0, 0, 1))
    assert census["sum_b0"] == 1
    assert census["sum_b1"] == 1  # the full circle is one loop cell
    # V = circle, one line crossing it twice
    census, comps, _ = restrict_to_curve([line_member(0, 1, 0)], circle_member(0, 0, 1))
    assert census["sum_b0"] == 4
    assert census["sum_b1"] == 0


def test_determinism():
    def canon(arr):
        out = []
        for c in arr.cells:
            sx, sy = c.sample
            out.append((c.cad_cells, c.dimension, float(sx), float(sy), tuple(c.adjacency)))
        return out

    members = circles_members(GENERIC3)
    a1 = build_arrangement(members)
    a2 = build_arrangement(members)
    assert canon(a1) == canon(a2)
