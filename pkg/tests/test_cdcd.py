"""Cylindrical decomposition: counts, determinant bounds, adaptedness
verification with mutation detection, and the locality invariant."""

import random
from fractions import Fraction as F

import pytest

from ominarr import cdcd, onedim
from ominarr.cdcd import build_cdcd, cell_census, locality_check, verify_adapted_partition
from ominarr.family import circle_member
from ominarr.onedim import IntervalSet, normalize


def test_1d_two_intervals():
    members = [IntervalSet.open(F(0), F(1)), IntervalSet.open(F(1, 2), F(2))]
    tree = build_cdcd(members, 1)
    assert [float(v) for v in tree.base_values] == [0.0, 0.5, 1.0, 2.0]
    assert tree.total_cells() == 9
    for c in tree.cells:
        assert len(c.determinants) <= 2
    ok, info = verify_adapted_partition(tree, members)
    assert ok, info
    total, bound, flag = cell_census(tree, c2=F(5))
    assert total == 9 and flag


def test_1d_disjoint_intervals_count():
    rng = random.Random(3)
    for n in (1, 2, 4, 7):
        pts = sorted(rng.sample(range(0, 100), 2 * n))
        members = [IntervalSet.open(F(pts[2 * i]), F(pts[2 * i + 1])) for i in range(n)]
        tree = build_cdcd(members, 1)
        assert tree.total_cells() == 4 * n + 1
        total, bound, flag = cell_census(tree, c2=F(5))
        assert flag


def test_2d_single_circle():
    tree = build_cdcd([circle_member(0, 0, 1)], 2)
    # base {-1, 1}: 5 base cells; stacks 1+3+5+3+1 = 13 plane cells
    assert tree.total_cells() == 13
    for c in tree.cells:
        assert len(c.determinants) <= (4 if c.level == 1 else 6)
    ok, info = verify_adapted_partition(tree, tree.members)
    assert ok, info
    total, bound, flag = cell_census(tree, c2=F(16))
    assert total == 13 and flag


def test_2d_empty():
    tree = build_cdcd([], 2)
    assert tree.total_cells() == 1


def test_2d_three_circles_vs_arrangement():
    from ominarr.arrangement2d import build_arrangement

    circles = [(0, 0, 2), (3, 0, 2), (F(3, 2), 2, 2)]
    members = [circle_member(*c) for c in circles]
    tree = build_cdcd(members, 2)
    arr = build_arrangement(members)
    # the cylindrical decomposition refines the arrangement cells
    assert tree.total_cells() >= arr.total_cells() == 26
    ok, info = verify_adapted_partition(tree, members)
    assert ok, info


def test_mutation_detected_1d():
    members = [IntervalSet.open(F(0), F(1))]
    tree = build_cdcd(members, 1)
    # flip a recorded membership: must be caught
    bad = [c for c in tree.cells if c.kind == "interval"][1]
    bad.membership = tuple(not b for b in bad.membership)
    ok, info = verify_adapted_partition(tree, members)
    assert not ok and info["reason"] == "sign not constant"


def test_mutation_detected_2d():
    members = [circle_member(0, 0, 1)]
    tree = build_cdcd(members, 2)
    st = tree.engine.stacks[2]  # stack over (-1, 1) holds two sections
    assert len(st.sections) == 2
    del st.sections[1]
    ok, info = verify_adapted_partition(tree, members)
    assert not ok
    assert info["reason"] in (
        "stack sections disagree with member fiber",
        "missing cell",
        "sign not constant on cell",
    )


def test_determinants_and_locality():
    circles = [(0, 0, 2), (3, 0, 2), (F(3, 2), 2, 2), (10, 10, 1)]
    members = [circle_member(*c) for c in circles]
    tree = build_cdcd(members, 2)
    for c in tree.cells:
        assert len(c.determinants) <= 6
        assert all(0 <= m < 4 for m in c.determinants)
    for c in tree.cells[:: max(1, len(tree.cells) // 40)]:
        assert locality_check(tree, c.id), (c.id, c.kind, c.determinants)


def test_locality_1d():
    members = [
        IntervalSet.open(F(0), F(4)),
        IntervalSet.open(F(1), F(2)),
        IntervalSet.open(F(6), F(8)),
    ]
    tree = build_cdcd(members, 1)
    for c in tree.cells:
        assert locality_check(tree, c.id)


def test_dump_format():
    tree = build_cdcd([circle_member(0, 0, 1)], 2)
    text = tree.dump()
    assert "kind=interval" in text and "kind=section" in text and "determinants=" in text


def test_random_cdcd_suite():
    rng = random.Random(11)
    for _ in range(25):
        n = rng.randint(1, 3)
        members = []
        for _ in range(n):
            members.append(
                circle_member(
                    F(rng.randint(-8, 8), 2), F(rng.randint(-8, 8), 2), F(rng.randint(1, 6), 2)
                )
            )
        tree = build_cdcd(members, 2)
        ok, info = verify_adapted_partition(tree, members)
        assert ok, info
        for c in tree.cells:
            assert len(c.determinants) <= 6
        total, bound, flag = cell_census(tree, c2=F(16))
        assert flag, (total, bound)
