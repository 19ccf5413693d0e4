"""IntervalSet calculus: canonical forms, Boolean closure, tubes,
critical radii, 1D arrangements, serialization round trips."""

import random
from fractions import Fraction as F

import pytest

from ominarr import algebraic, onedim
from ominarr.errors import MalformedPiece, NotClosed, RadiusOrder
from ominarr.onedim import IntervalSet, arrangement_cells, boolean_op, critical_radii, normalize, parse, tube


def IS_open(a, b):
    return IntervalSet.open(F(a), F(b))


def IS_closed(a, b):
    return IntervalSet.closed(F(a), F(b))


def IS_pt(a):
    return IntervalSet.point(F(a))


def test_normalize_merges_and_sorts():
    s = normalize([("open", F(0), F(1)), ("open", F(1), F(2)), ("pt", F(1))])
    assert s == IS_open(0, 2)
    assert s.b0() == 1
    s = normalize([("pt", F(3)), ("open", F(0), F(1))])
    assert [p.is_point() for p in s.pieces] == [False, True]
    s = normalize([("open", F(0), F(1)), ("open", F(1, 2), F(3, 4))])
    assert s == IS_open(0, 1)
    with pytest.raises(MalformedPiece):
        normalize([("open", F(2), F(1))])
    # idempotence
    s2 = normalize(s.pieces)
    assert s2 == s


def test_boolean_ops():
    comp = boolean_op("complement", IS_open(0, 1))
    assert comp.contains(F(0)) and comp.contains(F(1)) and not comp.contains(F(1, 2))
    assert comp.b0() == 2
    clo = boolean_op("closure", IS_open(0, 1))
    assert clo == IS_closed(0, 1)
    assert boolean_op("intersect", IS_closed(0, 2), IS_closed(1, 3)) == IS_closed(1, 2)
    # De Morgan fuzz
    rng = random.Random(5)

    def rand_set():
        ps = []
        for _ in range(rng.randint(0, 4)):
            a = F(rng.randint(-8, 8), rng.randint(1, 4))
            if rng.random() < 0.3:
                ps.append(("pt", a))
            else:
                b = a + F(rng.randint(1, 6), rng.randint(1, 3))
                ps.append(("open", a, b) if rng.random() < 0.5 else ("closed", a, b))
        return normalize(ps)

    for _ in range(400):
        a, b = rand_set(), rand_set()
        lhs = boolean_op("complement", a.union(b))
        rhs = boolean_op("complement", a).intersect(boolean_op("complement", b))
        assert lhs == rhs
        assert a.difference(b) == a.intersect(boolean_op("complement", b))
        assert a.union(b).b0() <= a.b0() + b.b0()


def test_boolean_closure_fuzz():
    # axiom-2 closure: any expression tree over interval sets stays one
    rng = random.Random(9)

    def rand_set():
        ps = []
        for _ in range(rng.randint(0, 3)):
            a = F(rng.randint(-6, 6), rng.randint(1, 3))
            b = a + F(rng.randint(1, 5))
            ps.append(rng.choice([("pt", a), ("open", a, b), ("closed", a, b)]))
        return normalize(ps)

    pool = [rand_set() for _ in range(6)]
    for _ in range(2000):
        op = rng.choice(["union", "intersect", "difference", "complement", "closure"])
        a = rng.choice(pool)
        if op in ("complement", "closure"):
            r = boolean_op(op, a)
        else:
            r = boolean_op(op, a, rng.choice(pool))
        assert isinstance(r, IntervalSet)
        r2 = normalize(r.pieces)
        assert r2 == r  # canonical already
        pool[rng.randrange(len(pool))] = r


def test_b0():
    assert onedim.b0_1d(normalize([("open", F(0), F(1)), ("pt", F(1)), ("open", F(1), F(2))])) == 1
    assert onedim.b0_1d(normalize([("open", F(0), F(1)), ("pt", F(2))])) == 2
    assert onedim.b0_1d(IntervalSet.empty()) == 0


def test_tubes():
    R = IntervalSet.reals()
    ot = tube("open", IS_pt(0), R, F(1, 2))
    assert ot == IS_open(F(-1, 2), F(1, 2))
    bt = tube("boundary", IS_pt(0), R, F(1, 2))
    assert bt == IS_pt(F(-1, 2)).union(IS_pt(F(1, 2)))
    v = IS_closed(-1, 1)
    ann_c = tube("annulus", IS_pt(0), v, F(1, 2), F(1, 4))
    # complement of the annulus within v
    got = v.difference(ann_c)
    want = IS_closed(-1, F(-1, 2)).union(IS_closed(F(-1, 4), F(1, 4))).union(IS_closed(F(1, 2), 1))
    assert got == want
    with pytest.raises(NotClosed):
        tube("open", IS_open(0, 1), R, F(1))
    with pytest.raises(RadiusOrder):
        tube("annulus", IS_pt(0), R, F(1, 4), F(1, 2))
    # identities: BT = CT \ OT, Ann = OT(e1) \ CT(e2)
    rng = random.Random(2)
    for _ in range(200):
        pts = sorted(set(F(rng.randint(-8, 8), rng.randint(1, 3)) for _ in range(rng.randint(1, 4))))
        x = normalize([("pt", p) for p in pts])
        e1 = F(rng.randint(1, 8), rng.randint(4, 9))
        ct = tube("closed", x, R, e1)
        ot = tube("open", x, R, e1)
        bt = tube("boundary", x, R, e1)
        assert ot.is_subset(ct)
        assert bt == ct.difference(ot)
        e2 = e1 / 2
        ann = tube("annulus", x, R, e1, e2)
        assert ann == ot.difference(tube("closed", x, R, e2))


def test_critical_radii():
    out = critical_radii(IS_pt(0), IS_pt(1))
    assert out == [F(1, 2), F(1)]
    assert critical_radii(IS_pt(0), IS_pt(0)) == []
    assert critical_radii(normalize([("pt", F(0)), ("pt", F(1))])) == [F(1, 2)]
    # b0 stability below the smallest critical radius
    x = normalize([("pt", F(0)), ("pt", F(1)), ("closed", F(3), F(4))])
    rmin = onedim.min_positive_critical_radius(x)
    eps = F(rmin) / 2
    ct = tube("closed", x, IntervalSet.reals(), eps)
    assert ct.b0() == x.b0()


def test_critical_radii_algebraic():
    r2 = algebraic.roots_of((-2, 0, 1))[1]  # sqrt 2
    x = IntervalSet.point(r2)
    y = IS_pt(0)
    vals = critical_radii(x, y)
    assert len(vals) == 2
    assert algebraic.cmp(vals[1], F(3, 2)) < 0 and algebraic.cmp(vals[1], F(7, 5)) > 0


def test_arrangement_cells():
    m1 = IS_open(0, 2)
    m2 = IS_open(1, 3)
    cells = arrangement_cells([m1, m2])
    vecs = [v for _, v in cells]
    assert (True, True) in vecs and (True, False) in vecs and (False, True) in vecs
    total = IntervalSet.empty()
    for c, _ in cells:
        assert c.b0() == 1
        total = total.union(c)
    assert total == IntervalSet.reals()
    # restricted to v
    cells_v = arrangement_cells([m1, m2], v=IS_closed(0, 10))
    tot = IntervalSet.empty()
    for c, _ in cells_v:
        tot = tot.union(c)
    assert tot == IS_closed(0, 10)


def test_parse_roundtrip():
    rng = random.Random(4)
    for _ in range(200):
        ps = []
        for _ in range(rng.randint(0, 4)):
            a = F(rng.randint(-9, 9), rng.randint(1, 5))
            b = a + F(rng.randint(1, 7), rng.randint(1, 3))
            ps.append(rng.choice([("pt", a), ("open", a, b), ("closed", a, b)]))
        s = normalize(ps)
        assert parse(onedim.to_text(s)) == s
    assert parse("{(-inf,0] {1} (2,inf)}").b0() == 3
