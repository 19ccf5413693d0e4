"""Fibered product formulas, exact component counts for orders 0 and 1,
image computation, and the image-Betti inequality."""

import random
from fractions import Fraction as F

import pytest

from ominarr.errors import NotClosedBounded, UnsupportedEngine
from ominarr.family import Atom, MPoly, circle_member, member_from_mpoly
from ominarr.projection import (
    fibered_product_b0_curve,
    fibered_product_formula,
    project_image,
    projection_bound,
    projection_inequality_check,
)
from ominarr.onedim import IntervalSet


def atoms_of(formula):
    from ominarr.family import formula_atoms

    return [n[1] for n in formula_atoms(formula)]


def test_formula_order_zero_identity():
    circ = circle_member(0, 0, 1).formula_x
    w0 = fibered_product_formula(circ, 1, 1, 0, n_members=1)
    assert w0.formula == circ
    assert w0.n_members == 1


def test_formula_order_one_substitution():
    # circle x^2 + z^2 = 1 with k1 = 1 (x), k2 = 1 (z)
    x, z = MPoly.var(2, 0), MPoly.var(2, 1)
    p = x * x + z * z - MPoly.const(2, 1)
    w1 = fibered_product_formula(("atom", Atom(p, "=")), 1, 1, 1, n_members=1)
    assert w1.n_members == 2
    ats = atoms_of(w1.formula)
    assert len(ats) == 2
    # copies: x0^2 + z^2 - 1 and x1^2 + z^2 - 1 in variables (x0, x1, z)
    keys = [tuple(sorted(a.poly.terms)) for a in ats]
    assert keys[0] != keys[1]
    for a in ats:
        assert a.poly.nvars == 3
        assert (0, 0, 2) in a.poly.terms  # shared z^2 block
    w2 = fibered_product_formula(("atom", Atom(p, "=")), 1, 1, 2, n_members=4)
    assert w2.n_members == 12
    assert len(atoms_of(w2.formula)) == 3


def test_unit_circle_products():
    members = [circle_member(0, 0, 1)]
    assert fibered_product_b0_curve(members, 0) == 1
    # four sign branches glue at the two poles of the shared axis
    assert fibered_product_b0_curve(members, 1) == 1


def test_two_circles_stacked():
    # same projection range on the shared axis, far apart on the other
    members = [circle_member(0, 0, 1), circle_member(10, 0, 1)]
    assert fibered_product_b0_curve(members, 0) == 2
    b = fibered_product_b0_curve(members, 1)
    # brute gluing: same-circle pairs are connected; cross pairs (i from
    # one circle, j from the other) glue into two more components
    assert b == 4
    # disjoint shared-axis ranges: no cross pairs at all
    members = [circle_member(0, 0, 1), circle_member(0, 10, 1)]
    assert fibered_product_b0_curve(members, 0) == 2
    assert fibered_product_b0_curve(members, 1) == 2


def test_image_and_inequality():
    members = [circle_member(0, 0, 1)]
    y = project_image(members)
    assert y == IntervalSet.closed(F(-1), F(1))
    rep = projection_inequality_check(members)
    assert rep.all_ok()
    assert rep.rows[0] == (0, 1, 1, True)
    assert rep.rows[1][2] == 1 + 1  # b1(source) + b0(order-1 product)
    # two separated segments: b0(Y) = 2 <= b0(W0) = 2
    from ominarr.family import segment_member

    members = [segment_member((0, 0), (1, 0)), segment_member((0, 5), (1, 5))]
    with pytest.raises(UnsupportedEngine):
        projection_inequality_check(members)  # segments are 3-atom members
    # use thin circles far apart instead
    members = [circle_member(0, 0, 1), circle_member(0, 10, 1)]
    rep = projection_inequality_check(members)
    assert rep.rows[0] == (0, 2, 2, True)
    csv_text = rep.to_csv("demo")
    assert csv_text.splitlines()[0] == "instance_id,q,lhs,rhs,pass"


def test_unbounded_rejected():
    x, y = MPoly.var(2, 0), MPoly.var(2, 1)
    with pytest.raises(NotClosedBounded):
        fibered_product_b0_curve([member_from_mpoly(y - x)], 1)


def test_random_circle_unions_inequality():
    rng = random.Random(23)
    for _ in range(40):
        n = rng.randint(1, 3)
        members = [
            circle_member(F(rng.randint(-6, 6), 2), F(rng.randint(-6, 6), 2), F(rng.randint(1, 5), 2))
            for _ in range(n)
        ]
        rep = projection_inequality_check(members)
        assert rep.all_ok()
        # the image never has more components than the source
        y = project_image(members)
        sx_b0 = rep.rows[0][2]
        assert y.b0() <= sx_b0


def test_projection_bound():
    assert projection_bound(1, 1, 1, 7) == 7
    assert projection_bound(10, 1, 1, 2) == 200
    assert projection_bound(3, 2, 2, 1) == 729
    with pytest.raises(UnsupportedEngine):
        projection_bound(0, 1, 1, 1)
