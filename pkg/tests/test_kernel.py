"""Kernel sanity: integer polynomials, root isolation, algebraic numbers,
resultants (cross-checked against sympy), and number-field fibers."""

import random
from fractions import Fraction

import pytest
import sympy

from ominarr import algebraic, bipoly, numberfield, upoly
from ominarr.numeric import exp_enclosure, simplest_between

x_s, y_s = sympy.symbols("x y")


def to_sympy_u(f):
    return sum(c * x_s**i for i, c in enumerate(f))


def to_sympy_bi(p):
    return sum(c * x_s**i * y_s**j for j, row in enumerate(p) for i, c in enumerate(row))


def test_basic_arith():
    f = (1, 2, 3)  # 3x^2+2x+1
    g = (0, 1)  # x
    assert upoly.mul(f, g) == (0, 1, 2, 3)
    assert upoly.add(f, upoly.neg(f)) == ()
    assert upoly.derivative(f) == (2, 6)
    assert upoly.sign_at(f, Fraction(-1)) == 1
    assert upoly.eval_fraction(f, Fraction(1, 2)) == Fraction(11, 4)


def test_gcd_and_squarefree():
    rng = random.Random(7)
    for _ in range(50):
        a = tuple(rng.randint(-5, 5) for _ in range(rng.randint(1, 4)))
        b = tuple(rng.randint(-5, 5) for _ in range(rng.randint(1, 4)))
        a, b = upoly.strip(a), upoly.strip(b)
        if upoly.is_zero(a) or upoly.is_zero(b):
            continue
        g = upoly.gcd(a, b)
        sg = sympy.gcd(sympy.Poly(to_sympy_u(a), x_s), sympy.Poly(to_sympy_u(b), x_s))
        assert upoly.degree(g) == sympy.Poly(sg, x_s).degree()
        assert sympy.rem(to_sympy_u(a), to_sympy_u(g), x_s) == 0
        assert sympy.rem(to_sympy_u(b), to_sympy_u(g), x_s) == 0
    f = upoly.mul((1, 1), upoly.mul((1, 1), (-2, 1)))  # (x+1)^2 (x-2)
    sf = upoly.squarefree_part(f)
    assert set(algebraic.roots_of(sf)) and upoly.degree(sf) == 2


def test_root_isolation_matches_sympy():
    rng = random.Random(3)
    for _ in range(60):
        deg = rng.randint(1, 5)
        f = upoly.strip([rng.randint(-8, 8) for _ in range(deg + 1)])
        if upoly.degree(f) < 1:
            continue
        mine = algebraic.roots_of(f)
        theirs = sympy.Poly(to_sympy_u(f), x_s).real_roots()
        distinct = []
        for r in theirs:
            if not distinct or sympy.simplify(distinct[-1] - r) != 0:
                distinct.append(r)
        assert len(mine) == len(distinct)
        for a, b in zip(mine, distinct):
            assert abs(float(a) - float(b.evalf(30))) < 1e-8


def test_algebraic_compare_and_sign():
    r2 = algebraic.roots_of((-2, 0, 1))[1]  # sqrt(2)
    r3 = algebraic.roots_of((-3, 0, 1))[1]  # sqrt(3)
    assert algebraic.cmp(r2, r3) == -1
    assert algebraic.cmp(r2, Fraction(3, 2)) == -1
    assert algebraic.cmp(r2, Fraction(7, 5)) == 1
    # equality through different defining polynomials
    r2b = algebraic.roots_of((-4, 0, 0, 0, 1))[1]  # x^4 = 4 -> sqrt(2)
    assert algebraic.cmp(r2, r2b) == 0
    # sign of x^2-2 at sqrt(2) is 0; of x^2-3 is negative
    assert algebraic.sign_of((-2, 0, 1), r2) == 0
    assert algebraic.sign_of((-3, 0, 1), r2) == -1
    assert algebraic.sign_of((0, 1), r2) == 1
    # shift arithmetic
    s = algebraic.add_rational(r2, Fraction(1, 3))
    assert algebraic.cmp(s, r2) == 1
    assert algebraic.sign_of((-2, 0, 1), algebraic.add_rational(s, Fraction(-1, 3))) == 0


def test_sample_points_and_simplest():
    assert simplest_between(Fraction(1, 3), Fraction(1, 2)) == Fraction(2, 5)
    assert simplest_between(Fraction(-1), Fraction(1)) == 0
    nums = sorted(
        algebraic.roots_of((-2, 0, 1)) + [Fraction(0)] + algebraic.roots_of((-3, 0, 1)),
        key=algebraic.sort_key,
    )
    samples = algebraic.sample_points(nums)
    assert len(samples) == len(nums) + 1
    for i, n in enumerate(nums):
        assert algebraic.cmp(samples[i], n) == -1
        assert algebraic.cmp(samples[i + 1], n) == 1


def test_resultant_matches_sympy():
    rng = random.Random(11)
    for _ in range(40):
        p = bipoly.from_terms(
            (rng.randint(0, 2), rng.randint(0, 2), rng.randint(-4, 4)) for _ in range(5)
        )
        q = bipoly.from_terms(
            (rng.randint(0, 2), rng.randint(0, 2), rng.randint(-4, 4)) for _ in range(5)
        )
        if bipoly.deg_y(p) < 1 or bipoly.deg_y(q) < 1:
            continue
        r = bipoly.resultant_y(p, q)
        rs = sympy.resultant(to_sympy_bi(p), to_sympy_bi(q), y_s)
        assert sympy.simplify(to_sympy_u(r) - rs) == 0


def test_bipoly_eval_and_swap():
    circ = bipoly.from_terms([(2, 0, 1), (0, 2, 1), (0, 0, -1)])  # x^2+y^2-1
    assert bipoly.sign_at(circ, Fraction(0), Fraction(0)) == -1
    assert bipoly.sign_at(circ, Fraction(3, 5), Fraction(4, 5)) == 0
    assert bipoly.sign_at(circ, Fraction(2), Fraction(0)) == 1
    assert bipoly.swap_xy(circ) == circ
    f = bipoly.eval_x(circ, Fraction(1, 2))  # y^2 - 3/4 scaled
    roots = algebraic.roots_of(f)
    assert len(roots) == 2


def test_fiber_over_algebraic_point():
    # alpha = sqrt(2); fiber of circle x^2+y^2-4 at x=alpha: y^2 - 2
    alpha = algebraic.roots_of((-2, 0, 1))[1]
    ctx = numberfield.FieldCtx(alpha)
    circ = bipoly.from_terms([(2, 0, 1), (0, 2, 1), (0, 0, -4)])
    coeffs = [ctx.from_upoly(row) for row in circ]
    f = numberfield.FiberPoly(ctx, coeffs)
    assert f.deg == 2
    roots = numberfield.isolate_fiber_roots(f)
    assert len(roots) == 2
    # roots are +-sqrt(2) again
    assert roots[0].cmp_rational(Fraction(-3, 2)) == 1
    assert roots[0].cmp_rational(Fraction(-1)) == -1
    assert roots[1].cmp_rational(Fraction(1)) == 1
    mu = numberfield.multiplicity(f, roots[1])
    assert mu == 1
    # tangent fiber: at x=alpha the circle x^2+y^2-2 has a double root y=0
    circ2 = bipoly.from_terms([(2, 0, 1), (0, 2, 1), (0, 0, -2)])
    f2 = numberfield.FiberPoly(ctx, [ctx.from_upoly(row) for row in circ2])
    roots2 = numberfield.isolate_fiber_roots(f2)
    assert len(roots2) == 1
    assert roots2[0].cmp_rational(Fraction(0)) == 0
    assert numberfield.multiplicity(f2, roots2[0]) == 2
    # cross-fiber comparison: same geometric root detected equal
    g = numberfield.FiberPoly(ctx, [ctx.from_upoly(row) for row in circ])
    groots = numberfield.isolate_fiber_roots(g)
    assert numberfield.cmp_fiber_roots(roots[0], groots[0]) == 0
    assert numberfield.cmp_fiber_roots(roots[0], groots[1]) == -1
    samples = numberfield.gap_samples(roots + [])
    assert len(samples) == 3


def test_exp_enclosure():
    lo, hi = exp_enclosure(Fraction(1), 30)
    import math

    assert float(lo) - 1e-12 < math.e < float(hi) + 1e-12
    assert hi - lo < Fraction(1, 10**20)
    lo1, hi1 = exp_enclosure(Fraction(1), 1)
    assert hi1 - lo1 > Fraction(1, 100)  # deliberately coarse
