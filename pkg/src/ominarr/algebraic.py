"""Real algebraic numbers as (square-free integer polynomial, isolating
interval) pairs, with exact comparison against rationals and each other.

Rationals are kept as plain ``Fraction``; ``Num = Fraction | RealAlg``.
Comparisons refine isolating intervals by bisection and settle genuine
ties exactly through polynomial gcds, so every decision is exact.
"""

from __future__ import annotations

import functools
from fractions import Fraction

from . import upoly
from .errors import EngineAssertionFailure


class RealAlg:
    """A single real root of a square-free integer polynomial.

    Invariant: exactly one root of ``poly`` lies in the open interval
    (lo, hi), and poly(lo), poly(hi) are nonzero with opposite signs.
    The interval is refined in place; the represented number never changes.
    """

    __slots__ = ("poly", "lo", "hi", "_slo")

    def __init__(self, poly, lo: Fraction, hi: Fraction):
        self.poly = poly
        self.lo = Fraction(lo)
        self.hi = Fraction(hi)
        self._slo = upoly.sign_at(poly, self.lo)
        if self._slo == 0 or self._slo == upoly.sign_at(poly, self.hi):
            raise EngineAssertionFailure("bad isolating interval")

    def refine(self, rounds: int = 1) -> None:
        for _ in range(rounds):
            mid = (self.lo + self.hi) / 2
            s = upoly.sign_at(self.poly, mid)
            if s == 0:
                # the root is exactly mid; shrink symmetrically around it
                w = (self.hi - self.lo) / 4
                self.lo, self.hi = mid - w, mid + w
                self._slo = upoly.sign_at(self.poly, self.lo)
                continue
            if s == self._slo:
                self.lo = mid
            else:
                self.hi = mid

    def refine_below(self, width: Fraction) -> None:
        while self.hi - self.lo > width:
            self.refine()

    def as_rational(self) -> Fraction | None:
        """Exact rational value if this root is rational, else None."""
        mid = (self.lo + self.hi) / 2
        if upoly.sign_at(self.poly, mid) == 0:
            return mid
        return None

    def __float__(self) -> float:
        self.refine_below(Fraction(1, 1 << 40))
        return float((self.lo + self.hi) / 2)

    def __repr__(self):
        return f"RealAlg(~{float(self):.6g})"


Num = object  # documentation alias: Fraction | RealAlg


def cmp_rational(a: RealAlg, q: Fraction) -> int:
    if q <= a.lo:
        return 1
    if q >= a.hi:
        return -1
    s = upoly.sign_at(a.poly, q)
    if s == 0:
        return 0
    return 1 if s == a._slo else -1


def _cmp_alg(a: RealAlg, b: RealAlg) -> int:
    if a is b:
        return 0
    tried_gcd = False
    while True:
        if a.hi <= b.lo:
            return -1
        if b.hi <= a.lo:
            return 1
        if not tried_gcd:
            tried_gcd = True
            g = upoly.gcd(a.poly, b.poly)
            if upoly.degree(g) >= 1:
                lo = max(a.lo, b.lo)
                hi = min(a.hi, b.hi)
                seq = upoly.sturm_sequence(g)
                if upoly.count_roots_halfopen(seq, lo, hi) >= 1:
                    return 0
        a.refine()
        b.refine()


def cmp(a, b) -> int:
    """Exact three-way comparison of Fraction | RealAlg values."""
    ar, br = isinstance(a, RealAlg), isinstance(b, RealAlg)
    if not ar and not br:
        return (a > b) - (a < b)
    if ar and not br:
        return cmp_rational(a, Fraction(b))
    if br and not ar:
        return -cmp_rational(b, Fraction(a))
    return _cmp_alg(a, b)


sort_key = functools.cmp_to_key(cmp)


def eq(a, b) -> bool:
    return cmp(a, b) == 0


def to_float(a) -> float:
    return float(a)


def canonicalize(a):
    """Collapse a RealAlg that happens to be rational to a Fraction."""
    if isinstance(a, RealAlg):
        r = a.as_rational()
        if r is not None:
            return r
    return a


def sign_at_alg(g, a: RealAlg) -> int:
    """Exact sign of the integer polynomial g at the algebraic number a.

    Interval evaluation first (the common case); the exact zero test via
    a gcd runs only when the enclosure keeps straddling zero.
    """
    if upoly.is_zero(g):
        return 0
    if upoly.degree(g) == 0:
        return 1 if g[0] > 0 else -1
    for _ in range(3):
        lo, hi = upoly.eval_interval(g, a.lo, a.hi)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        a.refine()
    h = upoly.gcd(g, a.poly)
    if upoly.degree(h) >= 1:
        seq = upoly.sturm_sequence(h)
        if upoly.count_roots_halfopen(seq, a.lo, a.hi) >= 1:
            return 0
    while True:
        lo, hi = upoly.eval_interval(g, a.lo, a.hi)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        a.refine()


def sign_of(g, a) -> int:
    """Sign of integer polynomial g at a Fraction or RealAlg point."""
    if isinstance(a, RealAlg):
        return sign_at_alg(g, a)
    return upoly.sign_at(g, Fraction(a))


def add_rational(a, q: Fraction):
    """a + q for a Fraction | RealAlg."""
    q = Fraction(q)
    if not isinstance(a, RealAlg):
        return Fraction(a) + q
    if q == 0:
        return a
    return RealAlg(upoly.compose_shift(a.poly, -q), a.lo + q, a.hi + q)


def negate(a):
    if not isinstance(a, RealAlg):
        return -Fraction(a)
    return RealAlg(upoly.reflect(a.poly), -a.hi, -a.lo)


def subtract(a, b):
    """Exact a - b for Fraction | RealAlg operands."""
    ar, br = isinstance(a, RealAlg), isinstance(b, RealAlg)
    if not ar and not br:
        return Fraction(a) - Fraction(b)
    if ar and not br:
        return add_rational(a, -Fraction(b))
    if br and not ar:
        return negate(add_rational(b, -Fraction(a)))
    from . import bipoly

    # Polynomial with root a-b: Res_z(f(z), g(z - x)); z plays the roles of
    # "y" for the resultant routine.
    f, g = a.poly, b.poly
    terms = []
    for t, c in enumerate(f):
        if c:
            terms.append((0, t, c))
    fb = bipoly.from_terms(terms)
    terms = []
    from math import comb

    for j, gj in enumerate(g):
        if not gj:
            continue
        for t in range(j + 1):
            coef = gj * comb(j, t) * (-1) ** (j - t)
            terms.append((j - t, t, coef))
    gb = bipoly.from_terms(terms)
    h = upoly.squarefree_part(bipoly.resultant_y(fb, gb))
    seq = upoly.sturm_sequence(h)
    while True:
        lo = a.lo - b.hi
        hi = a.hi - b.lo
        if (
            upoly.sign_at(h, lo) != 0
            and upoly.sign_at(h, hi) != 0
            and upoly.count_roots_halfopen(seq, lo, hi) == 1
            and upoly.sign_at(h, lo) != upoly.sign_at(h, hi)
        ):
            return canonicalize(RealAlg(h, lo, hi))
        a.refine()
        b.refine()


def roots_of(f) -> list:
    """Sorted real roots of an integer polynomial as Fractions/RealAlgs."""
    f = upoly.squarefree_part(f)
    if upoly.degree(f) == 1:
        return [Fraction(-f[0], f[1])]
    out = []
    for lo, hi in upoly.isolate_real_roots(f):
        out.append(canonicalize(RealAlg(f, lo, hi)))
    return out


def separate(nums: list, pad: bool = False) -> None:
    """Refine RealAlg entries of a sorted-distinct list until the isolating
    intervals are pairwise disjoint (so rational samples exist between
    consecutive numbers)."""

    def lo_of(a):
        return a.lo if isinstance(a, RealAlg) else a

    def hi_of(a):
        return a.hi if isinstance(a, RealAlg) else a

    for i in range(len(nums) - 1):
        a, b = nums[i], nums[i + 1]
        while not hi_of(a) < lo_of(b):
            if isinstance(a, RealAlg):
                a.refine()
            if isinstance(b, RealAlg):
                b.refine()
            if not (isinstance(a, RealAlg) or isinstance(b, RealAlg)):
                raise EngineAssertionFailure("equal rationals in separate()")


def sample_points(sorted_nums: list) -> list[Fraction]:
    """Rational samples: one strictly below, one strictly between each
    consecutive pair, one strictly above (for N numbers: N+1 samples)."""
    from .numeric import simplest_between

    if not sorted_nums:
        return [Fraction(0)]
    separate(sorted_nums)

    def lo_of(a):
        return a.lo if isinstance(a, RealAlg) else a

    def hi_of(a):
        return a.hi if isinstance(a, RealAlg) else a

    import math

    out = [Fraction(math.floor(lo_of(sorted_nums[0])) - 1)]
    for i in range(len(sorted_nums) - 1):
        out.append(simplest_between(hi_of(sorted_nums[i]), lo_of(sorted_nums[i + 1])))
    out.append(Fraction(math.ceil(hi_of(sorted_nums[-1])) + 1))
    return out
