"""Small exact-rational helpers used throughout the kernel.

Everything here is pure ``fractions.Fraction`` / ``int`` arithmetic; no
floating point enters any decision path.
"""

from __future__ import annotations

import math
from fractions import Fraction

QQ = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """Rational with the smallest denominator strictly between lo and hi.

    Stern-Brocot / continued-fraction descent.  Keeping sample points
    simple is what keeps the exact arithmetic downstream fast.
    """
    if not lo < hi:
        raise ValueError("need lo < hi")
    if lo < 0 < hi:
        return ZERO
    if hi <= 0:
        return -simplest_between(-hi, -lo)
    # 0 <= lo < hi
    fl = math.floor(lo)
    if Fraction(fl + 1) < hi:
        return Fraction(fl + 1)
    # lo and hi share their integer part fl
    lo2, hi2 = lo - fl, hi - fl
    if lo2 == 0:
        # answer fl + 1/(floor(1/hi2)+1)
        return fl + Fraction(1, math.floor(1 / hi2) + 1)
    inner = simplest_between(1 / hi2, 1 / lo2)
    return fl + 1 / inner


def simplest_in_closed(lo: Fraction, hi: Fraction) -> Fraction:
    """Simplest rational in [lo, hi] (lo <= hi)."""
    if lo == hi:
        return lo
    if lo <= 0 <= hi:
        return ZERO
    if math.ceil(lo) <= hi:
        if lo > 0:
            return Fraction(math.ceil(lo))
        return Fraction(math.floor(hi))
    return simplest_between(lo, hi)


def sqrt_interval(value: Fraction, scale_bits: int = 16) -> tuple[Fraction, Fraction]:
    """Enclosure [lo, hi] of sqrt(value), width <= 2**-scale_bits * hi-ish.

    value must be >= 0.  Uses integer sqrt on a scaled numerator so the
    result endpoints stay dyadic-times-rational.
    """
    if value < 0:
        raise ValueError("negative radicand")
    if value == 0:
        return ZERO, ZERO
    num, den = value.numerator, value.denominator
    shift = 1 << (2 * scale_bits)
    # sqrt(num/den) = sqrt(num*den) / den
    s = math.isqrt(num * den * shift)
    lo = Fraction(s, den << scale_bits)
    hi = Fraction(s + 1, den << scale_bits)
    return lo, hi


def interval_add(a, b):
    return (a[0] + b[0], a[1] + b[1])


def interval_neg(a):
    return (-a[1], -a[0])


def interval_mul(a, b):
    p = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return (min(p), max(p))


def interval_scale(a, c: Fraction):
    if c >= 0:
        return (a[0] * c, a[1] * c)
    return (a[1] * c, a[0] * c)


def interval_pow(a, n: int):
    if n == 0:
        return (ONE, ONE)
    out = a
    for _ in range(n - 1):
        out = interval_mul(out, a)
    return out


def interval_sign(a) -> int | None:
    """Sign if determined by the enclosure, else None."""
    if a[0] > 0:
        return 1
    if a[1] < 0:
        return -1
    if a[0] == a[1] == 0:
        return 0
    return None


def exp_enclosure(x: Fraction, terms: int) -> tuple[Fraction, Fraction]:
    """Exact rational enclosure of exp(x) by Taylor series plus a tail bound.

    ``terms`` plays the role of the precision parameter: more terms give a
    tighter enclosure.  Valid for any rational x; the tail bound requires
    terms to exceed |x|, which is bumped internally if necessary.
    """
    n = max(terms, 1)
    ax = abs(x)
    while Fraction(n + 1) <= 2 * ax:
        n += 1
    s = ZERO
    term = ONE
    for i in range(n):
        s += term
        term = term * x / (i + 1)
    # |tail| <= |term| * 1/(1 - |x|/(n+1)) with |x|/(n+1) <= 1/2
    tail = abs(term) * 2
    return s - tail, s + tail


def exp_interval(lo: Fraction, hi: Fraction, terms: int) -> tuple[Fraction, Fraction]:
    """Enclosure of exp over [lo, hi]; exp is monotone."""
    a, _ = exp_enclosure(lo, terms)
    _, b = exp_enclosure(hi, terms)
    return a, b
