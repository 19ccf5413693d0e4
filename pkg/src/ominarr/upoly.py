"""Dense univariate polynomials with integer coefficients.

Coefficients are stored low-to-high in a tuple, always stripped of trailing
zeros (the zero polynomial is the empty tuple).  Every routine that only
cares about signs or root sets is free to rescale by positive rationals,
which is what keeps the whole kernel in integer arithmetic.
"""

from __future__ import annotations

import math
from fractions import Fraction

Poly = tuple  # tuple[int, ...], ascending powers


def strip(coeffs) -> Poly:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def from_fractions(coeffs) -> Poly:
    """Clear denominators (positive multiplier only) and return int poly."""
    fr = [Fraction(c) for c in coeffs]
    den = 1
    for c in fr:
        den = den * c.denominator // math.gcd(den, c.denominator)
    return strip(int(c * den) for c in fr)


def degree(f: Poly) -> int:
    return len(f) - 1  # -1 for the zero polynomial


def is_zero(f: Poly) -> bool:
    return len(f) == 0


def constant(c: int) -> Poly:
    return (c,) if c else ()


def lc(f: Poly) -> int:
    return f[-1] if f else 0


def neg(f: Poly) -> Poly:
    return tuple(-c for c in f)


def add(f: Poly, g: Poly) -> Poly:
    if len(f) < len(g):
        f, g = g, f
    out = list(f)
    for i, c in enumerate(g):
        out[i] += c
    return strip(out)


def sub(f: Poly, g: Poly) -> Poly:
    return add(f, neg(g))


def mul(f: Poly, g: Poly) -> Poly:
    if not f or not g:
        return ()
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return strip(out)


def scale(f: Poly, c: int) -> Poly:
    if c == 0:
        return ()
    return tuple(a * c for a in f)


def shift_up(f: Poly, k: int) -> Poly:
    """Multiply by x**k."""
    if not f:
        return ()
    return (0,) * k + tuple(f)


def derivative(f: Poly) -> Poly:
    return strip(i * c for i, c in enumerate(f) if i >= 1) if len(f) > 1 else ()


def eval_fraction(f: Poly, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(f):
        acc = acc * x + c
    return acc


def eval_int(f: Poly, x: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = acc * x + c
    return acc


def sign_at(f: Poly, x: Fraction) -> int:
    """Sign of f(x) for rational x = p/q via the integer f(p/q) * q^deg."""
    if not f:
        return 0
    x = Fraction(x)
    p, q = x.numerator, x.denominator
    acc = 0
    qpow = 1
    for c in reversed(f):  # c_n ... c_0
        acc = acc * p + c * qpow
        qpow *= q
    return (acc > 0) - (acc < 0)


def eval_interval(f: Poly, lo: Fraction, hi: Fraction):
    """Exact interval extension of f over [lo, hi] (Horner)."""
    alo = ahi = Fraction(0)
    for c in reversed(f):
        # [alo,ahi] * [lo,hi]
        p = (alo * lo, alo * hi, ahi * lo, ahi * hi)
        alo, ahi = min(p) + c, max(p) + c
    return alo, ahi


def content(f: Poly) -> int:
    g = 0
    for c in f:
        g = math.gcd(g, c)
    return g


def primitive(f: Poly) -> Poly:
    """Primitive part with positive leading coefficient."""
    if not f:
        return ()
    g = content(f)
    if lc(f) < 0:
        g = -g
    return tuple(c // g for c in f)


def divmod_exact_q(f: Poly, g: Poly):
    """Quotient and remainder of f by g over the rationals."""
    if not g:
        raise ZeroDivisionError
    r = [Fraction(c) for c in f]
    q = [Fraction(0)] * max(len(f) - len(g) + 1, 0)
    dg, lg = degree(g), Fraction(lc(g))
    while len(r) - 1 >= dg and any(r):
        while r and r[-1] == 0:
            r.pop()
        if len(r) - 1 < dg:
            break
        k = len(r) - 1 - dg
        coef = r[-1] / lg
        q[k] = coef
        for i, c in enumerate(g):
            r[k + i] -= coef * c
        r.pop()
    return q, r


def div_exact(f: Poly, g: Poly) -> Poly:
    """Exact division over Q, asserting zero remainder; integer result
    is returned after clearing (result of exact integer division when it
    exists, else the primitive integer multiple)."""
    q, r = divmod_exact_q(f, g)
    if any(r):
        raise ArithmeticError("inexact polynomial division")
    return from_fractions(q)


def rem_cleared(f: Poly, g: Poly) -> Poly:
    """Remainder of f by g, rescaled by a positive rational to integers."""
    _, r = divmod_exact_q(f, g)
    return from_fractions(r)


def gcd(f: Poly, g: Poly) -> Poly:
    """Primitive gcd (positive leading coefficient)."""
    a, b = primitive(f), primitive(g)
    while b:
        a, b = b, primitive(rem_cleared(a, b))
    return a


def squarefree_part(f: Poly) -> Poly:
    d = degree(f)
    if d <= 1:
        return primitive(f)
    if d == 2:
        c, b, a = f
        if b * b - 4 * a * c != 0:
            return primitive(f)
        return primitive((b, 2 * a))
    g = gcd(f, derivative(f))
    if degree(g) == 0:
        return primitive(f)
    return primitive(div_exact(f, g))


def sturm_sequence(f: Poly) -> list[Poly]:
    """Sturm chain of f (f need not be square-free; counts distinct roots)."""
    seq = [f, derivative(f)]
    while seq[-1]:
        r = rem_cleared(seq[-2], seq[-1])
        if not r:
            break
        seq.append(neg(r))
    return [p for p in seq if p]


def _variations(signs) -> int:
    v, prev = 0, 0
    for s in signs:
        if s == 0:
            continue
        if prev and s != prev:
            v += 1
        prev = s
    return v


def sturm_var_at(seq, x: Fraction) -> int:
    return _variations(sign_at(p, x) for p in seq)


def sturm_var_neg_inf(seq) -> int:
    return _variations((-1) ** degree(p) * (1 if lc(p) > 0 else -1) for p in seq)


def sturm_var_pos_inf(seq) -> int:
    return _variations((1 if lc(p) > 0 else -1) for p in seq)


def count_roots_halfopen(seq, a: Fraction, b: Fraction) -> int:
    """Number of distinct real roots in (a, b]."""
    return sturm_var_at(seq, a) - sturm_var_at(seq, b)


def count_roots_all(seq) -> int:
    return sturm_var_neg_inf(seq) - sturm_var_pos_inf(seq)


def root_bound(f: Poly) -> Fraction:
    """Cauchy bound: all real roots lie in (-B, B)."""
    if degree(f) <= 0:
        return Fraction(1)
    m = max(abs(c) for c in f[:-1])
    return 1 + Fraction(m, abs(lc(f)))


def isolate_real_roots(f: Poly) -> list[tuple[Fraction, Fraction]]:
    """Isolating intervals for the distinct real roots of f, sorted.

    Each returned (lo, hi) satisfies: exactly one root in the open
    interval, f(lo) != 0 != f(hi), and sign(f(lo)) != sign(f(hi)).
    """
    f = squarefree_part(f)
    d = degree(f)
    if d <= 0:
        return []
    if d == 1:
        r = Fraction(-f[0], f[1])
        return [(r - 1, r + 1)]
    if d == 2:
        return _isolate_quadratic(f)
    seq = sturm_sequence(f)
    bound = root_bound(f)
    lo = Fraction(math.floor(-bound))
    hi = Fraction(math.ceil(bound))
    while sign_at(f, lo) == 0:
        lo -= 1
    while sign_at(f, hi) == 0:
        hi += 1
    out = []
    stack = [(lo, hi, sturm_var_at(seq, lo), sturm_var_at(seq, hi))]
    while stack:
        a, b, va, vb = stack.pop()
        n = va - vb
        if n == 0:
            continue
        if n == 1 and sign_at(f, a) != sign_at(f, b):
            out.append((a, b))
            continue
        mid = (a + b) / 2
        if sign_at(f, mid) == 0:
            # exact hit: isolate the rational root tightly on both sides
            eps = (b - a) / (4 * max(1, count_roots_halfopen(seq, a, b)))
            l2, r2 = mid - eps, mid + eps
            while sign_at(f, l2) == 0 or count_roots_halfopen(seq, l2, r2) > 1:
                eps /= 2
                l2, r2 = mid - eps, mid + eps
            while sign_at(f, r2) == 0:
                r2 = (mid + r2) / 2
            out.append((l2, r2))
            vl, vr = sturm_var_at(seq, l2), sturm_var_at(seq, r2)
            stack.append((a, l2, va, vl))
            stack.append((r2, b, vr, vb))
        else:
            vm = sturm_var_at(seq, mid)
            stack.append((a, mid, va, vm))
            stack.append((mid, b, vm, vb))
    out.sort(key=lambda iv: iv[0])
    return out


def _isolate_quadratic(f: Poly) -> list[tuple[Fraction, Fraction]]:
    c, b, a = Fraction(f[0]), Fraction(f[1]), Fraction(f[2])
    disc = b * b - 4 * a * c
    if disc <= 0:
        return []  # square-free quadratic: disc == 0 impossible
    from .numeric import sqrt_interval

    bits = 8
    while True:
        slo, shi = sqrt_interval(disc, bits)
        two_a = 2 * a
        ivs = []
        for nlo, nhi in ((-b - shi, -b - slo), (-b + slo, -b + shi)):
            lo, hi = nlo / two_a, nhi / two_a
            if lo > hi:
                lo, hi = hi, lo
            ivs.append((lo, hi))
        ivs.sort()
        if ivs[0][1] < ivs[1][0]:
            break
        bits *= 2
        if bits > 256:  # roots extremely close; give up on the fast path
            return _bisect_fallback(f)
    gap = ivs[1][0] - ivs[0][1]
    delta = gap / 2
    out = []
    for lo, hi in ivs:
        slo_s, shi_s = sign_at(f, lo), sign_at(f, hi)
        if slo_s == 0:  # the root is exactly the rational lo
            out.append((lo - delta, lo + delta))
        elif shi_s == 0:
            out.append((hi - delta, hi + delta))
        elif slo_s != shi_s:
            out.append((lo, hi))
        else:
            return _bisect_fallback(f)
    return out


def _bisect_fallback(f):
    seq = sturm_sequence(f)
    bound = root_bound(f)
    lo, hi = Fraction(math.floor(-bound)), Fraction(math.ceil(bound))
    out = []
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        n = count_roots_halfopen(seq, a, b)
        if n == 0:
            continue
        if n == 1 and sign_at(f, a) != sign_at(f, b) and sign_at(f, b) != 0:
            out.append((a, b))
            continue
        mid = (a + b) / 2
        if sign_at(f, mid) == 0:
            mid += (b - a) / (1 << 12)
        stack.append((a, mid))
        stack.append((mid, b))
    out.sort()
    return out


def compose_shift(f: Poly, q: Fraction) -> Poly:
    """Integer rescaling of f(x + q) (Horner-style Taylor shift)."""
    q = Fraction(q)
    res = [Fraction(0)]
    for c in reversed(f):
        new = [Fraction(0)] * (len(res) + 1)
        for i, rc in enumerate(res):
            new[i + 1] += rc
            new[i] += rc * q
        new[0] += c
        res = new
    return from_fractions(res)


def reflect(f: Poly) -> Poly:
    """f(-x), normalized to positive leading coefficient."""
    return primitive(tuple((-1) ** i * c for i, c in enumerate(f)))
