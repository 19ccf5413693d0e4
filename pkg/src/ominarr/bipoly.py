"""Bivariate integer polynomials p(x, y), stored as a tuple of univariate
x-polynomials indexed by the power of y (ascending, stripped).

Resultants with respect to y are computed by evaluation/interpolation with
fraction-free Bareiss determinants, which is plenty for the small degrees
this workbench works at.
"""

from __future__ import annotations

from fractions import Fraction

from . import upoly

BiPoly = tuple  # tuple[upoly.Poly, ...], index = y-degree


def strip(rows) -> BiPoly:
    r = [tuple(p) for p in rows]
    while r and upoly.is_zero(r[-1]):
        r.pop()
    return tuple(r)


def is_zero(p: BiPoly) -> bool:
    return len(p) == 0


def deg_y(p: BiPoly) -> int:
    return len(p) - 1


def deg_x(p: BiPoly) -> int:
    return max((upoly.degree(c) for c in p), default=-1)


def from_terms(terms) -> BiPoly:
    """terms: iterable of (i, j, coeff) meaning coeff * x**i * y**j."""
    terms = list(terms)
    if not terms:
        return ()
    maxj = max(t[1] for t in terms)
    maxi = max(t[0] for t in terms)
    rows = [[Fraction(0)] * (maxi + 1) for _ in range(maxj + 1)]
    for i, j, c in terms:
        rows[j][i] += Fraction(c)
    den = 1
    for row in rows:
        for c in row:
            den = den * c.denominator // _gcd(den, c.denominator)
    return strip(tuple(upoly.strip(int(c * den) for c in row)) for row in rows)


def _gcd(a, b):
    import math

    return math.gcd(a, b)


def add(p: BiPoly, q: BiPoly) -> BiPoly:
    n = max(len(p), len(q))
    rows = []
    for j in range(n):
        a = p[j] if j < len(p) else ()
        b = q[j] if j < len(q) else ()
        rows.append(upoly.add(a, b))
    return strip(rows)


def neg(p: BiPoly) -> BiPoly:
    return tuple(upoly.neg(c) for c in p)


def mul(p: BiPoly, q: BiPoly) -> BiPoly:
    if not p or not q:
        return ()
    rows = [()] * (len(p) + len(q) - 1)
    for j, a in enumerate(p):
        if upoly.is_zero(a):
            continue
        for k, b in enumerate(q):
            rows[j + k] = upoly.add(rows[j + k], upoly.mul(a, b))
    return strip(rows)


def d_dy(p: BiPoly) -> BiPoly:
    return strip(upoly.scale(p[j], j) for j in range(1, len(p)))


def d_dx(p: BiPoly) -> BiPoly:
    return strip(upoly.derivative(c) for c in p)


def swap_xy(p: BiPoly) -> BiPoly:
    """p(y, x): exchange the roles of the two variables."""
    dx = deg_x(p)
    rows = [[0] * len(p) for _ in range(dx + 1)]
    for j, c in enumerate(p):
        for i, a in enumerate(c):
            rows[i][j] = a
    return strip(tuple(upoly.strip(r)) for r in rows)


def eval_y(p: BiPoly, y: Fraction):
    """p(x, y0) as an integer upoly (positive rescaling)."""
    y = Fraction(y)
    num, den = y.numerator, y.denominator
    n = len(p)
    acc = ()
    # sum_j c_j(x) * num^j * den^(n-1-j)
    for j, c in enumerate(p):
        acc = upoly.add(acc, upoly.scale(c, num**j * den ** (n - 1 - j)))
    return upoly.primitive(acc) if acc else ()


def eval_x(p: BiPoly, x: Fraction):
    """p(x0, y) as an integer upoly in y (positive rescaling).

    Clears x = u/v directly by v**deg_x, staying in integer arithmetic.
    """
    x = Fraction(x)
    u, v = x.numerator, x.denominator
    d = deg_x(p)
    vals = []
    for c in p:
        # c(u/v) * v^d as an integer
        acc = 0
        vpow = v ** (d - len(c) + 1) if c else 0
        for coef in reversed(c):
            acc = acc * u + coef * vpow
            vpow *= v
        vals.append(acc)
    return upoly.strip(vals)


def eval_xy(p: BiPoly, x: Fraction, y: Fraction) -> Fraction:
    return upoly.eval_fraction(eval_x_exact(p, x), Fraction(y))


def eval_x_exact(p: BiPoly, x: Fraction):
    """p(x0, y) with exact Fraction coefficients (no rescaling)."""
    return [upoly.eval_fraction(c, x) for c in p]


def sign_at(p: BiPoly, x: Fraction, y: Fraction) -> int:
    v = eval_xy(p, x, y)
    return (v > 0) - (v < 0)


def lc_y(p: BiPoly):
    """Leading coefficient w.r.t. y, an x-polynomial."""
    return p[-1] if p else ()


def content_y(p: BiPoly):
    """gcd of the y-coefficients: x-polynomial whose roots give vertical
    lines contained in the zero set."""
    g = ()
    for c in p:
        g = upoly.gcd(g, c) if g else upoly.primitive(c)
    return g


def primitive_y(p: BiPoly) -> BiPoly:
    g = content_y(p)
    if upoly.degree(g) < 1 and (not g or abs(g[0]) == 1):
        if g and g[0] == -1:
            return neg(p)
        return p
    return tuple(upoly.div_exact(c, g) if c else () for c in p)


def _bareiss_det(m) -> int:
    """Fraction-free determinant of a square integer matrix."""
    n = len(m)
    if n == 0:
        return 1
    a = [row[:] for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _sylvester_det_at(p: BiPoly, q: BiPoly, x0: int) -> int:
    pu = [upoly.eval_int(c, x0) for c in p]
    qu = [upoly.eval_int(c, x0) for c in q]
    dp, dq = len(pu) - 1, len(qu) - 1
    n = dp + dq
    m = [[0] * n for _ in range(n)]
    for r in range(dq):
        for i, c in enumerate(reversed(pu)):
            m[r][r + i] = c
    for r in range(dp):
        for i, c in enumerate(reversed(qu)):
            m[dq + r][r + i] = c
    return _bareiss_det(m)


def resultant_y(p: BiPoly, q: BiPoly):
    """Res_y(p, q) as an integer upoly in x.

    Degrees <= 2 use the closed Sylvester forms; higher degrees go through
    evaluation/interpolation of the formal Sylvester determinant (built
    from full coefficient rows, so leading-coefficient vanishing at sample
    points cannot corrupt the specialization).
    """
    if is_zero(p) or is_zero(q):
        return ()
    if deg_y(p) == 0:
        return _pow_upoly(p[0], deg_y(q)) if deg_y(q) >= 0 else (1,)
    if deg_y(q) == 0:
        return _pow_upoly(q[0], deg_y(p))
    if deg_y(p) <= 2 and deg_y(q) <= 2:
        return _resultant_small(p, q)
    dbound = deg_x(p) * deg_y(q) + deg_x(q) * deg_y(p)
    xs = list(range(-(dbound // 2), dbound - dbound // 2 + 1))
    vals = [Fraction(_sylvester_det_at(p, q, x0)) for x0 in xs]
    return _interpolate(xs, vals)


def _resultant_small(p: BiPoly, q: BiPoly):
    um, us, ua = upoly.mul, upoly.sub, upoly.add
    if deg_y(p) == 1 and deg_y(q) == 1:
        (b1, a1), (b2, a2) = p, q
        return us(um(a1, b2), um(a2, b1))
    if deg_y(p) == 1 or deg_y(q) == 1:
        if deg_y(p) == 1:
            (e, d), (c, b, a) = p, q
        else:
            (e, d), (c, b, a) = q, p
        # Res(ay^2+by+c, dy+e) = a e^2 - b d e + c d^2
        return ua(us(um(a, um(e, e)), um(b, um(d, e))), um(c, um(d, d)))
    (c1, b1, a1), (c2, b2, a2) = p, q
    # Res = (a1 c2 - a2 c1)^2 - (a1 b2 - a2 b1)(b1 c2 - b2 c1)
    t1 = us(um(a1, c2), um(a2, c1))
    t2 = us(um(a1, b2), um(a2, b1))
    t3 = us(um(b1, c2), um(b2, c1))
    return us(um(t1, t1), um(t2, t3))


def _pow_upoly(f, n: int):
    out = (1,)
    for _ in range(n):
        out = upoly.mul(out, f)
    return out


def _interpolate(xs, vals):
    """Lagrange interpolation; returns integer upoly (values are integers
    of an integer-coefficient polynomial, so the result clears exactly)."""
    n = len(xs)
    coeffs = [Fraction(0)] * n
    for i, (xi, vi) in enumerate(zip(xs, vals)):
        if vi == 0:
            continue
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, xj in enumerate(xs):
            if j == i:
                continue
            new = [Fraction(0)] * (len(basis) + 1)
            for k, c in enumerate(basis):
                new[k + 1] += c
                new[k] -= c * xj
            basis = new
            denom *= xi - xj
        w = vi / denom
        for k, c in enumerate(basis):
            coeffs[k] += c * w
    assert all(c.denominator == 1 for c in coeffs)
    return upoly.strip(int(c) for c in coeffs)


def y_critical_poly(p: BiPoly):
    """Square-free integer upoly whose roots contain all x where the
    number of distinct y-roots of p(x, .) changes: Res_y(p*, dp*/dy)
    for the y-square-free primitive part p* of p."""
    pp = primitive_y(p)
    pp = squarefree_y(pp)
    if deg_y(pp) < 1:
        return ()
    r = resultant_y(pp, d_dy(pp))
    if upoly.is_zero(r):
        return ()
    return upoly.squarefree_part(r)


def squarefree_y(p: BiPoly) -> BiPoly:
    """y-square-free part of p (gcd with its y-derivative divided out).

    Cheap test first: if Res_y(p, p_y) is not identically zero, p is
    already y-square-free.
    """
    if deg_y(p) <= 1:
        return p
    r = resultant_y(p, d_dy(p))
    if not upoly.is_zero(r):
        return p
    g = gcd_y(p, d_dy(p))
    return div_exact_y(p, g)


def gcd_y(p: BiPoly, q: BiPoly) -> BiPoly:
    """gcd in Q(x)[y] (monic-free: primitive-in-y integer representative)."""
    a, b = primitive_y(p), primitive_y(q)
    if is_zero(a):
        return b
    if is_zero(b):
        return a
    while not is_zero(b):
        a, b = b, _prem_y(a, b)
        b = primitive_y(b) if not is_zero(b) else b
    return primitive_y(a)


def _prem_y(p: BiPoly, q: BiPoly) -> BiPoly:
    """Pseudo-remainder of p by q w.r.t. y (integer-safe)."""
    dq = deg_y(q)
    lq = lc_y(q)
    r = p
    while not is_zero(r) and deg_y(r) >= dq:
        dr = deg_y(r)
        lead = lc_y(r)
        # r = r*lq - lead * y^(dr-dq) * q
        r_scaled = tuple(upoly.mul(c, lq) for c in r)
        shifted = [()] * (dr - dq) + [upoly.mul(lead, c) for c in q]
        r = strip(
            upoly.sub(
                r_scaled[j] if j < len(r_scaled) else (),
                shifted[j] if j < len(shifted) else (),
            )
            for j in range(max(len(r_scaled), len(shifted)))
        )
        if not is_zero(r) and deg_y(r) == dr:
            raise ArithmeticError("pseudo-division failed to reduce degree")
    return r


def div_exact_y(p: BiPoly, g: BiPoly) -> BiPoly:
    """Exact division p / g in Q[x][y], result cleared to integers."""
    from fractions import Fraction as F

    # long division with Fraction-upoly coefficients
    def fr(c):
        return [F(a) for a in c]

    r = [fr(c) for c in p]
    dg = deg_y(g)
    quot: list = []
    while r and len(r) - 1 >= dg:
        while r and not any(r[-1]):
            r.pop()
        if not r or len(r) - 1 < dg:
            break
        # leading coefficient division in Q[x]: must be exact
        qq, rr = _updiv(r[-1], fr(g[-1]))
        if any(rr):
            raise ArithmeticError("inexact bivariate division")
        k = len(r) - 1 - dg
        while len(quot) <= k:
            quot.append([F(0)])
        quot[k] = qq
        for j, gc in enumerate(g):
            prod = _upmul(qq, fr(gc))
            row = r[k + j]
            for i, c in enumerate(prod):
                while len(row) <= i:
                    row.append(F(0))
                row[i] -= c
        r.pop()
    if any(any(row) for row in r):
        raise ArithmeticError("inexact bivariate division")
    rows = []
    for qrow in quot:
        rows.append(upoly.from_fractions(qrow))
    return strip(rows)


def _updiv(a, b):
    """Divide Fraction-coefficient univariate lists."""
    a = a[:]
    while a and a[-1] == 0:
        a.pop()
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    while a and len(a) - 1 >= len(b) - 1:
        coef = a[-1] / b[-1]
        k = len(a) - len(b)
        q[k] = coef
        for i, c in enumerate(b):
            a[k + i] -= coef * c
        while a and a[-1] == 0:
            a.pop()
    return q, a


def _upmul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1 if a and b else 0)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out
