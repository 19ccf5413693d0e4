"""Exact univariate computations over Q(alpha), where alpha is a real
algebraic number given by a square-free (not necessarily irreducible)
defining polynomial.

Elements of Q(alpha) are Fraction-coefficient polynomials in alpha of
degree below deg(m).  Because m may be reducible, a nonzero representative
can still evaluate to zero at alpha, so *every* zero test goes through an
exact sign evaluation at alpha.  Sturm chains are built with even-power
pseudo-remainders (positive multipliers at alpha), which sidesteps
inversion entirely.
"""

from __future__ import annotations

from fractions import Fraction

from . import upoly
from .algebraic import RealAlg, sign_of
from .errors import EngineAssertionFailure
from .numeric import simplest_between


class FieldCtx:
    """Arithmetic context for Q(alpha)."""

    def __init__(self, alpha: RealAlg):
        self.alpha = alpha
        self.m = alpha.poly  # square-free integer poly, alpha a root
        self._mf = [Fraction(c) for c in self.m]

    # elements are tuples of Fractions, degree < deg(m), not stripped

    def reduce(self, coeffs) -> tuple:
        c = [Fraction(v) for v in coeffs]
        dm = len(self._mf) - 1
        lead = self._mf[-1]
        while len(c) > dm:
            top = c.pop()
            if top == 0:
                continue
            f = top / lead
            for i in range(dm):
                c[len(c) - dm + i] -= f * self._mf[i]
        return tuple(c)

    def from_upoly(self, f) -> tuple:
        return self.reduce(Fraction(a) for a in f)

    def const(self, q) -> tuple:
        return (Fraction(q),)

    def add(self, a, b):
        n = max(len(a), len(b))
        return tuple(
            (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
            for i in range(n)
        )

    def sub(self, a, b):
        n = max(len(a), len(b))
        return tuple(
            (a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)
            for i in range(n)
        )

    def mul(self, a, b):
        if not a or not b:
            return ()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return self.reduce(out)

    def scale(self, a, q):
        q = Fraction(q)
        return tuple(c * q for c in a)

    def sign(self, a) -> int:
        """Exact sign of the value a(alpha)."""
        f = upoly.from_fractions(a)
        if upoly.is_zero(f):
            return 0
        return sign_of(f, self.alpha)

    def is_zero(self, a) -> bool:
        return self.sign(a) == 0

    def interval(self, a, rounds: int = 0):
        """Rational enclosure of a(alpha) from alpha's current interval."""
        for _ in range(rounds):
            self.alpha.refine()
        return _eval_interval_fr(a, self.alpha.lo, self.alpha.hi)


def _eval_interval_fr(coeffs, lo, hi):
    alo = ahi = Fraction(0)
    for c in reversed(coeffs):
        p = (alo * lo, alo * hi, ahi * lo, ahi * hi)
        alo, ahi = min(p) + c, max(p) + c
    return alo, ahi


class FiberPoly:
    """A polynomial in y with coefficients in Q(alpha), stripped so the
    leading coefficient is nonzero at alpha."""

    __slots__ = ("ctx", "coeffs", "_chain")

    def __init__(self, ctx: FieldCtx, coeffs):
        self.ctx = ctx
        c = [ctx.reduce(e) for e in coeffs]
        while c and ctx.is_zero(c[-1]):
            c.pop()
        self.coeffs = tuple(c)
        self._chain = None

    @property
    def deg(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def deriv(self) -> "FiberPoly":
        return FiberPoly(
            self.ctx,
            [self.ctx.scale(self.coeffs[j], j) for j in range(1, len(self.coeffs))],
        )

    def eval(self, y: Fraction):
        ctx = self.ctx
        acc = ()
        yq = Fraction(y)
        for e in reversed(self.coeffs):
            acc = ctx.add(tuple(c * yq for c in acc), e)
        return acc

    def sign_at(self, y: Fraction) -> int:
        return self.ctx.sign(self.eval(y))

    def chain(self):
        """Sturm chain with positive multipliers at alpha."""
        if self._chain is not None:
            return self._chain
        ctx = self.ctx
        seq = [self, self.deriv()]
        while not seq[-1].is_zero() and seq[-1].deg >= 0:
            if seq[-1].deg == 0:
                break
            r = _prem_signed(seq[-2], seq[-1])
            if r.is_zero():
                break
            seq.append(FiberPoly(ctx, [ctx.scale(e, -1) for e in r.coeffs]))
        self._chain = [f for f in seq if not f.is_zero()]
        return self._chain

    def var_at(self, y: Fraction) -> int:
        return _variations(f.sign_at(y) for f in self.chain())

    def var_neg_inf(self) -> int:
        return _variations(
            (-1) ** f.deg * f.ctx.sign(f.coeffs[-1]) for f in self.chain()
        )

    def var_pos_inf(self) -> int:
        return _variations(f.ctx.sign(f.coeffs[-1]) for f in self.chain())

    def count_halfopen(self, a: Fraction, b: Fraction) -> int:
        return self.var_at(a) - self.var_at(b)

    def count_all(self) -> int:
        return self.var_neg_inf() - self.var_pos_inf()

    def root_bound(self) -> Fraction:
        """Rational B with all real roots of self in (-B, B)."""
        ctx = self.ctx
        lead = self.coeffs[-1]
        rounds = 0
        while True:
            llo, lhi = ctx.interval(lead)
            if llo > 0 or lhi < 0:
                break
            ctx.alpha.refine()
            rounds += 1
            if rounds > 512:
                raise EngineAssertionFailure("cannot separate leading coeff")
        lead_abs = min(abs(llo), abs(lhi))
        m = Fraction(0)
        for e in self.coeffs[:-1]:
            elo, ehi = ctx.interval(e)
            m = max(m, abs(elo), abs(ehi))
        return 1 + m / lead_abs


def _prem_signed(f: FiberPoly, g: FiberPoly) -> FiberPoly:
    """lc(g)^(2k) * f mod g: the multiplier is an even power, hence
    positive at alpha, preserving Sturm sign semantics."""
    ctx = f.ctx
    lg = g.coeffs[-1]
    r = list(f.coeffs)
    mults = 0
    while len(r) - 1 >= g.deg and r:
        dr = len(r) - 1
        lead = r[-1]
        r = [ctx.mul(e, lg) for e in r]
        mults += 1
        for j, gc in enumerate(g.coeffs):
            idx = dr - g.deg + j
            r[idx] = ctx.sub(r[idx], ctx.mul(lead, gc))
        r.pop()
        while r and ctx.is_zero(r[-1]):
            r.pop()
    if mults % 2 == 1:
        r = [ctx.mul(e, lg) for e in r]
    return FiberPoly(ctx, r)


def _variations(signs) -> int:
    v, prev = 0, 0
    for s in signs:
        if s == 0:
            continue
        if prev and s != prev:
            v += 1
        prev = s
    return v


def fiber_gcd(f: FiberPoly, g: FiberPoly) -> FiberPoly:
    a, b = f, g
    if a.is_zero():
        return b
    if b.is_zero():
        return a
    if a.deg < b.deg:
        a, b = b, a
    while not b.is_zero() and b.deg >= 1:
        r = _prem_signed(a, b)
        a, b = b, r
    if not b.is_zero():  # nonzero constant: coprime
        return b
    return a


class FiberRoot:
    """One real root of a FiberPoly, isolated in the half-open interval
    (lo, hi] with a count certificate from the Sturm chain."""

    __slots__ = ("fiber", "lo", "hi", "exact")

    def __init__(self, fiber: FiberPoly, lo: Fraction, hi: Fraction, exact=None):
        self.fiber = fiber
        self.lo = Fraction(lo)
        self.hi = Fraction(hi)
        self.exact = exact  # Fraction when the root is known rational

    def refine(self) -> None:
        if self.exact is not None:
            self.lo = self.hi = self.exact
            return
        mid = (self.lo + self.hi) / 2
        if self.fiber.sign_at(mid) == 0:
            self.exact = mid
            self.lo = self.hi = mid
            return
        if self.fiber.count_halfopen(self.lo, mid) >= 1:
            self.hi = mid
        else:
            self.lo = mid

    def refine_below(self, width: Fraction) -> None:
        while self.hi - self.lo > width and self.exact is None:
            self.refine()

    def width(self) -> Fraction:
        return self.hi - self.lo

    def cmp_rational(self, q: Fraction) -> int:
        """Three-way comparison root ? q."""
        if self.exact is not None:
            return (self.exact > q) - (self.exact < q)
        q = Fraction(q)
        if q <= self.lo:
            return 1
        if q > self.hi:
            return -1
        if self.fiber.sign_at(q) == 0:
            self.exact = q
            return 0
        if self.fiber.count_halfopen(self.lo, q) >= 1:
            return -1  # root <= q, not equal
        return 1

    def __float__(self):
        if self.exact is not None:
            return float(self.exact)
        self.refine_below(Fraction(1, 1 << 30))
        return float((self.lo + self.hi) / 2)


class FormulaRoot:
    """Root of a fiber of y-degree <= 2 over alpha, refined through the
    quadratic formula on interval enclosures of the coefficient values.

    Duck-compatible with FiberRoot: lo, hi, exact, refine, cmp_rational.
    The exact FiberPoly (for gcd fallbacks) is built lazily.
    """

    __slots__ = ("alpha", "rows", "branch", "sign_a", "lo", "hi", "exact", "_ctx", "_fiber", "_awidth")

    def __init__(self, alpha, rows, branch, sign_a, ctx_provider):
        # rows: (c, b, a) integer upolys, constant term first; linear fibers
        # pass a = () and sign_a = 0 with branch 0.
        self.alpha = alpha
        self.rows = rows
        self.branch = branch  # -1 lower root, +1 upper root, 0 vertex/linear
        self.sign_a = sign_a
        self.exact = None
        self._ctx = ctx_provider
        self._fiber = None
        self._awidth = None
        self._recompute(initial=True)

    @property
    def fiber(self) -> FiberPoly:
        if self._fiber is None:
            ctx = self._ctx()
            self._fiber = FiberPoly(ctx, [ctx.from_upoly(r) for r in self.rows])
        return self._fiber

    def _ivals(self):
        a = self.alpha
        return [
            _int_eval_interval(r, a.lo, a.hi) for r in self.rows
        ]

    def _recompute(self, initial=False):
        from .numeric import sqrt_interval

        a = self.alpha
        if self.exact is not None:
            self.lo = self.hi = self.exact
            return
        if self.sign_a == 0:
            # linear fiber: root = -c/b with b(alpha) != 0
            (clo, chi), (blo, bhi) = self._ivals()[:2]
            rounds = 0
            while blo <= 0 <= bhi:
                a.refine()
                (clo, chi), (blo, bhi) = self._ivals()[:2]
                rounds += 1
                if rounds > 512:
                    raise EngineAssertionFailure("linear fiber lead will not separate")
            cands = [-clo / blo, -clo / bhi, -chi / blo, -chi / bhi]
            self.lo, self.hi = min(cands), max(cands)
            self._awidth = a.hi - a.lo
            return
        from .numeric import interval_mul, interval_scale, interval_add

        while True:
            (clo, chi), (blo, bhi), (alo, ahi) = self._ivals()
            if not (alo <= 0 <= ahi):
                break
            a.refine()
        b2 = interval_mul((blo, bhi), (blo, bhi))
        ac = interval_mul((alo, ahi), (clo, chi))
        d_lo, d_hi = interval_add(b2, interval_scale(ac, Fraction(-4)))
        d_lo = max(d_lo, Fraction(0))
        d_hi = max(d_hi, Fraction(0))
        s_lo = sqrt_interval(d_lo, 8)[0] if d_lo > 0 else Fraction(0)
        s_hi = sqrt_interval(d_hi, 8)[1] if d_hi > 0 else Fraction(0)
        if self.branch == 0:
            nums = (-bhi, -blo)
        elif self.branch < 0:
            nums = (-bhi - s_hi, -blo - s_lo)
        else:
            nums = (-bhi + s_lo, -blo + s_hi)
        dens = (2 * alo, 2 * ahi)
        cands = [n / d for n in nums for d in dens]
        self.lo, self.hi = min(cands), max(cands)
        self._awidth = a.hi - a.lo

    def refine(self):
        if self.exact is not None:
            self.lo = self.hi = self.exact
            return
        self.alpha.refine()
        self._recompute()

    def refine_below(self, width):
        guard = 0
        while self.hi - self.lo > width and self.exact is None:
            self.refine()
            guard += 1
            if guard > 4096:
                raise EngineAssertionFailure("formula root refinement stalled")

    def width(self):
        return self.hi - self.lo

    def __float__(self):
        if self.exact is not None:
            return float(self.exact)
        self.refine_below(Fraction(1, 1 << 30))
        return float((self.lo + self.hi) / 2)

    def cmp_rational(self, q) -> int:
        if self.exact is not None:
            return (self.exact > q) - (self.exact < q)
        q = Fraction(q)
        if q < self.lo:
            return 1
        if q > self.hi:
            return -1
        # exact value sign at q: clear denominators of q
        qn, qd = q.numerator, q.denominator
        c, b = self.rows[0], self.rows[1]
        a_row = self.rows[2] if len(self.rows) > 2 else ()
        val = upoly.add(
            upoly.scale(c, qd * qd),
            upoly.add(
                upoly.scale(b, qn * qd),
                upoly.scale(a_row, qn * qn) if a_row else (),
            ),
        )
        s = sign_of(val, self.alpha) if not upoly.is_zero(val) else 0
        if s == 0:
            self.exact = q
            self.lo = self.hi = q
            return 0
        if self.sign_a == 0:
            # linear: f increasing iff b(alpha) > 0
            bsign = sign_of(self.rows[1], self.alpha)
            return -1 if s * bsign > 0 else 1
        side = upoly.add(upoly.scale(a_row, 2 * qn), upoly.scale(b, qd))
        t = sign_of(side, self.alpha)  # sign of q - vertex times sign_a
        qv = t * self.sign_a  # sign of (q - vertex)
        inside = s * self.sign_a < 0
        if inside:
            # the lower of the two roots carries branch == -sign_a
            return -1 if self.branch * self.sign_a < 0 else 1
        if self.branch == 0:
            return -qv if qv else 0
        # outside: q below both roots when left of the vertex, else above
        return 1 if qv < 0 else -1


def _int_eval_interval(r, lo, hi):
    if upoly.is_zero(r):
        return (Fraction(0), Fraction(0))
    return upoly.eval_interval(r, lo, hi)


def fiber_roots_fast(alpha, qp, ctx_provider):
    """Roots with multiplicities of the fiber of the y-primitive bivariate
    qp over alpha, plus (fiber degree, sign of the leading value).

    Degree <= 2 fibers avoid number-field arithmetic entirely; higher
    degrees fall back to Sturm chains over Q(alpha).
    """
    rows = list(qp)
    d = len(rows) - 1
    while d >= 0:
        s = sign_of(rows[d], alpha) if not upoly.is_zero(rows[d]) else 0
        if s != 0:
            break
        d -= 1
    if d < 0:
        raise EngineAssertionFailure("fiber of primitive part vanished")
    lead_sign = s
    if d == 0:
        return [], 0, lead_sign
    if d == 1:
        root = FormulaRoot(alpha, (rows[0], rows[1]), 0, 0, ctx_provider)
        return [(root, 1)], 1, lead_sign
    if d == 2:
        c, b, a = rows[0], rows[1], rows[2]
        disc = upoly.sub(upoly.mul(b, b), upoly.scale(upoly.mul(a, c), 4))
        sd = sign_of(disc, alpha) if not upoly.is_zero(disc) else 0
        if sd < 0:
            return [], 2, lead_sign
        if sd == 0:
            root = FormulaRoot(alpha, (c, b, a), 0, lead_sign, ctx_provider)
            return [(root, 2)], 2, lead_sign
        # branch -sign_a is always the smaller root
        r1 = FormulaRoot(alpha, (c, b, a), -lead_sign, lead_sign, ctx_provider)
        r2 = FormulaRoot(alpha, (c, b, a), lead_sign, lead_sign, ctx_provider)
        return [(r1, 1), (r2, 1)], 2, lead_sign
    ctx = ctx_provider()
    fib = FiberPoly(ctx, [ctx.from_upoly(r) for r in rows[: d + 1]])
    roots = isolate_fiber_roots(fib)
    out = []
    for r in roots:
        mu = multiplicity(fib, r)
        out.append((r, mu))
    return out, d, lead_sign


def isolate_fiber_roots(f: FiberPoly) -> list[FiberRoot]:
    """All real roots of f, sorted increasing, as FiberRoots."""
    if f.is_zero():
        raise EngineAssertionFailure("cannot isolate roots of zero fiber")
    if f.deg == 0:
        return []
    total = f.count_all()
    if total == 0:
        return []
    bound = f.root_bound()
    import math

    lo = Fraction(math.floor(-bound))
    hi = Fraction(math.ceil(bound))
    out: list[FiberRoot] = []
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        n = f.count_halfopen(a, b)
        if n == 0:
            continue
        if n == 1:
            out.append(FiberRoot(f, a, b))
            continue
        mid = (a + b) / 2
        if f.sign_at(mid) == 0:
            out.append(FiberRoot(f, a, mid, exact=mid))
            # remaining roots strictly left/right of mid
            stack.append((a, _left_of(f, a, mid)))
            stack.append((mid, b))
        else:
            stack.append((a, mid))
            stack.append((mid, b))
    out.sort(key=lambda r: (r.lo, r.hi))
    return out


def _left_of(f: FiberPoly, a: Fraction, mid: Fraction) -> Fraction:
    """A rational c in (a, mid) with no roots of f in [c, mid)."""
    c = (a + mid) / 2
    while True:
        # roots in (c, mid] are exactly {mid} iff count == 1
        if f.count_halfopen(c, mid) == 1:
            return c
        c = (c + mid) / 2


def cmp_fiber_roots(r1: FiberRoot, r2: FiberRoot) -> int:
    """Exact comparison of two fiber roots over the same alpha."""
    if r1 is r2:
        return 0
    if r1.exact is not None and r2.exact is not None:
        return (r1.exact > r2.exact) - (r1.exact < r2.exact)
    if r1.exact is not None:
        return -r2.cmp_rational(r1.exact)
    if r2.exact is not None:
        return r1.cmp_rational(r2.exact)
    tried = False
    g = None
    while True:
        if r1.hi < r2.lo:
            return -1
        if r2.hi < r1.lo:
            return 1
        if r1.hi == r2.lo:
            return 0 if (r1.cmp_rational(r1.hi) == 0 and r2.cmp_rational(r1.hi) == 0) else -1
        if r2.hi == r1.lo:
            return 0 if (r2.cmp_rational(r2.hi) == 0 and r1.cmp_rational(r2.hi) == 0) else 1
        if not tried:
            tried = True
            g = fiber_gcd(r1.fiber, r2.fiber)
            if g.is_zero() or g.deg < 1:
                g = None
        if g is not None:
            lo = max(r1.lo, r2.lo)
            hi = min(r1.hi, r2.hi)
            if hi > lo and g.count_halfopen(lo, hi) >= 1:
                return 0
        r1.refine()
        r2.refine()


def multiplicity(f: FiberPoly, root: FiberRoot) -> int:
    """Multiplicity of root as a zero of f."""
    mu = 1
    g = fiber_gcd(f, f.deriv())
    while not g.is_zero() and g.deg >= 1:
        if not _has_root_at(g, root):
            break
        mu += 1
        g = fiber_gcd(g, g.deriv())
    return mu


def _has_root_at(g: FiberPoly, root: FiberRoot) -> bool:
    if root.exact is not None:
        return g.sign_at(root.exact) == 0
    while True:
        c = g.count_halfopen(root.lo, root.hi)
        if c == 0:
            return False
        # g has a root in (lo, hi]; is it *the* root?  g | chain of f only
        # shares roots of f; the isolating interval holds a single f-root,
        # and every root of g here is a root of f (g divides gcd powers of f).
        return True


def separate_fiber_roots(roots: list) -> None:
    """Refine a sorted list of distinct root-like objects (FiberRoot or
    rational wrappers) until consecutive enclosures are disjoint."""
    for i in range(len(roots) - 1):
        a, b = roots[i], roots[i + 1]
        while not a.hi < b.lo:
            a.refine()
            b.refine()


def gap_samples(roots: list) -> list[Fraction]:
    """Rational sample points: below, between consecutive, above."""
    import math

    if not roots:
        return [Fraction(0)]
    separate_fiber_roots(roots)
    out = [Fraction(math.floor(roots[0].lo) - 1)]
    for i in range(len(roots) - 1):
        out.append(simplest_between(roots[i].hi, roots[i + 1].lo))
    out.append(Fraction(math.ceil(roots[-1].hi) + 1))
    return out
