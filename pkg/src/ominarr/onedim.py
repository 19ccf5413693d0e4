"""Exact calculus of definable subsets of the real line.

An :class:`IntervalSet` is the canonical form of a finite union of points
and intervals: maximal connected pieces, sorted, pairwise disjoint and
non-adjacent.  Endpoints are rationals or real algebraic numbers; +-infinity
uses dedicated sentinels.  All operations are exact.
"""

from __future__ import annotations

from fractions import Fraction

from . import algebraic
from .algebraic import RealAlg, add_rational, cmp as num_cmp
from .errors import MalformedPiece, NotClosed, ParseError, RadiusOrder
from .numeric import simplest_between


class _Inf:
    __slots__ = ("sign",)

    def __init__(self, sign):
        self.sign = sign

    def __repr__(self):
        return "+inf" if self.sign > 0 else "-inf"


NEG_INF = _Inf(-1)
POS_INF = _Inf(1)


def xcmp(a, b) -> int:
    """Comparison extended with the infinity sentinels."""
    if a is b:
        return 0
    if isinstance(a, _Inf):
        return a.sign
    if isinstance(b, _Inf):
        return -b.sign
    return num_cmp(a, b)


def _shift(a, q):
    if isinstance(a, _Inf):
        return a
    return add_rational(a, q)


class Piece:
    """One maximal connected subset: [lo,hi], (lo,hi), half-open, or a
    point (lo == hi, both ends closed)."""

    __slots__ = ("lo", "lo_closed", "hi", "hi_closed")

    def __init__(self, lo, lo_closed, hi, hi_closed):
        if isinstance(lo, _Inf):
            lo_closed = False
        if isinstance(hi, _Inf):
            hi_closed = False
        c = xcmp(lo, hi)
        if c > 0 or (c == 0 and not (lo_closed and hi_closed)):
            raise MalformedPiece(f"empty piece ({lo}, {hi})")
        self.lo, self.lo_closed = lo, lo_closed
        self.hi, self.hi_closed = hi, hi_closed

    def is_point(self):
        return not isinstance(self.lo, _Inf) and xcmp(self.lo, self.hi) == 0

    def __repr__(self):
        if self.is_point():
            return "{%s}" % _fmt(self.lo)
        l = "[" if self.lo_closed else "("
        r = "]" if self.hi_closed else ")"
        return f"{l}{_fmt(self.lo)},{_fmt(self.hi)}{r}"


def _fmt(a):
    if isinstance(a, _Inf):
        return repr(a)
    if isinstance(a, RealAlg):
        return f"~{float(a):.9g}"
    a = Fraction(a)
    return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"


class IntervalSet:
    """Canonical finite union of points and intervals."""

    __slots__ = ("pieces",)

    def __init__(self, pieces=(), _canonical=False):
        if _canonical:
            self.pieces = tuple(pieces)
        else:
            self.pieces = _canonicalize(pieces)

    # -- constructors ---------------------------------------------------
    @staticmethod
    def empty() -> "IntervalSet":
        return IntervalSet((), _canonical=True)

    @staticmethod
    def reals() -> "IntervalSet":
        return IntervalSet([Piece(NEG_INF, False, POS_INF, False)], _canonical=True)

    @staticmethod
    def point(a) -> "IntervalSet":
        return IntervalSet([Piece(a, True, a, True)])

    @staticmethod
    def open(lo, hi) -> "IntervalSet":
        return IntervalSet([Piece(lo, False, hi, False)])

    @staticmethod
    def closed(lo, hi) -> "IntervalSet":
        return IntervalSet([Piece(lo, True, hi, True)])

    def __eq__(self, other):
        if not isinstance(other, IntervalSet):
            return NotImplemented
        if len(self.pieces) != len(other.pieces):
            return False
        for p, q in zip(self.pieces, other.pieces):
            if (
                p.lo_closed != q.lo_closed
                or p.hi_closed != q.hi_closed
                or xcmp(p.lo, q.lo) != 0
                or xcmp(p.hi, q.hi) != 0
            ):
                return False
        return True

    def __hash__(self):  # only sets with rational endpoints hash reliably
        return hash(repr(self))

    def __repr__(self):
        return "{" + " ".join(repr(p) for p in self.pieces) + "}"

    def is_empty(self) -> bool:
        return not self.pieces

    def b0(self) -> int:
        return len(self.pieces)

    def endpoints(self) -> list:
        out = []
        for p in self.pieces:
            for e in (p.lo, p.hi):
                if not isinstance(e, _Inf):
                    out.append(e)
        return out

    def contains(self, x) -> bool:
        for p in self.pieces:
            cl = xcmp(x, p.lo)
            ch = xcmp(x, p.hi)
            if (cl > 0 or (cl == 0 and p.lo_closed)) and (
                ch < 0 or (ch == 0 and p.hi_closed)
            ):
                return True
        return False

    def is_closed(self) -> bool:
        for p in self.pieces:
            if not isinstance(p.lo, _Inf) and not p.lo_closed:
                return False
            if not isinstance(p.hi, _Inf) and not p.hi_closed:
                return False
        return True

    def is_bounded(self) -> bool:
        return not any(
            isinstance(p.lo, _Inf) or isinstance(p.hi, _Inf) for p in self.pieces
        )

    def closure(self) -> "IntervalSet":
        return IntervalSet(
            Piece(p.lo, not isinstance(p.lo, _Inf), p.hi, not isinstance(p.hi, _Inf))
            for p in self.pieces
        )

    def complement(self) -> "IntervalSet":
        out = []
        prev, prev_closed = NEG_INF, False
        for p in self.pieces:
            if xcmp(prev, p.lo) < 0 or (xcmp(prev, p.lo) == 0 and not (prev_closed or p.lo_closed)):
                try:
                    out.append(Piece(prev, not prev_closed and not isinstance(prev, _Inf), p.lo, not p.lo_closed))
                except MalformedPiece:
                    pass
            prev, prev_closed = p.hi, p.hi_closed
        try:
            out.append(Piece(prev, not prev_closed and not isinstance(prev, _Inf), POS_INF, False))
        except MalformedPiece:
            pass
        return IntervalSet(out)

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet(list(self.pieces) + list(other.pieces))

    def intersect(self, other: "IntervalSet") -> "IntervalSet":
        out = []
        for p in self.pieces:
            for q in other.pieces:
                lo, lo_c = _max_end(p.lo, p.lo_closed, q.lo, q.lo_closed)
                hi, hi_c = _min_end(p.hi, p.hi_closed, q.hi, q.hi_closed)
                c = xcmp(lo, hi)
                if c < 0 or (c == 0 and lo_c and hi_c):
                    out.append(Piece(lo, lo_c, hi, hi_c))
        return IntervalSet(out)

    def difference(self, other: "IntervalSet") -> "IntervalSet":
        return self.intersect(other.complement())

    def is_subset(self, other: "IntervalSet") -> bool:
        return self.difference(other).is_empty()


def _max_end(a, ac, b, bc):
    c = xcmp(a, b)
    if c > 0:
        return a, ac
    if c < 0:
        return b, bc
    return a, ac and bc


def _min_end(a, ac, b, bc):
    c = xcmp(a, b)
    if c < 0:
        return a, ac
    if c > 0:
        return b, bc
    return a, ac and bc


def _canonicalize(pieces) -> tuple:
    ps = []
    for p in pieces:
        if isinstance(p, Piece):
            ps.append(p)
        else:
            raise MalformedPiece(f"not a Piece: {p!r}")
    ps = _sort_pieces(ps)
    out: list[Piece] = []
    for p in ps:
        if out:
            q = out[-1]
            c = xcmp(p.lo, q.hi)
            if c < 0 or (c == 0 and (p.lo_closed or q.hi_closed)):
                hi, hi_c = _max_end2(q.hi, q.hi_closed, p.hi, p.hi_closed)
                out[-1] = Piece(q.lo, q.lo_closed, hi, hi_c)
                continue
        out.append(p)
    return tuple(out)


def _max_end2(a, ac, b, bc):
    c = xcmp(a, b)
    if c > 0:
        return a, ac
    if c < 0:
        return b, bc
    return a, ac or bc


def _sort_pieces(ps):
    import functools

    def piece_cmp(p, q):
        c = xcmp(p.lo, q.lo)
        if c:
            return c
        # closed end starts earlier
        if p.lo_closed != q.lo_closed:
            return -1 if p.lo_closed else 1
        return xcmp(p.hi, q.hi)

    return sorted(ps, key=functools.cmp_to_key(piece_cmp))


def normalize(raw_pieces) -> IntervalSet:
    """Canonical form from raw (kind, ...) tuples or Piece objects.

    Raw tuples: ('pt', a), ('open', a, b), ('closed', a, b).
    """
    ps = []
    for r in raw_pieces:
        if isinstance(r, Piece):
            ps.append(r)
            continue
        kind = r[0]
        if kind == "pt":
            ps.append(Piece(r[1], True, r[1], True))
        elif kind == "open":
            if xcmp(r[1], r[2]) >= 0:
                raise MalformedPiece(f"open interval needs a < b: {r}")
            ps.append(Piece(r[1], False, r[2], False))
        elif kind == "closed":
            ps.append(Piece(r[1], True, r[2], True))
        else:
            raise MalformedPiece(f"unknown piece kind {kind!r}")
    return IntervalSet(ps)


def boolean_op(op: str, a: IntervalSet, b: IntervalSet | None = None) -> IntervalSet:
    """Boolean/closure calculus; op in {union, intersect, complement,
    closure, difference}."""
    if op in ("complement", "closure"):
        if b is not None:
            raise ValueError(f"{op} is unary")
        return a.complement() if op == "complement" else a.closure()
    if b is None:
        raise ValueError(f"{op} is binary")
    if op == "union":
        return a.union(b)
    if op == "intersect":
        return a.intersect(b)
    if op == "difference":
        return a.difference(b)
    raise ValueError(f"unknown op {op!r}")


def b0_1d(a: IntervalSet) -> int:
    """Connected components; higher Betti numbers vanish on the line."""
    return a.b0()


# -- tubes -------------------------------------------------------------


def _expand(x: IntervalSet, eps: Fraction, closed: bool) -> IntervalSet:
    """Distance sublevel set {d_X < eps} (open) or {d_X <= eps} (closed)."""
    eps = Fraction(eps)
    out = []
    for p in x.pieces:
        lo = _shift(p.lo, -eps)
        hi = _shift(p.hi, eps)
        out.append(Piece(lo, closed and not isinstance(lo, _Inf), hi, closed and not isinstance(hi, _Inf)))
    return IntervalSet(out)


def tube(kind: str, x: IntervalSet, v: IntervalSet, eps1, eps2=None) -> IntervalSet:
    """Tube or annulus of x inside v.

    kind: 'open' {d<e1}, 'closed' {d<=e1}, 'boundary' {d=e1},
    'annulus' {e2<d<e1}, 'annulus_closed' {e2<=d<=e1}.
    """
    if not x.is_closed() or not v.is_closed():
        raise NotClosed("tube arguments must be closed sets")
    if not x.is_subset(v):
        raise NotClosed("x must be a subset of v")
    eps1 = Fraction(eps1)
    if eps1 <= 0:
        raise RadiusOrder("radius must be positive")
    if x.is_empty():
        return IntervalSet.empty()
    if kind == "open":
        return _expand(x, eps1, False).intersect(v)
    if kind == "closed":
        return _expand(x, eps1, True).intersect(v)
    if kind == "boundary":
        return _expand(x, eps1, True).difference(_expand(x, eps1, False)).intersect(v)
    if kind in ("annulus", "annulus_closed"):
        if eps2 is None:
            raise RadiusOrder("annulus needs two radii")
        eps2 = Fraction(eps2)
        if not eps1 > eps2 > 0:
            raise RadiusOrder("need eps1 > eps2 > 0")
        if kind == "annulus":
            return _expand(x, eps1, False).difference(_expand(x, eps2, True)).intersect(v)
        return _expand(x, eps1, True).difference(_expand(x, eps2, False)).intersect(v)
    raise ValueError(f"unknown tube kind {kind!r}")


def critical_radii(x: IntervalSet, y: IntervalSet | None = None) -> list:
    """Radii where the homeomorphism type of (CT(x,r), CT(x,r) & y) can
    change: half of every pairwise distance among the endpoints of x and y
    together, plus the full distances between x- and y-endpoints."""
    xe = x.endpoints()
    ye = y.endpoints() if y is not None else []
    vals: list = []
    allpts = [(e, 0) for e in xe] + [(e, 1) for e in ye]
    for i in range(len(allpts)):
        for j in range(i + 1, len(allpts)):
            a, sa = allpts[i]
            b, sb = allpts[j]
            d = _abs_diff(a, b)
            if d is None:
                continue
            vals.append(_half(d))
            if sa != sb:
                vals.append(d)
    out = []
    for v in sorted(vals, key=algebraic.sort_key):
        if algebraic.cmp(v, Fraction(0)) <= 0:
            continue
        if out and algebraic.cmp(out[-1], v) == 0:
            continue
        out.append(v)
    return out


def _abs_diff(a, b):
    """|a-b| for rational/algebraic endpoints; None when zero."""
    c = num_cmp(a, b)
    if c == 0:
        return None
    d = algebraic.subtract(a, b) if c > 0 else algebraic.subtract(b, a)
    return d


def _half(d):
    if isinstance(d, RealAlg):
        # d/2: scale the defining polynomial f(2x)
        from . import upoly

        poly = upoly.strip([c * 2**i for i, c in enumerate(d.poly)])
        return RealAlg(upoly.primitive(poly), d.lo / 2, d.hi / 2)
    return Fraction(d) / 2


def min_positive_critical_radius(x: IntervalSet, y: IntervalSet | None = None):
    vals = critical_radii(x, y)
    return vals[0] if vals else None


# -- 1D arrangements ---------------------------------------------------


def arrangement_cells(members: list[IntervalSet], v: IntervalSet | None = None):
    """Cells of the arrangement of member sets on the line (restricted to v
    if given): maximal connected regions with constant membership vector.

    Returns a list of (cell: IntervalSet, membership: tuple[bool, ...]).
    Cells are single pieces, ordered left to right.
    """
    pts: list = []
    universe = [v] if v is not None else []
    for m in list(members) + universe:
        pts.extend(m.endpoints())
    pts.sort(key=algebraic.sort_key)
    dedup = []
    for p in pts:
        if not dedup or algebraic.cmp(dedup[-1], p) != 0:
            dedup.append(p)
    atoms: list[Piece] = []
    if not dedup:
        atoms.append(Piece(NEG_INF, False, POS_INF, False))
    else:
        atoms.append(Piece(NEG_INF, False, dedup[0], False))
        for i, p in enumerate(dedup):
            atoms.append(Piece(p, True, p, True))
            if i + 1 < len(dedup):
                atoms.append(Piece(p, False, dedup[i + 1], False))
        atoms.append(Piece(dedup[-1], False, POS_INF, False))
    samples = algebraic.sample_points(dedup)

    def atom_rep(idx):
        # representative point of atom idx: even -> gap sample, odd -> point
        return samples[idx // 2] if idx % 2 == 0 else dedup[idx // 2]

    cells = []
    run_pieces: list[Piece] = []
    run_vec = None
    for idx, atom in enumerate(atoms):
        rep = atom_rep(idx)
        if v is not None and not v.contains(rep):
            if run_pieces:
                cells.append((IntervalSet(run_pieces), run_vec))
                run_pieces, run_vec = [], None
            continue
        vec = tuple(m.contains(rep) for m in members)
        if run_vec is not None and vec == run_vec:
            run_pieces.append(atom)
        else:
            if run_pieces:
                cells.append((IntervalSet(run_pieces), run_vec))
            run_pieces, run_vec = [atom], vec
    if run_pieces:
        cells.append((IntervalSet(run_pieces), run_vec))
    return cells


# -- serialization -----------------------------------------------------


def to_text(a: IntervalSet) -> str:
    return repr(a)


def parse(text: str) -> IntervalSet:
    """Parse the textual form, e.g. '{(0,1) [2,3] {4}}'."""
    s = text.strip()
    if not (s.startswith("{") and s.endswith("}")):
        raise ParseError("interval set must be wrapped in { }")
    body = s[1:-1].strip()
    pieces = []
    i = 0
    while i < len(body):
        ch = body[i]
        if ch.isspace():
            i += 1
            continue
        if ch == "{":
            j = body.index("}", i)
            val = _parse_num(body[i + 1 : j])
            pieces.append(Piece(val, True, val, True))
            i = j + 1
        elif ch in "([":
            j = i
            depth = 0
            while j < len(body):
                if body[j] in "([":
                    depth += 1
                elif body[j] in ")]":
                    depth -= 1
                    if depth == 0:
                        break
                j += 1
            if j >= len(body):
                raise ParseError("unbalanced interval")
            inner = body[i + 1 : j]
            lo_s, hi_s = inner.split(",")
            lo = _parse_num(lo_s)
            hi = _parse_num(hi_s)
            pieces.append(Piece(lo, ch == "[", hi, body[j] == "]"))
            i = j + 1
        else:
            raise ParseError(f"unexpected character {ch!r}")
    return IntervalSet(pieces)


def _parse_num(s: str):
    s = s.strip()
    if s in ("-inf", "-oo"):
        return NEG_INF
    if s in ("inf", "+inf", "oo", "+oo"):
        return POS_INF
    if s.startswith("~"):
        raise ParseError("approximate endpoints cannot be parsed back exactly")
    try:
        return Fraction(s)
    except ValueError as e:
        raise ParseError(f"bad number {s!r}") from e
