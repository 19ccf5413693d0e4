"""Homotopy-preserving constructions and Betti inequalities: the
Mayer-Vietoris suite, the inductive closed-bounded replacement, the
annulus-complement reduction, and the tube-family decomposition.

All "sufficiently small" radii are made constructive: on the line through
critical radii, in the plane through Betti stability under halvings.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from . import onedim
from .arrangement2d import BettiVector, PlanarSet, build_arrangement
from .errors import (
    EngineAssertionFailure,
    EpsilonTooLarge,
    InadmissibleLadder,
    MissingEntry,
    UnsupportedEngine,
    UnsupportedTubes,
)
from .family import Atom, MPoly, MemberSet, circle_member, formula_and, formula_or, _member_from_formula
from .onedim import IntervalSet


def _betti(s) -> tuple[int, int]:
    if isinstance(s, IntervalSet):
        return (s.b0(), 0)
    if isinstance(s, PlanarSet):
        bv = s.betti()
        return (bv.b0, bv.b1)
    raise UnsupportedEngine(f"no Betti engine for {type(s).__name__}")


def _b_i(s, i: int) -> int:
    if i < 0:
        return 0
    b = _betti(s)
    return b[i] if i < len(b) else 0


# -- Mayer-Vietoris ---------------------------------------------------------


@dataclass
class MVReport:
    rows: list  # (name, degree, lhs, rhs, ok)

    def all_ok(self) -> bool:
        return all(r[4] for r in self.rows)


def mv_pair_check(s1, s2, max_degree: int = 2) -> MVReport:
    """Check the three Mayer-Vietoris inequalities for a closed pair,
    degree by degree.  A violation is an engine bug, not a property of
    the input, hence the hard failure."""
    for s in (s1, s2):
        closed = s.is_closed() if hasattr(s, "is_closed") else False
        if not closed:
            raise UnsupportedEngine("mayer-vietoris pair must be closed sets")
    union = s1.union(s2)
    inter = s1.intersect(s2)
    rows = []
    for i in range(max_degree + 1):
        lhs1 = _b_i(s1, i) + _b_i(s2, i)
        rhs1 = _b_i(union, i) + _b_i(inter, i)
        rows.append(("MV1", i, lhs1, rhs1, lhs1 <= rhs1))
        lhs2 = _b_i(union, i)
        rhs2 = _b_i(s1, i) + _b_i(s2, i) + _b_i(inter, i - 1)
        rows.append(("MV2", i, lhs2, rhs2, lhs2 <= rhs2))
        lhs3 = _b_i(inter, i)
        rhs3 = _b_i(s1, i) + _b_i(s2, i) + _b_i(union, i + 1)
        rows.append(("MV3", i, lhs3, rhs3, lhs3 <= rhs3))
    report = MVReport(rows)
    if not report.all_ok():
        raise EngineAssertionFailure(f"mayer-vietoris violated: {report.rows}")
    return report


@dataclass
class BettiTable:
    """Betti vectors of intersections S_J and unions S^J, with the ambient
    set stored at the empty key of the union table."""

    n: int
    intersections: dict = field(default_factory=dict)  # frozenset -> (b0, b1)
    unions: dict = field(default_factory=dict)  # frozenset -> (b0, b1)

    def inter(self, j):
        key = frozenset(j)
        if key not in self.intersections:
            raise MissingEntry(f"intersection entry {sorted(key)} missing")
        return self.intersections[key]

    def uni(self, j):
        key = frozenset(j)
        if key not in self.unions:
            raise MissingEntry(f"union entry {sorted(key)} missing")
        return self.unions[key]


def build_betti_table(sets, ambient, cap: int) -> BettiTable:
    """Table of all |J| <= cap intersection and union Betti vectors."""
    n = len(sets)
    table = BettiTable(n)
    table.unions[frozenset()] = _betti(ambient)
    for r in range(1, min(cap, n) + 1):
        for j in itertools.combinations(range(n), r):
            inter = sets[j[0]]
            uni = sets[j[0]]
            for i in j[1:]:
                inter = inter.intersect(sets[i])
                uni = uni.union(sets[i])
            table.intersections[frozenset(j)] = _betti(inter.intersect(ambient))
            table.unions[frozenset(j)] = _betti(uni.intersect(ambient))
    return table


def mv_union_bound(table: BettiTable, i: int, n: int):
    """Upper bound for b_i of the n-fold union from intersection data."""
    total = 0
    for j in range(1, i + 2):
        for sub in itertools.combinations(range(n), j):
            b = table.inter(sub)
            d = i - j + 1
            total += b[d] if 0 <= d < len(b) else 0
    return total


def mv_intersection_bound(table: BettiTable, i: int, n: int, kprime: int):
    """Upper bound for b_i of the n-fold intersection from union data."""
    amb = table.uni(())
    bk = amb[kprime] if kprime < len(amb) else 0
    total = bk
    for j in range(1, kprime - i + 1):
        for sub in itertools.combinations(range(n), j):
            b = table.uni(sub)
            d = i + j - 1
            total += (b[d] if 0 <= d < len(b) else 0) + bk
    return total


# -- epsilon ladders --------------------------------------------------------


@dataclass
class EpsilonLadder:
    values: tuple  # ascending epsilon_1 < ... < epsilon_L
    certificates: tuple  # per value: the stage threshold it stayed below

    def __len__(self):
        return len(self.values)

    def validate(self):
        if list(self.values) != sorted(set(self.values)):
            raise InadmissibleLadder("ladder must be strictly increasing")
        for v, cert in zip(self.values, self.certificates):
            if not Fraction(v) < Fraction(cert):
                raise InadmissibleLadder(f"{v} not below its certificate {cert}")


def feature_points(sets) -> IntervalSet:
    """All endpoints of the given interval sets, as a set of points."""
    pieces = []
    for s in sets:
        for e in s.endpoints():
            pieces.append(onedim.Piece(e, True, e, True))
    return IntervalSet(pieces)


def build_ladder_1d(members, v: IntervalSet, count: int) -> EpsilonLadder:
    """Ladder of ``count`` radii, each four times below the smallest
    positive critical radius of the endpoint configuration grown so far:
    a constructive reading of the chain of ever smaller radii."""
    cfg = feature_points([v] + list(members))
    values = []
    certs = []
    for _ in range(count):
        r = onedim.min_positive_critical_radius(cfg, cfg)
        if r is None:
            r = Fraction(1)
        r = Fraction(r) if not hasattr(r, "poly") else _rational_below(r)
        eps = r / 4
        values.append(eps)
        certs.append(r)
        for m in members:
            grown = onedim.tube("boundary", m, IntervalSet.reals(), eps)
            cfg = cfg.union(feature_points([grown]))
    values.reverse()
    certs.reverse()
    ladder = EpsilonLadder(tuple(values), tuple(certs))
    ladder.validate()
    return ladder


def _rational_below(alg):
    alg.refine_below(Fraction(1, 1 << 10))
    return alg.lo


# -- tube formulas for plane members ----------------------------------------


def classify_tube_member(m: MemberSet):
    """(kind, params) for members whose distance offsets stay polynomial:
    circles, closed disks, points, lines, closed halfplanes."""
    atom = m.single_atom()
    if atom is None:
        raise UnsupportedTubes("only single-atom members support exact tubes")
    p = atom.poly
    terms = dict(p.terms)
    d20 = terms.get((2, 0), Fraction(0))
    d02 = terms.get((0, 2), Fraction(0))
    d11 = terms.get((1, 1), Fraction(0))
    d10 = terms.get((1, 0), Fraction(0))
    d01 = terms.get((0, 1), Fraction(0))
    d00 = terms.get((0, 0), Fraction(0))
    maxdeg = max((sum(e) for e in terms), default=0)
    if maxdeg <= 1:
        if atom.rel == "=":
            return ("line", (d10, d01, d00))
        if atom.rel in ("<=",):
            return ("halfplane", (d10, d01, d00))
        raise UnsupportedTubes("open halfplanes are not closed sets")
    if maxdeg == 2 and d20 == d02 != 0 and d11 == 0:
        s = d20
        cx = -d10 / (2 * s)
        cy = -d01 / (2 * s)
        r2 = cx * cx + cy * cy - d00 / s
        if r2 < 0:
            raise UnsupportedTubes("empty circle member")
        if atom.rel == "=" and r2 == 0:
            return ("point", (cx, cy))
        if atom.rel == "=":
            return ("circle", (cx, cy, r2))
        if atom.rel == "<=" and s > 0:
            return ("disk", (cx, cy, r2))
    raise UnsupportedTubes(f"no exact tube family for member {m.source.name!r}")


def _dist2_poly(cx, cy):
    x1, x2 = MPoly.var(2, 0), MPoly.var(2, 1)
    dx = x1 - MPoly.const(2, cx)
    dy = x2 - MPoly.const(2, cy)
    return dx * dx + dy * dy


def tube_member(kind_params, which: str, eps: Fraction) -> MemberSet:
    """Member whose set is CT(S, eps) ('ct') or the closed complement of
    OT(S, eps) ('otc')."""
    kind, params = kind_params
    eps = Fraction(eps)
    if kind in ("circle", "point", "disk"):
        if kind == "point":
            cx, cy = params
            r2 = Fraction(0)
        else:
            cx, cy, r2 = params
        d2 = _dist2_poly(cx, cy)
        if kind in ("point", "disk") or r2 == 0:
            # distance measured from a full disk or point
            rr = _sqrt_or_none(r2)
            if rr is None:
                raise UnsupportedTubes("disk tubes need a rational radius")
            if which == "ct":
                return _member_from_formula(("atom", Atom(d2 - MPoly.const(2, (rr + eps) ** 2), "<=")), name="ct")
            return _member_from_formula(("atom", Atom(d2 - MPoly.const(2, (rr + eps) ** 2), ">=")), name="otc")
        rr = _sqrt_or_none(r2)
        if rr is None:
            raise UnsupportedTubes("circle tubes need a rational radius")
        if eps >= rr:
            raise EpsilonTooLarge("tube radius exceeds the circle radius")
        outer = MPoly.const(2, (rr + eps) ** 2)
        inner = MPoly.const(2, (rr - eps) ** 2)
        if which == "ct":
            f = formula_and(
                [("atom", Atom(d2 - outer, "<=")), ("atom", Atom(d2 - inner, ">="))]
            )
            return _member_from_formula(f, name="ct")
        f = formula_or(
            [("atom", Atom(d2 - outer, ">=")), ("atom", Atom(d2 - inner, "<="))]
        )
        return _member_from_formula(f, name="otc")
    if kind == "line":
        a, b, c = params
        x1, x2 = MPoly.var(2, 0), MPoly.var(2, 1)
        lin = x1.scale(a) + x2.scale(b) + MPoly.const(2, c)
        norm2 = MPoly.const(2, eps * eps * (a * a + b * b))
        if which == "ct":
            return _member_from_formula(("atom", Atom(lin * lin - norm2, "<=")), name="ct")
        return _member_from_formula(("atom", Atom(lin * lin - norm2, ">=")), name="otc")
    if kind == "halfplane":
        a, b, c = params
        x1, x2 = MPoly.var(2, 0), MPoly.var(2, 1)
        lin = x1.scale(a) + x2.scale(b) + MPoly.const(2, c)
        norm2 = MPoly.const(2, eps * eps * (a * a + b * b))
        if which == "ct":
            f = formula_or(
                [("atom", Atom(lin, "<=")), ("atom", Atom(lin * lin - norm2, "<="))]
            )
            return _member_from_formula(f, name="ct")
        f = formula_and(
            [("atom", Atom(lin, ">=")), ("atom", Atom(lin * lin - norm2, ">="))]
        )
        return _member_from_formula(f, name="otc")
    raise UnsupportedTubes(kind)


def _sqrt_or_none(r2: Fraction):
    import math

    r2 = Fraction(r2)
    a = math.isqrt(r2.numerator)
    b = math.isqrt(r2.denominator)
    if a * a == r2.numerator and b * b == r2.denominator:
        return Fraction(a, b)
    return None


# -- the closed-bounded replacement -----------------------------------------


@dataclass
class ReplacementResult:
    final: object
    trace: list
    betti_in: tuple | None
    betti_out: tuple


def closed_replacement_1d(members, v: IntervalSet, sigma, ladder: EpsilonLadder) -> ReplacementResult:
    """Inductive replacement of the selected union of basic sets by a
    closed bounded set with the same Betti numbers (1D engine)."""
    n = len(members)
    if len(ladder) < 2 * n:
        raise InadmissibleLadder(f"need 2n = {2*n} ladder radii")
    ladder.validate()
    if not v.is_closed() or not v.is_bounded():
        raise UnsupportedEngine("ambient set must be closed and bounded")
    for m in members:
        if not m.is_closed():
            raise UnsupportedEngine("members must be closed")
    R = IntervalSet.reals()

    def basic(I):
        out = v
        for i in range(n):
            out = out.intersect(members[i] if i in I else members[i].complement())
        return out

    inn = {}
    for r in range(n + 1):
        for I in itertools.combinations(range(n), r):
            if not basic(I).is_empty():
                inn.setdefault(r, []).append(frozenset(I))
    sigma = [frozenset(s) for s in sigma]
    for s in sigma:
        if s not in inn.get(len(s), []):
            raise EngineAssertionFailure(f"sigma index set {sorted(s)} is not realizable")
    x = IntervalSet.empty()
    for s in sigma:
        x = x.union(basic(s))
    trace = [x]
    eps = ladder.values

    def a_cl(I):
        # closed tube radius epsilon_{2m} for m = |I| (1-based indexing)
        out = v
        e = eps[2 * len(I) - 1] if I else None
        for i in range(n):
            if i in I:
                out = out.intersect(onedim.tube("closed", members[i], R, e))
            else:
                out = out.intersect(members[i].complement().closure())
        return out

    def a_open(I):
        out = v
        e = eps[2 * len(I) - 2] if I else None
        for i in range(n):
            if i in I:
                out = out.intersect(onedim.tube("open", members[i], R, e))
            else:
                out = out.intersect(members[i].complement())
        return out

    cur = x
    for m in range(n + 1):
        add = IntervalSet.empty()
        for s in sigma:
            if len(s) == m:
                add = add.union(a_cl(s))
        cut = IntervalSet.empty()
        for s in inn.get(m, []):
            if s not in sigma:
                cut = cut.union(a_open(s))
        cur = cur.union(add).difference(cut)
        trace.append(cur)
    betti_in = _betti(x)
    betti_out = _betti(cur)
    return ReplacementResult(cur, trace, betti_in, betti_out)


def closed_replacement_2d(members, v_member: MemberSet, sigma, ladder: EpsilonLadder) -> ReplacementResult:
    """Plane version for tube-closed members (circles, disks, points,
    lines, halfplanes); the ambient V itself must be a closed member."""
    n = len(members)
    if len(ladder) < 2 * n:
        raise InadmissibleLadder(f"need 2n = {2*n} ladder radii")
    ladder.validate()
    kinds = [classify_tube_member(m) for m in members]
    eps = ladder.values
    master = list(members) + [v_member]
    ct_idx = {}
    otc_idx = {}
    for i, kp in enumerate(kinds):
        for j, e in enumerate(eps):
            ct_idx[(i, j)] = len(master)
            master.append(tube_member(kp, "ct", e))
            otc_idx[(i, j)] = len(master)
            master.append(tube_member(kp, "otc", e))
    arr = build_arrangement(master)
    vi = n
    V = PlanarSet.member(arr, vi)
    if not V.is_closed() or not V.is_bounded():
        raise UnsupportedEngine("ambient member must be a closed bounded set")
    S = [PlanarSet.member(arr, i) for i in range(n)]

    def basic(I):
        out = V
        for i in range(n):
            out = out.intersect(S[i] if i in I else S[i].complement())
        return out

    inn = {}
    for r in range(n + 1):
        for I in itertools.combinations(range(n), r):
            if not basic(I).is_empty():
                inn.setdefault(r, []).append(frozenset(I))
    sigma = [frozenset(s) for s in sigma]
    x = None
    for s in sigma:
        x = basic(s) if x is None else x.union(basic(s))
    if x is None:
        x = PlanarSet(arr, ())
    trace = [x]
    cur = x
    for m in range(n + 1):
        add = PlanarSet(arr, ())
        for s in sigma:
            if len(s) == m:
                piece = V
                for i in range(n):
                    if i in s:
                        piece = piece.intersect(PlanarSet.member(arr, ct_idx[(i, 2 * m - 1)]))
                    else:
                        piece = piece.intersect(S[i].complement().closure())
                add = add.union(piece)
        cut = PlanarSet(arr, ())
        for s in inn.get(m, []):
            if s not in sigma:
                piece = V
                for i in range(n):
                    if i in s:
                        ot = PlanarSet.member(arr, otc_idx[(i, 2 * m - 2)]).complement()
                        piece = piece.intersect(ot)
                    else:
                        piece = piece.intersect(S[i].complement())
                cut = cut.union(piece)
        cur = cur.union(add).difference(cut)
        trace.append(cur)
    betti_in = None
    try:
        betti_in = _betti(x)
    except Exception:
        pass
    return ReplacementResult(cur, trace, betti_in, _betti(cur))


def serialize_trace(result: ReplacementResult) -> str:
    lines = []
    for i, s in enumerate(result.trace):
        body = onedim.to_text(s) if isinstance(s, IntervalSet) else s.serialize()
        lines.append(f"X^{i} = {body}")
    return "\n".join(lines)


# -- annulus-complement reduction -------------------------------------------


def annulus_reduction(members, v, eps1, eps2):
    """Components of the intersection of all annulus complements inside V,
    matched bijectively onto the cells of the arrangement restricted to V."""
    eps1, eps2 = Fraction(eps1), Fraction(eps2)
    if not eps1 > eps2 > 0:
        raise EpsilonTooLarge("need eps1 > eps2 > 0")
    if isinstance(v, IntervalSet):
        return _annulus_1d(members, v, eps1, eps2)
    return _annulus_2d(members, v, eps1, eps2)


def _annulus_1d(members, v, eps1, eps2):
    R = IntervalSet.reals()
    cfg = feature_points([v] + list(members))
    rmin = onedim.min_positive_critical_radius(cfg, cfg)
    if rmin is not None:
        bound = rmin if isinstance(rmin, Fraction) else _rational_below(rmin)
        if not eps1 < bound:
            raise EpsilonTooLarge(f"eps1 = {eps1} not below certificate {bound}")
    reduced = v
    for m in members:
        ann = onedim.tube("annulus", m, R, eps1, eps2)
        reduced = reduced.intersect(ann.complement())
    n = len(members)
    comps = [IntervalSet([p], _canonical=True) for p in reduced.pieces]
    cells = []
    mapping = {}
    used = set()
    for r in range(n + 1):
        for I in itertools.combinations(range(n), r):
            a = v
            w = v
            for i in range(n):
                if i in I:
                    a = a.intersect(members[i])
                    w = w.intersect(onedim.tube("closed", members[i], R, eps2))
                else:
                    a = a.intersect(members[i].complement())
                    w = w.intersect(onedim.tube("open", members[i], R, eps1).complement())
            a_pieces = list(a.pieces)
            w_pieces = list(w.pieces)
            if len(a_pieces) != len(w_pieces):
                raise EpsilonTooLarge(
                    f"thickened index set {sorted(I)} changed component count"
                )
            # left-to-right rank matches the cell with its thickened copy
            for k, (ap, wp) in enumerate(zip(a_pieces, w_pieces)):
                cell = IntervalSet([ap], _canonical=True)
                wset = IntervalSet([wp], _canonical=True)
                target = None
                for ci, comp in enumerate(comps):
                    if wset.is_subset(comp):
                        target = ci
                        break
                if target is None or target in used:
                    raise EpsilonTooLarge("no bijective matching; radii too large")
                used.add(target)
                cells.append((frozenset(I), cell))
                mapping[(frozenset(I), k)] = target
    if len(used) != len(comps):
        raise EpsilonTooLarge("reduced set has extra components")
    return {
        "components": comps,
        "cells": cells,
        "bijection": mapping,
        "b0_cells": len(cells),
        "b0_reduced": len(comps),
    }


def _annulus_2d(members, v_member, eps1, eps2):
    kinds = [classify_tube_member(m) for m in members]
    master = list(members) + [v_member]
    ct2, ot1c = {}, {}
    for i, kp in enumerate(kinds):
        ct2[i] = len(master)
        master.append(tube_member(kp, "ct", eps2))
        ot1c[i] = len(master)
        master.append(tube_member(kp, "otc", eps1))
    arr = build_arrangement(master)
    n = len(members)
    V = PlanarSet.member(arr, n)
    S = [PlanarSet.member(arr, i) for i in range(n)]
    reduced = V
    for i in range(n):
        ann_c = PlanarSet.member(arr, ct2[i]).union(PlanarSet.member(arr, ot1c[i]))
        reduced = reduced.intersect(ann_c)
    comps = reduced.components()
    cells = []
    mapping = {}
    used = set()
    for r in range(n + 1):
        for I in itertools.combinations(range(n), r):
            a = V
            w = V
            for i in range(n):
                if i in I:
                    a = a.intersect(S[i])
                    w = w.intersect(PlanarSet.member(arr, ct2[i]))
                else:
                    a = a.intersect(S[i].complement())
                    w = w.intersect(PlanarSet.member(arr, ot1c[i]))
            a_comps = a.components()
            w_comps = w.components()
            if len(a_comps) != len(w_comps):
                raise EpsilonTooLarge(
                    f"thickened index set {sorted(I)} changed component count"
                )
            for k, (cell, wc) in enumerate(zip(a_comps, w_comps)):
                target = None
                for ci, comp in enumerate(comps):
                    if wc.ids <= comp.ids:
                        target = ci
                        break
                if target is None or target in used:
                    raise EpsilonTooLarge("no bijective matching; radii too large")
                used.add(target)
                cells.append((frozenset(I), cell))
                mapping[(frozenset(I), k)] = target
    if len(used) != len(comps):
        raise EpsilonTooLarge("reduced set has extra components")
    return {
        "components": comps,
        "cells": cells,
        "bijection": mapping,
        "b0_cells": len(cells),
        "b0_reduced": len(comps),
    }


# -- tube family decomposition ----------------------------------------------


def tube_family_decomposition(members, v: IntervalSet, eps_list, test_sets=()):
    """The enlarged family {S_i, BT(S_i, e_i), OT(S_i, 2 e_i)^c}: returns
    its cell census over V and checks b(S) <= census for closed test sets.

    Line engine only; eps_list descending (e_1 >> ... >> e_n)."""
    if not isinstance(v, IntervalSet):
        raise UnsupportedEngine("tube family decomposition runs on the line engine")
    eps_list = [Fraction(e) for e in eps_list]
    if any(eps_list[i] <= eps_list[i + 1] for i in range(len(eps_list) - 1)):
        raise EpsilonTooLarge("radii must be strictly decreasing")
    R = IntervalSet.reals()
    fam = []
    for m, e in zip(members, eps_list):
        fam.append(m)
        fam.append(onedim.tube("boundary", m, R, e))
        fam.append(onedim.tube("open", m, R, 2 * e).complement())
    cells = onedim.arrangement_cells(fam, v=v)
    census = sum(c.b0() for c, _ in cells)
    checks = []
    for s in test_sets:
        b = s.intersect(v).b0()
        checks.append((b, census, b <= census))
    return {"family": fam, "cells": cells, "census": census, "checks": checks}
