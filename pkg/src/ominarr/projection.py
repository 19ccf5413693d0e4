"""Fibered products over a coordinate projection and the desk-scale check
of the image-Betti inequality: b_q(image) is bounded by the Betti numbers
of the repeated fibered products of the source.

The exact engines stop at the plane, so the order-p product is computed
symbolically for every p, while exact component counts run for p <= 1 on
closed bounded unions of plane curves projected to the second coordinate
(branch gluing across critical values of the shared axis)."""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import cad as cadmod
from . import onedim
from .arrangement2d import DisjointSet, betti_of_cells
from .errors import NotBoundedCurve, NotClosedBounded, UnsupportedEngine
from .family import Atom, MPoly, MemberSet, _member_from_formula, formula_and
from .onedim import IntervalSet


@dataclass
class FiberedProductFormula:
    base_formula: tuple
    k1: int
    k2: int
    order: int
    formula: tuple
    n_members: int


def _remap_poly(p: MPoly, k1: int, k2: int, copy: int, total: int) -> MPoly:
    terms = {}
    for e, c in p.terms.items():
        new = [0] * total
        for i, pw in enumerate(e):
            if not pw:
                continue
            if i < k1:
                new[copy * k1 + i] = pw
            else:
                new[total - k2 + (i - k1)] = pw
        terms[tuple(new)] = terms.get(tuple(new), Fraction(0)) + c
    return MPoly(total, terms)


def _remap_formula(f, k1, k2, copy, total):
    kind = f[0]
    if kind == "atom":
        return ("atom", Atom(_remap_poly(f[1].poly, k1, k2, copy, total), f[1].rel))
    if kind in ("true", "false"):
        return f
    if kind == "not":
        return ("not", _remap_formula(f[1], k1, k2, copy, total))
    return (kind, [_remap_formula(g, k1, k2, copy, total) for g in f[1]])


def fibered_product_formula(base_formula, k1: int, k2: int, p: int, n_members: int = 1) -> FiberedProductFormula:
    """Conjunction of p+1 copies of the base formula, each with its own
    block of the first k1 coordinates and a shared block of the last k2."""
    total = (p + 1) * k1 + k2
    if p == 0:
        return FiberedProductFormula(base_formula, k1, k2, 0, base_formula, n_members)
    parts = [_remap_formula(base_formula, k1, k2, j, total) for j in range(p + 1)]
    return FiberedProductFormula(
        base_formula, k1, k2, p, formula_and(parts), (p + 1) * n_members
    )


# -- exact component machinery on plane curves -------------------------------


class SharedAxisCad:
    """Cylindrical decomposition with the projection axis as base variable
    (members are the input curves with coordinates swapped)."""

    def __init__(self, members):
        for m in members:
            atom = m.single_atom()
            if atom is None or atom.rel != "=":
                raise UnsupportedEngine("fibered products need curve members (single equations)")
        swapped = []
        for m in members:
            atom = m.single_atom()
            swapped.append(
                _member_from_formula(("atom", Atom(_swap_xy_mpoly(atom.poly), "=")), name="swap")
            )
        self.cad = cadmod.Cad(swapped)
        self.n = len(members)

    def s_cells(self):
        return [c.id for c in self.cad.cells if any(c.membership)]

    def check_closed_bounded(self):
        c = self.cad
        ids = set(self.s_cells())
        for i in ids:
            if c.cells[i].unbounded:
                raise NotClosedBounded("the source set is unbounded")
            for lo in c.adj_down[i]:
                if lo not in ids:
                    raise NotClosedBounded("the source set is not closed")

    def section_positions(self, b):
        """Merged stack positions (section indices) carrying the set."""
        st = self.cad.stacks[b]
        out = []
        for j, sec in enumerate(st.sections):
            cell = self.cad.cells[st.cell_ids[2 * j + 1]]
            if any(cell.membership):
                out.append(j)
        return out

    def limit_of(self, b, j, bp):
        """Merged section index over point base cell bp that the section j
        of interval base cell b converges to."""
        c = self.cad
        sec_cell = c.stacks[b].cell_ids[2 * j + 1]
        for lo in c.adj_down[sec_cell]:
            lc = c.cells[lo]
            if lc.base_index == bp and lc.dim == 0:
                return (lc.pos - 1) // 2
        raise NotBoundedCurve("a branch escapes instead of converging")


def _swap_xy_mpoly(p: MPoly) -> MPoly:
    assert p.nvars == 2
    return MPoly(2, {(e[1], e[0]): c for e, c in p.terms.items()})


def fibered_product_b0_curve(members, p: int) -> int:
    """b0 of the order-p fibered product of a closed bounded union of
    plane curves over the projection to the second coordinate."""
    if p not in (0, 1):
        raise UnsupportedEngine("exact component counts run for p <= 1")
    sx = SharedAxisCad(members)
    sx.check_closed_bounded()
    c = sx.cad
    if p == 0:
        return betti_of_cells(c, sx.s_cells()).b0
    nodes = {}
    nb = c.base_cell_count()
    for b in range(nb):
        for i in sx.section_positions(b):
            for j in sx.section_positions(b):
                nodes[(b, i, j)] = len(nodes)
    if not nodes:
        return 0
    ds = DisjointSet(len(nodes))
    for b in range(0, nb, 2):  # interval base cells
        secs = sx.section_positions(b)
        if not secs:
            continue
        for bp in (b - 1, b + 1):
            if bp < 0 or bp >= nb:
                raise NotBoundedCurve("the source set is unbounded")
            lim = {i: sx.limit_of(b, i, bp) for i in secs}
            for i in secs:
                for j in secs:
                    a = nodes[(b, i, j)]
                    t = nodes.get((bp, lim[i], lim[j]))
                    if t is None:
                        raise NotBoundedCurve("branch limit is outside the set")
                    ds.union(a, t)
    return len({ds.find(v) for v in nodes.values()})


def project_image(members) -> IntervalSet:
    """Exact image of the closed bounded curve union under the projection
    to the second coordinate, as an IntervalSet."""
    sx = SharedAxisCad(members)
    sx.check_closed_bounded()
    c = sx.cad
    pieces = []
    vals = [bp.value for bp in c.base_points]
    nb = c.base_cell_count()
    for b in range(nb):
        if not sx.section_positions(b):
            continue
        if b % 2 == 1:
            v = vals[b // 2]
            pieces.append(onedim.Piece(v, True, v, True))
        else:
            lo = vals[b // 2 - 1] if b > 0 else onedim.NEG_INF
            hi = vals[b // 2] if b // 2 < len(vals) else onedim.POS_INF
            pieces.append(onedim.Piece(lo, False, hi, False))
    return IntervalSet(pieces)


@dataclass
class ProjectionReport:
    rows: list  # (q, lhs, rhs, ok)

    def all_ok(self):
        return all(r[3] for r in self.rows)

    def to_csv(self, instance_id="-") -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["instance_id", "q", "lhs", "rhs", "pass"])
        for q, lhs, rhs, ok in self.rows:
            w.writerow([instance_id, q, lhs, rhs, int(ok)])
        return buf.getvalue()


def projection_inequality_check(members) -> ProjectionReport:
    """b_q(image) <= sum of b_j of the order-i products, i+j = q, checked
    exactly for q in {0, 1} on a closed bounded plane curve union."""
    y = project_image(members)
    sx = SharedAxisCad(members)
    c = sx.cad
    w0 = betti_of_cells(c, sx.s_cells())
    b0_w1 = fibered_product_b0_curve(members, 1)
    rows = [
        (0, y.b0(), w0.b0, y.b0() <= w0.b0),
        (1, 0, w0.b1 + b0_w1, 0 <= w0.b1 + b0_w1),
    ]
    return ProjectionReport(rows)


def projection_bound(n: int, k1: int, k2: int, c) -> Fraction:
    """The closed-form image complexity bound C * n^((k1+1) k2)."""
    if n < 1 or k1 < 1 or k2 < 1:
        raise UnsupportedEngine("parameters must be positive")
    return Fraction(c) * Fraction(n) ** ((k1 + 1) * k2)
