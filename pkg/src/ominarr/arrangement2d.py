"""Planar arrangement engine: cells (connected components of basic sets),
sign conditions, Betti numbers of cell-union sets, censuses, and
restriction to a curve.

Betti computations in the plane:
  * 0-dimensional pieces: count;
  * 1-dimensional pieces: cycle rank of the incidence multigraph
    (missing or unbounded endpoints become degree-one virtual leaves);
  * closed sets: b1 = b0 - chi, with chi obtained from the compactly
    supported Euler characteristic plus the number of arcs the set cuts
    on a circle beyond all features (the conical structure at infinity);
  * open sets: the number of bounded complement components per component
    (with the open-surface Euler shortcut used on census hot paths).
Anything else (mixed-dimension pieces) is rejected rather than guessed.
"""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import cad as cadmod
from . import bipoly, upoly
from .errors import (
    EngineAssertionFailure,
    NonExactMember,
    NotSquareFree,
    NotUnionOfCells,
    UnsupportedTopology,
)
from .family import MemberSet


class DisjointSet:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, i):
        p = self.parent
        root = i
        while p[root] != root:
            root = p[root]
        while p[i] != root:
            p[i], i = root, p[i]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


@dataclass
class BettiVector:
    b0: int
    b1: int

    def total(self) -> int:
        return self.b0 + self.b1

    def as_tuple(self):
        return (self.b0, self.b1)


@dataclass
class ArrangementCell:
    id: int
    dimension: int
    sign_vector: tuple | None
    membership: tuple
    cad_cells: tuple
    sample: tuple
    unbounded: bool
    adjacency: list = field(default_factory=list)


@dataclass
class CellGroup:
    index_set: frozenset
    components: list  # lists of cad cell ids


class PlaneArrangement:
    def __init__(self, members, cad, cells, cell_of_cad):
        self.members = members
        self.cad = cad
        self.cells = cells
        self.cell_of_cad = cell_of_cad

    @property
    def n(self) -> int:
        return len(self.members)

    def total_cells(self) -> int:
        return len(self.cells)


def build_arrangement(members: list[MemberSet]) -> PlaneArrangement:
    """Exact decomposition of the plane into the connected components of
    all basic sets of the member family."""
    c = cadmod.Cad(members)
    ncad = len(c.cells)
    ds = DisjointSet(ncad)
    for lo, hi in c.frontier_edges():
        if c.cells[lo].membership == c.cells[hi].membership:
            ds.union(lo, hi)
    groups: dict[int, list[int]] = {}
    for i in range(ncad):
        groups.setdefault(ds.find(i), []).append(i)
    order = sorted(groups)
    cells = []
    cell_of_cad = [0] * ncad
    for cid, root in enumerate(order):
        ids = groups[root]
        for i in ids:
            cell_of_cad[i] = cid
        dim = max(c.cells[i].dim for i in ids)
        rep = min((i for i in ids if c.cells[i].dim == dim))
        sig = _constant_sign_vector(c, ids)
        cells.append(
            ArrangementCell(
                id=cid,
                dimension=dim,
                sign_vector=sig,
                membership=c.cells[ids[0]].membership,
                cad_cells=tuple(sorted(ids)),
                sample=c.cells[rep].sample,
                unbounded=any(c.cells[i].unbounded for i in ids),
            )
        )
    adj = [set() for _ in cells]
    for lo, hi in c.frontier_edges():
        a, b = cell_of_cad[lo], cell_of_cad[hi]
        if a != b:
            adj[a].add(b)
            adj[b].add(a)
    for cell in cells:
        cell.adjacency = sorted(adj[cell.id])
    arr = PlaneArrangement(members, c, cells, cell_of_cad)
    _sanity_checks(arr)
    return arr


def _constant_sign_vector(c, ids):
    pairs = []
    for mp in c.member_atoms:
        if len(mp) != 1:
            return None
        pairs.append(mp[0])
    vec = None
    for i in ids:
        sig = c.cells[i].atom_signs
        v = tuple((sig[ai] * o if ai >= 0 else 0) for ai, o in pairs)
        if vec is None:
            vec = v
        elif v != vec:
            return None
    return vec


def _sanity_checks(arr):
    c = arr.cad
    if c.euler_compact_support() != 1:
        raise EngineAssertionFailure("cad does not partition the plane (chi_c != 1)")
    two_cell_count: dict[int, int] = {}
    for lo, hi in c.frontier_edges():
        if c.cells[lo].dim == 1 and c.cells[hi].dim == 2:
            two_cell_count[lo] = two_cell_count.get(lo, 0) + 1
    for k, v in two_cell_count.items():
        if v > 2:
            raise EngineAssertionFailure("a 1-cell borders more than two 2-cells")


# -- component machinery on cad cell sets --------------------------------


def components_of(c, ids) -> list[list[int]]:
    idset = set(ids)
    back = sorted(idset)
    idx = {cid: i for i, cid in enumerate(back)}
    ds = DisjointSet(len(idx))
    for cid in back:
        for hi in c.adj_up[cid]:
            if hi in idset:
                ds.union(idx[cid], idx[hi])
    comps: dict[int, list[int]] = {}
    for cid in back:
        comps.setdefault(ds.find(idx[cid]), []).append(cid)
    return [comps[r] for r in sorted(comps)]


def closure_cells(c, ids) -> set:
    out = set(ids)
    stack = list(ids)
    while stack:
        cid = stack.pop()
        for lo in c.adj_down[cid]:
            if lo not in out:
                out.add(lo)
                stack.append(lo)
    return out


def is_closed_cells(c, ids) -> bool:
    idset = set(ids)
    return all(lo in idset for hi in idset for lo in c.adj_down[hi])


def is_open_cells(c, ids) -> bool:
    idset = set(ids)
    return all(hi in idset for lo in idset for hi in c.adj_up[lo])


def _chi_c(c, ids) -> int:
    return sum((-1) ** c.cells[i].dim for i in ids)


def _infinity_runs(c, ids) -> tuple[int, bool]:
    """Number of cyclic runs of in-set cells along the circle beyond all
    features, plus whether the whole circle is covered."""
    cyc = c.infinity_cycle
    flags = [cid in ids for cid in cyc]
    if all(flags):
        return 1, True
    if not any(flags):
        return 0, False
    runs = 0
    for i, f in enumerate(flags):
        if f and not flags[i - 1]:
            runs += 1
    return runs, False


def _graph_b1(c, comp) -> int:
    edges = [i for i in comp if c.cells[i].dim == 1]
    verts = {i for i in comp if c.cells[i].dim == 0}
    v_real = len(verts)
    v_virtual = 0
    e_count = len(edges)
    for i in edges:
        in_comp = sum(1 for e in c.adj_down[i] if e in verts)
        v_virtual += 2 - in_comp
    return e_count - (v_real + v_virtual) + 1 if (e_count or verts) else 0


def _closed_component_b1(c, comp) -> int:
    chi_c = _chi_c(c, comp)
    runs, full = _infinity_runs(c, set(comp))
    chi_top = chi_c + (0 if full else runs)
    return 1 - chi_top


def _open_component_b1(c, comp, all_ids) -> int:
    rest = [i for i in all_ids if i not in set(comp)]
    bounded = 0
    for cc in components_of(c, rest):
        if not any(c.cells[i].unbounded for i in cc):
            bounded += 1
    return bounded


def _open_component_b1_fast(c, comp) -> int:
    # connected open planar surface: chi = 1 - b1
    return 1 - _chi_c(c, comp)


def betti_of_cells(c, ids, fast_open=False) -> BettiVector:
    """Betti vector of a union of cad cells, dispatching on shape."""
    ids = set(ids)
    if not ids:
        return BettiVector(0, 0)
    comps = components_of(c, ids)
    b0 = len(comps)
    b1 = 0
    all_ids = range(len(c.cells))
    for comp in comps:
        dims = {c.cells[i].dim for i in comp}
        if dims <= {0}:
            continue
        if dims <= {0, 1}:
            b1 += _graph_b1(c, comp)
            continue
        if is_closed_cells(c, comp):
            b1 += _closed_component_b1(c, comp)
        elif is_open_cells(c, comp):
            if fast_open:
                b1 += _open_component_b1_fast(c, comp)
            else:
                b1 += _open_component_b1(c, comp, all_ids)
        else:
            raise UnsupportedTopology(
                "component is neither closed, open, nor of dimension <= 1"
            )
    return BettiVector(b0, b1)


# -- spec operations -------------------------------------------------------


def realizable_sign_conditions(arr: PlaneArrangement):
    """All realizable sign conditions with their component counts."""
    c = arr.cad
    for pairs in c.member_atoms:
        if len(pairs) != 1:
            raise NotUnionOfCells("sign conditions need single-atom members")
    n = len(c.members)
    sign_of = [tuple(c.member_sign(cell, m) for m in range(n)) for cell in c.cells]
    ds = DisjointSet(len(c.cells))
    for lo, hi in c.frontier_edges():
        if sign_of[lo] == sign_of[hi]:
            ds.union(lo, hi)
    counts: dict[tuple, set] = {}
    for i in range(len(c.cells)):
        counts.setdefault(sign_of[i], set()).add(ds.find(i))
    return {sigma: len(roots) for sigma, roots in counts.items()}


def basic_set_cells(arr: PlaneArrangement, index_set) -> CellGroup:
    """Connected components of the basic set selected by index_set."""
    n = arr.n
    want = tuple(i in set(index_set) for i in range(n))
    comp = []
    for cell in arr.cells:
        if cell.membership == want:
            comp.append(list(cell.cad_cells))
    return CellGroup(index_set=frozenset(index_set), components=comp)


def betti_of_set(arr: PlaneArrangement, phi) -> BettiVector:
    """Betti vector of the set selected by phi(membership tuple) -> bool."""
    c = arr.cad
    ids = [cell.id for cell in c.cells if phi(cell.membership)]
    return betti_of_cells(c, ids)


def all_cells_census(arr: PlaneArrangement):
    """Per-degree totals over all arrangement cells (the paper-facing
    census): sum of b0 and b1 over connected components of basic sets."""
    c = arr.cad
    sum_b0 = len(arr.cells)
    sum_b1 = 0
    max_cell_b = 0
    per_cell = []
    for cell in arr.cells:
        comp = list(cell.cad_cells)
        dims = {c.cells[i].dim for i in comp}
        if dims <= {0}:
            b1 = 0
        elif dims <= {0, 1}:
            b1 = _graph_b1(c, comp)
        elif is_open_cells(c, comp):
            b1 = _open_component_b1_fast(c, comp)
        elif is_closed_cells(c, comp):
            b1 = _closed_component_b1(c, comp)
        else:
            raise UnsupportedTopology("cell is neither open, closed, nor thin")
        per_cell.append(b1)
        sum_b1 += b1
        max_cell_b = max(max_cell_b, 1 + b1)
    return {
        "total_cells": sum_b0,
        "sum_b0": sum_b0,
        "sum_b1": sum_b1,
        "max_cell_b": max_cell_b,
        "per_cell_b1": per_cell,
    }


def selection_complexity(arr: PlaneArrangement, cell_ids) -> int:
    """Topological complexity (sum of b0+b1) of a chosen set of cells,
    for comparison against the any-m-cells bound."""
    census = all_cells_census(arr)
    return sum(1 + census["per_cell_b1"][i] for i in cell_ids)


def restrict_to_curve(members: list[MemberSet], v_member: MemberSet):
    """Census of the arrangement cells restricted to the curve V.

    Returns (census dict, components) where components are lists of cad
    cell ids of the refined arrangement.
    """
    atom = v_member.single_atom()
    if atom is None:
        raise NotSquareFree("V must be a single polynomial equation")
    p = atom.poly.to_bipoly()
    if not _is_squarefree_bipoly(p):
        raise NotSquareFree("V must be square-free")
    c = cadmod.Cad(list(members) + [v_member])
    vi = len(members)
    on_v = [cell.id for cell in c.cells if cell.membership[vi]]
    key = {}
    for cid in on_v:
        key[cid] = c.cells[cid].membership[:vi]
    ds_ids = []
    comps = []
    for comp in components_of(c, on_v):
        # split by membership vector (components of A(I) on V)
        byvec: dict[tuple, list[int]] = {}
        for cid in comp:
            byvec.setdefault(key[cid], []).append(cid)
        for vec, ids in sorted(byvec.items()):
            for sub in components_of(c, ids):
                comps.append(sub)
    sum_b0 = len(comps)
    sum_b1 = 0
    for comp in comps:
        dims = {c.cells[i].dim for i in comp}
        if not dims <= {0, 1}:
            raise NotSquareFree("V has a 2-dimensional part")
        sum_b1 += _graph_b1(c, comp)
    return (
        {"total_cells": sum_b0, "sum_b0": sum_b0, "sum_b1": sum_b1},
        comps,
        c,
    )


def _is_squarefree_bipoly(p) -> bool:
    cont = bipoly.content_y(p)
    if upoly.degree(cont) >= 1:
        if upoly.degree(upoly.gcd(cont, upoly.derivative(cont))) >= 1:
            return False
    qp = bipoly.primitive_y(p)
    if bipoly.deg_y(qp) >= 1:
        r = bipoly.resultant_y(qp, bipoly.d_dy(qp))
        if upoly.is_zero(r):
            return False
    return True


class PlanarSet:
    """A union of cad cells of a fixed arrangement, with exact Boolean
    operations, closure, and Betti numbers."""

    __slots__ = ("arr", "ids")

    def __init__(self, arr: PlaneArrangement, ids):
        self.arr = arr
        self.ids = frozenset(ids)

    @staticmethod
    def from_membership(arr, phi) -> "PlanarSet":
        return PlanarSet(
            arr, (c.id for c in arr.cad.cells if phi(c.membership))
        )

    @staticmethod
    def member(arr, i) -> "PlanarSet":
        return PlanarSet.from_membership(arr, lambda m: m[i])

    def _wrap(self, ids):
        return PlanarSet(self.arr, ids)

    def union(self, o):
        return self._wrap(self.ids | o.ids)

    def intersect(self, o):
        return self._wrap(self.ids & o.ids)

    def difference(self, o):
        return self._wrap(self.ids - o.ids)

    def complement(self):
        return self._wrap(set(range(len(self.arr.cad.cells))) - self.ids)

    def closure(self):
        return self._wrap(closure_cells(self.arr.cad, self.ids))

    def is_empty(self):
        return not self.ids

    def is_closed(self):
        return is_closed_cells(self.arr.cad, self.ids)

    def is_open(self):
        return is_open_cells(self.arr.cad, self.ids)

    def is_bounded(self):
        return not any(self.arr.cad.cells[i].unbounded for i in self.ids)

    def betti(self) -> BettiVector:
        return betti_of_cells(self.arr.cad, self.ids)

    def components(self):
        return [self._wrap(c) for c in components_of(self.arr.cad, self.ids)]

    def serialize(self) -> str:
        return "cells:" + ",".join(map(str, sorted(self.ids)))

    def __eq__(self, o):
        return isinstance(o, PlanarSet) and self.ids == o.ids and self.arr is o.arr

    def __hash__(self):
        return hash(self.ids)


# -- census report ---------------------------------------------------------

CENSUS_COLUMNS = ["n", "seed", "total_cells", "sum_b0", "sum_b1", "max_cell_b", "wall_time_ms"]


def census_row(members, seed) -> dict:
    t0 = time.perf_counter()
    arr = build_arrangement(members)
    census = all_cells_census(arr)
    ms = int((time.perf_counter() - t0) * 1000)
    return {
        "n": len(members),
        "seed": seed,
        "total_cells": census["total_cells"],
        "sum_b0": census["sum_b0"],
        "sum_b1": census["sum_b1"],
        "max_cell_b": census["max_cell_b"],
        "wall_time_ms": ms,
    }


def census_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CENSUS_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()
