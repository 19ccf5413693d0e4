"""Quantitative cylindrical cell decomposition with per-cell determinant
index lists: every cell records the few member indices whose projection
data carve it out, bounded by 2(2^k - 1) (2 on the line, 6 in the plane).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import algebraic, bipoly, cad as cadmod, numberfield, onedim, upoly
from .errors import NonExactMember, UnknownCell
from .family import MemberSet, realize_1d
from .numeric import simplest_between

MAX_DET = {1: 2, 2: 6}


@dataclass
class CdcdCell:
    id: int
    level: int
    kind: str  # point | interval | section | band
    determinants: tuple
    membership: tuple | None = None
    base_index: int | None = None
    pos: int | None = None


class CdcdTree:
    def __init__(self, k, cells, members, engine=None, base_values=None, n=None):
        self.k = k
        self.cells = cells
        self.members = members
        self.engine = engine  # the plane cad for k=2
        self.base_values = base_values
        self.n = n if n is not None else len(members)

    def total_cells(self) -> int:
        return len([c for c in self.cells if c.level == self.k])

    def determinant_indices(self, cell_id: int):
        for c in self.cells:
            if c.id == cell_id:
                return list(c.determinants)
        raise UnknownCell(f"no cell {cell_id}")

    def dump(self) -> str:
        lines = []
        for c in self.cells:
            indent = "  " * (c.level - 1)
            lines.append(
                f"{indent}({c.id}, level={c.level}, kind={c.kind}, "
                f"determinants={sorted(c.determinants)})"
            )
        return "\n".join(lines)


def _as_interval_sets(members):
    out = []
    for m in members:
        if isinstance(m, onedim.IntervalSet):
            out.append(m)
        elif isinstance(m, MemberSet):
            out.append(realize_1d(m))
        else:
            raise NonExactMember(f"unsupported 1d member {m!r}")
    return out


def build_cdcd(members, k: int) -> CdcdTree:
    if k == 1:
        return _build_1d(members)
    if k == 2:
        return _build_2d(members)
    raise NonExactMember("cdcd supports k in {1, 2} only")


def _build_1d(members) -> CdcdTree:
    sets = _as_interval_sets(members)
    events = []  # (value, owner member)
    for mi, s in enumerate(sets):
        for e in s.endpoints():
            events.append((e, mi))
    events.sort(key=lambda t: algebraic.sort_key(t[0]))
    pts: list = []
    owners: list[int] = []
    for v, mi in events:
        if pts and algebraic.cmp(pts[-1], v) == 0:
            owners[-1] = min(owners[-1], mi)
        else:
            pts.append(v)
            owners.append(mi)
    samples = algebraic.sample_points(pts)
    cells = []
    cid = 0
    for b in range(2 * len(pts) + 1):
        if b % 2 == 1:
            p = b // 2
            det = (owners[p],)
            kind = "point"
            rep = pts[p]
        else:
            left = {owners[b // 2 - 1]} if b > 0 else set()
            right = {owners[b // 2]} if b // 2 < len(pts) else set()
            det = tuple(sorted(left | right))
            kind = "interval"
            rep = samples[b // 2]
        membership = tuple(s.contains(rep) for s in sets)
        cells.append(
            CdcdCell(
                id=cid,
                level=1,
                kind=kind,
                determinants=det,
                membership=membership,
                base_index=b,
            )
        )
        cid += 1
    for c in cells:
        assert len(c.determinants) <= MAX_DET[1]
    return CdcdTree(1, cells, sets, base_values=pts, n=len(sets))


def _build_2d(members) -> CdcdTree:
    for m in members:
        if not isinstance(m, MemberSet) or not m.is_exact():
            raise NonExactMember("k=2 cdcd needs exact plane members")
    c = cadmod.Cad(list(members))
    cells = []
    cid = 0
    base_ids = {}
    for b in range(c.base_cell_count()):
        kind = "point" if b % 2 == 1 else "interval"
        if b % 2 == 1:
            det = c.base_points[b // 2].owner_members()
        else:
            det = set()
            if b > 0:
                det.update(c.base_points[b // 2 - 1].owner_members())
            if b < c.base_cell_count() - 1:
                det.update(c.base_points[b // 2].owner_members())
            det = tuple(sorted(det))
        cells.append(CdcdCell(id=cid, level=1, kind=kind, determinants=tuple(det), base_index=b))
        base_ids[b] = cid
        cid += 1
    for cell in c.cells:
        kind = "section" if cell.is_section() else "band"
        cells.append(
            CdcdCell(
                id=cid,
                level=2,
                kind=kind,
                determinants=cell.determinants,
                membership=cell.membership,
                base_index=cell.base_index,
                pos=cell.pos,
            )
        )
        cid += 1
    for cc in cells:
        # base cells of the plane decomposition carry up to two owner
        # pairs (4 indices); full plane cells are capped at 2(2^2-1) = 6
        cap = MAX_DET[2] if cc.level == 2 else 4
        if len(cc.determinants) > cap:
            raise AssertionError("determinant bound violated")
    return CdcdTree(2, cells, list(members), engine=c, n=len(members))


def verify_adapted_partition(tree: CdcdTree, members) -> tuple[bool, dict | None]:
    """Structural partition checks plus member sign-invariance re-sampled
    at fresh points; returns (ok, counterexample info)."""
    if tree.k == 1:
        return _verify_1d(tree, members)
    return _verify_2d(tree, members)


def _verify_1d(tree, members):
    sets = _as_interval_sets(members)
    pts = tree.base_values
    for i in range(len(pts) - 1):
        if algebraic.cmp(pts[i], pts[i + 1]) >= 0:
            return False, {"reason": "base points not increasing", "index": i}
    # every member endpoint must be a base point
    for mi, s in enumerate(sets):
        for e in s.endpoints():
            if not any(algebraic.cmp(e, p) == 0 for p in pts):
                return False, {"reason": "missing endpoint", "member": mi}
    samples = algebraic.sample_points(pts)
    level = [c for c in tree.cells if c.level == 1]
    if len(level) != 2 * len(pts) + 1:
        return False, {"reason": "cell count mismatch"}
    for c in level:
        b = c.base_index
        if b % 2 == 1:
            rep = pts[b // 2]
            rep2 = rep
        else:
            rep = samples[b // 2]
            lo = pts[b // 2 - 1] if b > 0 else None
            hi = pts[b // 2] if b // 2 < len(pts) else None
            rep2 = _second_sample(lo, rep, hi)
        for r in (rep, rep2):
            got = tuple(s.contains(r) for s in sets)
            if got != c.membership:
                return False, {"reason": "sign not constant", "cell": c.id}
    return True, None


def _second_sample(lo, rep, hi):
    if hi is not None:
        hi_b = hi.lo if isinstance(hi, algebraic.RealAlg) else Fraction(hi)
        while not hi_b > rep:
            hi.refine()
            hi_b = hi.lo
        return simplest_between(Fraction(rep), Fraction(hi_b))
    return Fraction(rep) + 1


def _verify_2d(tree, members):
    c = tree.engine
    # base points strictly increasing
    for i in range(len(c.base_points) - 1):
        if algebraic.cmp(c.base_points[i].value, c.base_points[i + 1].value) >= 0:
            return False, {"reason": "base points not increasing", "index": i}
    plane_cells = [cc for cc in tree.cells if cc.level == 2]
    by_key = {}
    for cc in plane_cells:
        by_key[(cc.base_index, cc.pos)] = cc
    for st in c.stacks:
        # sections strictly ordered: consecutive samples separate them
        for i in range(len(st.samples) - 1):
            if not st.samples[i] < st.samples[i + 1]:
                return False, {"reason": "stack samples unordered", "base": st.base_index}
        # re-derive the fiber structure of each member at the stack sample
        for mi, m in enumerate(tree.members):
            expected = _member_section_count(c, st, mi)
            got = _recount_member_roots(c, st, mi)
            if expected != got:
                return False, {
                    "reason": "stack sections disagree with member fiber",
                    "base": st.base_index,
                    "member": mi,
                }
        # fresh sample per cell: memberships must match
        for pos in range(st.ncells()):
            cc = by_key.get((st.base_index, pos))
            if cc is None:
                return False, {"reason": "missing cell", "base": st.base_index, "pos": pos}
            got = _fresh_membership(c, st, pos)
            if got is not None and got != cc.membership:
                return False, {
                    "reason": "sign not constant on cell",
                    "cell": cc.id,
                    "base": st.base_index,
                    "pos": pos,
                }
    return True, None


def _member_section_count(c, st, mi):
    atoms = {ai for ai, _ in c.member_atoms[mi] if ai >= 0}
    return sum(1 for sec in st.sections if atoms & set(sec.tags))


def _recount_member_roots(c, st, mi) -> int:
    total_sections = set()
    for ai, _ in c.member_atoms[mi]:
        if ai < 0:
            continue
        ad = c.atoms[ai]
        if ad.deg_y < 1:
            continue
        x = st.x
        if isinstance(x, algebraic.RealAlg):
            ctx_box = []

            def provider():
                if not ctx_box:
                    ctx_box.append(numberfield.FieldCtx(x))
                return ctx_box[0]

            roots, _, _ = numberfield.fiber_roots_fast(x, ad.qp, provider)
            total_sections.add((ai, len(roots)))
        else:
            u = bipoly.eval_x(ad.qp, x)
            usf = upoly.squarefree_part(u)
            total_sections.add((ai, len(algebraic.roots_of(usf)) if upoly.degree(usf) >= 1 else 0))
    # compare against the stack's recorded tags
    for ai, count in total_sections:
        recorded = sum(1 for sec in st.sections if ai in sec.tags)
        if recorded != count:
            return -1
    return _member_section_count(c, st, mi)


def _fresh_membership(c, st, pos):
    """Membership tuple at a second sample point of the cell, or None if
    only one exact sample is representable (0-cells)."""
    if pos % 2 == 1:
        return None  # sections: the stored sample is the cell
    j = pos // 2
    lo = st.samples[j]
    # a second rational sample strictly inside the band
    if j < len(st.sections):
        sec = st.sections[j]
        hi_enc = sec.root.lo if hasattr(sec.root, "lo") else Fraction(sec.root)
        guard = 0
        while not hi_enc > lo:
            sec.root.refine()
            hi_enc = sec.root.lo
            guard += 1
            if guard > 512:
                return None
        y2 = simplest_between(lo, hi_enc) if hi_enc > lo else lo
    else:
        y2 = lo + 1
    x = st.x
    ms = []
    for mi, m in enumerate(c.members):
        pairs = iter(c.member_atoms[mi])

        def atom_value(node, _pairs=pairs):
            ai, orient = next(_pairs)
            if ai < 0:
                return node[1].holds(0)
            s = _sign_at_point(c.atoms[ai].poly, x, y2) * orient
            return node[1].holds(s)

        from .family import eval_formula

        ms.append(eval_formula(m.formula_x, atom_value) is True)
    return tuple(ms)


def _sign_at_point(poly, x, y):
    if isinstance(x, algebraic.RealAlg):
        u = bipoly.eval_y(poly, Fraction(y))
        return algebraic.sign_of(u, x)
    return bipoly.sign_at(poly, Fraction(x), Fraction(y))


def cell_census(tree: CdcdTree, n: int | None = None, c2: Fraction = Fraction(8)):
    """(total cells, bound value, within-bound flag)."""
    n = tree.n if n is None else n
    total = tree.total_cells()
    exponent = 2 * (2**tree.k - 1)
    bound = Fraction(c2) * max(n, 1) ** exponent
    return total, bound, total <= bound


def locality_check(tree: CdcdTree, cell_id: int) -> bool:
    """Rebuilding from only the members in the cell's determinant list
    yields a cdcd containing a cell with the same base span and stack
    position (bounding sections matched per member branch index)."""
    cell = None
    for cc in tree.cells:
        if cc.id == cell_id:
            cell = cc
            break
    if cell is None:
        raise UnknownCell(f"no cell {cell_id}")
    det = sorted(cell.determinants)
    if tree.k == 1:
        sub = build_cdcd([tree.members[i] for i in det], 1)
        return _locality_1d(tree, cell, sub, det)
    sub_members = [tree.members[i] for i in det]
    sub = build_cdcd(sub_members, 2)
    return _locality_2d(tree, cell, sub, det)


def _locality_1d(tree, cell, sub, det):
    pts = tree.base_values
    b = cell.base_index
    if b % 2 == 1:
        v = pts[b // 2]
        return any(algebraic.cmp(v, w) == 0 for w in sub.base_values)
    lo = pts[b // 2 - 1] if b > 0 else None
    hi = pts[b // 2] if b // 2 < len(pts) else None
    # both endpoints must exist consecutively in the sub decomposition
    def pos_of(v):
        for i, w in enumerate(sub.base_values):
            if algebraic.cmp(v, w) == 0:
                return i
        return None

    if lo is None and hi is None:
        return len(sub.base_values) == 0
    if lo is None:
        return pos_of(hi) == 0
    if hi is None:
        return pos_of(lo) == len(sub.base_values) - 1
    i, j = pos_of(lo), pos_of(hi)
    return i is not None and j == i + 1


def _locality_2d(tree, cell, sub, det):
    c = tree.engine
    sc = sub.engine
    if cell.level == 1:
        return _base_span_matches(c, sc, cell.base_index) is not None
    span = _base_span_matches(c, sc, cell.base_index)
    if span is None:
        return False
    st = c.stacks[cell.base_index]
    st2 = sc.stacks[span]
    lo_sig = _boundary_signature(c, st, cell.pos, -1, set(det))
    hi_sig = _boundary_signature(c, st, cell.pos, +1, set(det))
    # member indices in the sub decomposition map back through det
    available = {(det[t], br) for t, br in _all_boundaries(sc, st2)}
    lo_ok = lo_sig == "bottom" or lo_sig in available
    hi_ok = hi_sig == "top" or hi_sig in available
    return lo_ok and hi_ok


def _base_span_matches(c, sc, base_index):
    """Index of the sub-cad base cell with the same endpoints, or None."""
    if base_index % 2 == 1:
        v = c.base_points[base_index // 2].value
        for i, bp in enumerate(sc.base_points):
            if algebraic.cmp(v, bp.value) == 0:
                return 2 * i + 1
        return None
    lo_i = base_index // 2 - 1
    hi_i = base_index // 2
    lo = c.base_points[lo_i].value if lo_i >= 0 else None
    hi = c.base_points[hi_i].value if hi_i < len(c.base_points) else None

    def pos_of(v):
        for i, bp in enumerate(sc.base_points):
            if algebraic.cmp(v, bp.value) == 0:
                return i
        return None

    if lo is None and hi is None:
        return 0 if not sc.base_points else None
    if lo is None:
        return 0 if pos_of(hi) == 0 else None
    if hi is None:
        return 2 * len(sc.base_points) if pos_of(lo) == len(sc.base_points) - 1 else None
    i, j = pos_of(lo), pos_of(hi)
    if i is not None and j == i + 1:
        return 2 * i + 2
    return None


def _member_branch_of_section(c, st, sec_pos, member_set):
    """(member, branch index within that member's sections) for the chosen
    determinant member of a section."""
    sec = st.sections[sec_pos]
    tag_atoms = sorted(sec.tags)
    for ai in tag_atoms:
        owner = c.atoms[ai].owner
        if owner in member_set:
            branch = 0
            for j in range(sec_pos):
                if ai in st.sections[j].tags:
                    branch += 1
            return owner, ai, branch
    return None


def _boundary_signature(c, st, pos, direction, member_set):
    j = pos // 2
    if pos % 2 == 1:
        sig = _member_branch_of_section(c, st, j, member_set)
        return (sig[0], sig[2]) if sig else None
    sec_pos = j - 1 if direction < 0 else j
    if sec_pos < 0:
        return "bottom"
    if sec_pos >= len(st.sections):
        return "top"
    sig = _member_branch_of_section(c, st, sec_pos, member_set)
    return (sig[0], sig[2]) if sig else None


def _all_boundaries(sc, st2):
    out = []
    for sp in range(len(st2.sections)):
        sec = st2.sections[sp]
        for ai in sec.tags:
            owner = sc.atoms[ai].owner
            branch = sum(1 for j in range(sp) if ai in st2.sections[j].tags)
            out.append((owner, branch))
    return out
