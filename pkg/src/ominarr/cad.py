"""Exact cylindrical decomposition of the plane adapted to a family of
member sets given by Boolean combinations of polynomial atoms.

The construction is the classical two-phase one: project (contents,
leading coefficients, y-critical polynomials, pairwise resultants), lift
(stacks of root curves over each base cell), then match stacks across base
points to obtain frontier (closure) incidences.  Everything is exact:
base points are real algebraic numbers; fibers over algebraic points are
handled in Q(alpha).  Degenerate inputs (tangencies, shared components,
vertical lines, coincident members) are processed exactly, never
perturbed.

Branch-to-limit matching uses a counting argument when the fiber has at
most one multiple root and the leading coefficient does not vanish (the
generic case), and otherwise falls back to a certified box walk: pick cut
levels separating the fiber roots, retreat the sample abscissa until no
branch crosses any cut level, then classify branches by band.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from . import algebraic, bipoly, numberfield, upoly
from .algebraic import RealAlg
from .errors import EngineAssertionFailure, NonExactMember
from .family import MemberSet, eval_formula
from .numeric import simplest_between

NEG_ESC = -1  # branch escapes to -infinity / below the stack
POS_ESC = -2  # branch escapes to +infinity / above the stack


class AtomData:
    __slots__ = (
        "index",
        "poly",
        "cont",
        "qp",
        "qps",
        "deg_y",
        "owner",
        "members",
    )

    def __init__(self, index, poly):
        self.index = index
        self.poly = poly
        self.cont = bipoly.content_y(poly)
        self.qp = bipoly.primitive_y(poly)
        self.qps = bipoly.squarefree_y(self.qp) if bipoly.deg_y(self.qp) >= 1 else self.qp
        self.deg_y = bipoly.deg_y(self.qp)
        self.owner = None  # min member index, set later
        self.members = set()


class BasePoint:
    __slots__ = ("value", "sources")

    def __init__(self, value):
        self.value = value
        self.sources = set()  # {('single', i) | ('pair', i, j)}

    def owner_members(self):
        best = min(self.sources, key=lambda s: (len(s) - 1, s[1:]))
        return tuple(sorted(set(best[1:])))


class Section:
    __slots__ = ("root", "tags")

    def __init__(self, root, tags):
        self.root = root
        self.tags = tags  # {atom_index: multiplicity}


class Stack:
    """All cells over one base cell: sections and the bands between."""

    __slots__ = ("base_index", "x", "sections", "samples", "sign_cols", "cell_ids", "fiber_deg", "full_zero_atoms")

    def __init__(self, base_index, x):
        self.base_index = base_index
        self.x = x
        self.sections: list[Section] = []
        self.samples: list[Fraction] = []
        self.sign_cols: dict[int, list[int]] = {}
        self.cell_ids: list[int] = []
        self.fiber_deg: dict[int, int] = {}
        self.full_zero_atoms: set[int] = set()

    def ncells(self) -> int:
        return 2 * len(self.sections) + 1


class CadCell:
    __slots__ = (
        "id",
        "base_index",
        "pos",
        "dim",
        "unbounded",
        "sample",
        "atom_signs",
        "determinants",
        "membership",
    )

    def __init__(self, id_, base_index, pos, dim, sample):
        self.id = id_
        self.base_index = base_index
        self.pos = pos
        self.dim = dim
        self.unbounded = False
        self.sample = sample
        self.atom_signs = None
        self.determinants = ()
        self.membership = None

    def is_section(self) -> bool:
        return self.pos % 2 == 1


class Cad:
    def __init__(self, members: list[MemberSet]):
        for m in members:
            if m.k != 2:
                raise NonExactMember("plane engine needs k = 2 members")
            if not m.is_exact():
                raise NonExactMember("numeric-only members are rejected by the exact engine")
        self.members = list(members)
        self.atoms: list[AtomData] = []
        self.member_atoms: list[list[tuple[int, int]]] = []  # (atom idx, orient)
        self._collect_atoms()
        self.base_points: list[BasePoint] = []
        self._project()
        self.stacks: list[Stack] = []
        self.cells: list[CadCell] = []
        self._lift()
        self.frontier: list[tuple[int, int]] = []  # (lower cell, upper cell)
        self._escape_up: dict[tuple[int, int], list[int]] = {}
        self._escape_down: dict[tuple[int, int], list[int]] = {}
        self._match_all()
        self._mark_unbounded()
        self.infinity_cycle = self._build_infinity_cycle()
        self._build_adjacency_maps()
        self._memberships()
        self._determinants()

    # -- atoms ----------------------------------------------------------

    def _collect_atoms(self):
        canon: dict = {}
        for mi, m in enumerate(self.members):
            pairs = []
            for node in _formula_atom_nodes(m.formula_x):
                p = node[1].poly.to_bipoly()
                if bipoly.is_zero(p):
                    # constant-zero atom: sign always 0
                    pairs.append((-1, 1))
                    continue
                cp, orient = _canonical_bipoly(p)
                key = cp
                if key not in canon:
                    ad = AtomData(len(self.atoms), cp)
                    canon[key] = ad.index
                    self.atoms.append(ad)
                idx = canon[key]
                self.atoms[idx].members.add(mi)
                pairs.append((idx, orient))
            self.member_atoms.append(pairs)
        for ad in self.atoms:
            ad.owner = min(ad.members) if ad.members else 0

    # -- projection -------------------------------------------------------

    def _add_base_poly(self, f, source, critical_for=None):
        f = upoly.squarefree_part(f)
        if upoly.degree(f) < 1:
            return
        for r in algebraic.roots_of(f):
            self._add_base_value(r, source, critical_for)

    def _add_base_value(self, value, source, critical_for=None):
        for bp in self.base_points:
            if algebraic.cmp(bp.value, value) == 0:
                bp.sources.add(source)
                if critical_for is not None:
                    self._critical_bps.setdefault(critical_for, set()).add(id(bp))
                return
        bp = BasePoint(value)
        bp.sources.add(source)
        self.base_points.append(bp)
        if critical_for is not None:
            self._critical_bps.setdefault(critical_for, set()).add(id(bp))

    def _project(self):
        self._critical_bps: dict[int, set] = {}
        for ad in self.atoms:
            src = ("single", ad.owner)
            if upoly.degree(ad.cont) >= 1:
                self._add_base_poly(ad.cont, src, critical_for=ad.index)
            if ad.deg_y >= 1:
                lc = bipoly.lc_y(ad.qp)
                if upoly.degree(lc) >= 1:
                    self._add_base_poly(lc, src, critical_for=ad.index)
                crit = bipoly.y_critical_poly(ad.qps)
                if not upoly.is_zero(crit):
                    self._add_base_poly(crit, src, critical_for=ad.index)
        for a, b in itertools.combinations(self.atoms, 2):
            if a.deg_y < 1 or b.deg_y < 1:
                continue
            src = ("pair", min(a.owner, b.owner), max(a.owner, b.owner))
            res = bipoly.resultant_y(a.qps, b.qps)
            if not upoly.is_zero(res):
                self._add_base_poly(res, src)
                continue
            # shared component: split into coprime pieces and project those
            g = bipoly.gcd_y(a.qps, b.qps)
            ha = bipoly.div_exact_y(a.qps, g)
            hb = bipoly.div_exact_y(b.qps, g)
            for p, q in ((g, ha), (g, hb), (ha, hb)):
                if bipoly.deg_y(p) >= 1 and bipoly.deg_y(q) >= 1:
                    r = bipoly.resultant_y(p, q)
                    if not upoly.is_zero(r):
                        self._add_base_poly(r, src)
            for piece in (g, ha, hb):
                if bipoly.deg_y(piece) >= 1:
                    crit = bipoly.y_critical_poly(piece)
                    if not upoly.is_zero(crit):
                        self._add_base_poly(crit, src, critical_for=a.index)
                        self._add_base_poly(crit, src, critical_for=b.index)
        self.base_points.sort(key=lambda bp: algebraic.sort_key(bp.value))
        # per-atom sorted critical point indices and range lookup
        bp_pos = {id(bp): i for i, bp in enumerate(self.base_points)}
        self._atom_crit: list[list[int]] = []
        for ad in self.atoms:
            idxs = sorted(bp_pos[j] for j in self._critical_bps.get(ad.index, ()))
            self._atom_crit.append(idxs)
        self._range_memo: dict[tuple[int, int], tuple] = {}

    def _atom_range(self, ai: int, base_index: int) -> int:
        import bisect

        return bisect.bisect_right(self._atom_crit[ai], base_index // 2 - 1)

    def _atom_blocked(self, ai: int, base_index: int) -> bool:
        if base_index % 2 == 0:
            return False
        import bisect

        crit = self._atom_crit[ai]
        p = (base_index - 1) // 2
        j = bisect.bisect_left(crit, p)
        return j < len(crit) and crit[j] == p

    # -- lifting ----------------------------------------------------------

    def base_cell_count(self) -> int:
        return 2 * len(self.base_points) + 1

    def _base_samples(self):
        vals = [bp.value for bp in self.base_points]
        return algebraic.sample_points(vals)

    def _lift(self):
        samples = self._base_samples()
        nb = self.base_cell_count()
        for b in range(nb):
            if b % 2 == 0:
                x = samples[b // 2]
                st = self._build_stack_rational(b, x)
            else:
                v = self.base_points[b // 2].value
                if isinstance(v, RealAlg):
                    st = self._build_stack_algebraic(b, v)
                else:
                    st = self._build_stack_rational(b, v)
            self.stacks.append(st)
            base_dim = 1 if b % 2 == 0 else 0
            cols = [st.sign_cols[i] for i in range(len(self.atoms))]
            for pos in range(st.ncells()):
                dim = base_dim + (1 if pos % 2 == 0 else 0)
                if pos % 2 == 0:
                    sample = (st.x, st.samples[pos // 2])
                else:
                    sample = (st.x, st.sections[pos // 2].root)
                cell = CadCell(len(self.cells), b, pos, dim, sample)
                cell.atom_signs = tuple(col[pos] for col in cols)
                st.cell_ids.append(cell.id)
                self.cells.append(cell)

    def _memo_lookup(self, ad, base_index):
        """(kind, payload): ('inactive', sign) skips the atom entirely;
        ('active', None) or ('miss', range id) forces computation."""
        if self._atom_blocked(ad.index, base_index):
            return ("blocked", None)
        rid = self._atom_range(ad.index, base_index)
        memo = self._range_memo.get((ad.index, rid))
        if memo is None:
            return ("miss", rid)
        return memo

    def _build_stack_rational(self, base_index, x: Fraction) -> Stack:
        st = Stack(base_index, x)
        atom_roots = {}
        atom_info = {}
        const_signs = {}
        for ad in self.atoms:
            kind, payload = self._memo_lookup(ad, base_index)
            if kind == "inactive":
                const_signs[ad.index] = payload
                continue
            cont_s = upoly.sign_at(ad.cont, x)
            if ad.deg_y < 1:
                st.fiber_deg[ad.index] = 0
                atom_info[ad.index] = (cont_s, 1, 0)
                atom_roots[ad.index] = []
                if cont_s == 0:
                    st.full_zero_atoms.add(ad.index)
                if kind == "miss":
                    self._range_memo[(ad.index, payload)] = ("inactive", cont_s)
                continue
            u = bipoly.eval_x(ad.qp, x)
            if upoly.is_zero(u):
                raise EngineAssertionFailure("primitive part vanished on a fiber")
            st.fiber_deg[ad.index] = upoly.degree(u)
            if cont_s == 0:
                st.full_zero_atoms.add(ad.index)
            usf = upoly.squarefree_part(u)
            roots = algebraic.roots_of(usf) if upoly.degree(usf) >= 1 else []
            mults = _root_multiplicities(u, usf, roots)
            lead_s = 1 if upoly.lc(u) > 0 else -1
            deg = upoly.degree(u)
            if kind == "miss":
                if not roots and cont_s != 0:
                    self._range_memo[(ad.index, payload)] = (
                        "inactive",
                        cont_s * lead_s * ((-1) ** deg),
                    )
                else:
                    self._range_memo[(ad.index, payload)] = ("active", None)
            atom_roots[ad.index] = list(zip(roots, mults))
            atom_info[ad.index] = (cont_s, lead_s, deg)
        self._merge_stack(
            st, atom_roots, atom_info, const_signs, algebraic.cmp, algebraic.sample_points
        )
        return st

    def _build_stack_algebraic(self, base_index, alpha: RealAlg) -> Stack:
        st = Stack(base_index, alpha)
        ctx_box = []

        def provider():
            if not ctx_box:
                ctx_box.append(numberfield.FieldCtx(alpha))
            return ctx_box[0]

        atom_roots = {}
        atom_info = {}
        const_signs = {}
        for ad in self.atoms:
            kind, payload = self._memo_lookup(ad, base_index)
            if kind == "inactive":
                const_signs[ad.index] = payload
                continue
            cont_s = algebraic.sign_of(ad.cont, alpha)
            if ad.deg_y < 1:
                st.fiber_deg[ad.index] = 0
                atom_info[ad.index] = (cont_s, 1, 0)
                atom_roots[ad.index] = []
                if cont_s == 0:
                    st.full_zero_atoms.add(ad.index)
                continue
            pairs, d, lead_s = numberfield.fiber_roots_fast(alpha, ad.qp, provider)
            st.fiber_deg[ad.index] = d
            if cont_s == 0:
                st.full_zero_atoms.add(ad.index)
            atom_roots[ad.index] = pairs
            atom_info[ad.index] = (cont_s, lead_s, d)

        self._merge_stack(
            st,
            atom_roots,
            atom_info,
            const_signs,
            numberfield.cmp_fiber_roots,
            numberfield.gap_samples,
        )
        return st

    def _merge_stack(self, st, atom_roots, atom_info, const_signs, cmp_fn, samples_fn):
        entries = []
        for ai, pairs in atom_roots.items():
            for r, mu in pairs:
                entries.append((r, ai, mu))
        import functools

        entries.sort(key=functools.cmp_to_key(lambda e1, e2: cmp_fn(e1[0], e2[0])))
        sections: list[Section] = []
        for r, ai, mu in entries:
            if sections and cmp_fn(sections[-1].root, r) == 0:
                sections[-1].tags[ai] = mu
            else:
                sections.append(Section(r, {ai: mu}))
        st.sections = sections
        st.samples = samples_fn([s.root for s in sections])
        m = len(sections)
        for ai, s in const_signs.items():
            st.sign_cols[ai] = [s] * (2 * m + 1)
        for ai, (cont_s, lead_s, deg) in atom_info.items():
            col = [0] * (2 * m + 1)
            if ai in st.full_zero_atoms:
                st.sign_cols[ai] = col
                continue
            sign = cont_s * lead_s * ((-1) ** deg)
            col[0] = sign
            for j, sec in enumerate(sections):
                if ai in sec.tags:
                    col[2 * j + 1] = 0
                    if sec.tags[ai] % 2 == 1:
                        sign = -sign
                else:
                    col[2 * j + 1] = sign
                col[2 * j + 2] = sign
            if col[-1] != cont_s * lead_s:
                raise EngineAssertionFailure("sign propagation inconsistent")
            st.sign_cols[ai] = col

    # -- matching ---------------------------------------------------------

    def _match_all(self):
        for p in range(len(self.base_points)):
            b_pt = 2 * p + 1
            self._match_side(b_pt, b_pt - 1, left_side=False)
            self._match_side(b_pt, b_pt + 1, left_side=True)

    def _match_side(self, b_pt, b_iv, left_side):
        """Match the interval stack b_iv against the point stack b_pt.

        ``left_side`` True means the interval lies to the right of the
        point (the point is the interval's left endpoint).
        """
        sp = self.stacks[b_pt]
        si = self.stacks[b_iv]
        alpha = sp.x
        m = len(sp.sections)
        # per-atom positions in the merged stacks
        atom_branches: dict[int, list[int]] = {}
        for j, sec in enumerate(si.sections):
            for ai in sec.tags:
                atom_branches.setdefault(ai, []).append(j)
        atom_roots: dict[int, list[tuple[int, int]]] = {}
        for j, sec in enumerate(sp.sections):
            for ai, mu in sec.tags.items():
                atom_roots.setdefault(ai, []).append((j, mu))
        # limit of each interval section, as merged point index or escape
        limits: dict[int, int] = {}
        for ai, branches in atom_branches.items():
            roots = atom_roots.get(ai, [])
            drop = self.stacks[b_pt].fiber_deg[ai] < self.stacks[b_iv].fiber_deg[ai]
            hard = [j for j, mu in roots if mu > 1]
            targets = None
            if not drop and len(hard) <= 1:
                targets = _forced_matching(branches, roots)
            if targets is None:
                targets = self._box_walk(b_pt, b_iv, left_side, ai)
            for bj, tgt in zip(branches, targets):
                prev = limits.get(bj)
                if prev is not None and prev != tgt:
                    raise EngineAssertionFailure("tag atoms disagree on a section limit")
                limits[bj] = tgt
        # assemble frontiers
        r = len(si.sections)
        # section -> point 0-cell
        for j in range(r):
            tgt = limits[j]
            if tgt in (NEG_ESC, POS_ESC):
                continue
            self._add_frontier(sp.cell_ids[2 * tgt + 1], si.cell_ids[2 * j + 1])
        # bands -> range of point cells
        esc_up, esc_down = [], []
        for band in range(r + 1):
            low = limits[band - 1] if band >= 1 else NEG_ESC
            high = limits[band] if band < r else POS_ESC
            if low == POS_ESC or high == NEG_ESC:
                continue  # band pinches off toward infinity at this end
            lo_cell = 0 if low == NEG_ESC else (2 * low + 1)
            hi_cell = 2 * m if high == POS_ESC else (2 * high + 1)
            for c in range(lo_cell, hi_cell + 1):
                self._add_frontier(sp.cell_ids[c], si.cell_ids[2 * band])
        # escape bookkeeping for the cyclic structure at infinity
        for j in range(r):
            if limits[j] == NEG_ESC:
                esc_down.append(2 * j + 1)
            if limits[j] == POS_ESC:
                esc_up.append(2 * j + 1)
        for band in range(1, r + 1):  # bands with a plunging lower edge
            if limits[band - 1] == NEG_ESC:
                esc_down.append(2 * band)
        for band in range(r):  # bands with a rising upper edge
            if limits[band] == POS_ESC:
                esc_up.append(2 * band)
        side = 0 if left_side else 1  # 0: escapes at the left end of b_iv
        self._escape_down[(b_iv, side)] = sorted(esc_down)
        self._escape_up[(b_iv, side)] = sorted(esc_up)

    def _add_frontier(self, low_id, high_id):
        self.frontier.append((low_id, high_id))

    def _box_walk(self, b_pt, b_iv, left_side, ai):
        """Certified branch classification for atom ai across base point
        b_pt toward interval b_iv."""
        sp = self.stacks[b_pt]
        si = self.stacks[b_iv]
        alpha = sp.x
        ad = self.atoms[ai]
        levels = sp.samples
        x2 = si.x
        while True:
            offending = None
            for c in levels:
                h = bipoly.eval_y(ad.qp, c)
                if upoly.is_zero(h):
                    raise EngineAssertionFailure("cut level lies on the atom")
                for rt in algebraic.roots_of(h):
                    ca = algebraic.cmp(rt, alpha)
                    cx = algebraic.cmp(rt, Fraction(x2))
                    between = (ca > 0 and cx <= 0) if left_side else (ca < 0 and cx >= 0)
                    if between:
                        if offending is None or (algebraic.cmp(rt, offending) < 0) == left_side:
                            offending = rt
            if offending is None:
                break
            # retreat x2 strictly between alpha and the nearest offender
            lo, hi = _strict_gap(alpha, offending) if left_side else _strict_gap(offending, alpha)
            x2 = simplest_between(lo, hi)
        u2 = bipoly.eval_x(ad.qp, x2)
        roots2 = algebraic.roots_of(upoly.squarefree_part(u2))
        branches = [j for j, sec in enumerate(si.sections) if ai in sec.tags]
        if len(roots2) != len(branches):
            raise EngineAssertionFailure("branch count changed inside a base cell")
        targets = []
        point_roots = [j for j, sec in enumerate(sp.sections) if ai in sec.tags]
        for rt in roots2:
            band = 0
            for c in levels:
                if algebraic.cmp(rt, c) > 0:
                    band += 1
                else:
                    break
            if band == 0:
                targets.append(NEG_ESC)
            elif band == len(levels):
                targets.append(POS_ESC)
            else:
                tgt = band - 1
                if tgt not in point_roots:
                    raise EngineAssertionFailure("branch limit is not a root of its atom")
                targets.append(tgt)
        return targets

    # -- unboundedness / infinity ------------------------------------------

    def _mark_unbounded(self):
        nb = self.base_cell_count()
        for st in self.stacks:
            ids = st.cell_ids
            n = len(ids)
            interval = st.base_index % 2 == 0
            for pos, cid in enumerate(ids):
                cell = self.cells[cid]
                if st.base_index in (0, nb - 1):
                    cell.unbounded = True
                elif pos == 0 or pos == n - 1:
                    cell.unbounded = True
            if interval and st.base_index not in (0, nb - 1):
                for side in (0, 1):
                    for pos in self._escape_down.get((st.base_index, side), []):
                        self.cells[ids[pos]].unbounded = True
                    for pos in self._escape_up.get((st.base_index, side), []):
                        self.cells[ids[pos]].unbounded = True

    def _build_infinity_cycle(self):
        nb = self.base_cell_count()
        seq: list[int] = []

        def stack_cells(b):
            return self.stacks[b].cell_ids

        def esc(d, b, side):
            table = self._escape_down if d == "down" else self._escape_up
            return [stack_cells(b)[p] for p in table.get((b, side), [])]

        if nb == 1:
            ids = stack_cells(0)
            seq.extend(reversed(ids))
            seq.extend(ids)
        else:
            seq.extend(reversed(stack_cells(0)))  # left side, top to bottom
            # bottom, left to right
            for b in range(nb):
                ids = stack_cells(b)
                if b % 2 == 1:
                    seq.append(ids[0])
                    continue
                if b > 0:
                    seq.extend(reversed(esc("down", b, 0)))
                seq.append(ids[0])
                if b < nb - 1:
                    seq.extend(esc("down", b, 1))
            seq.extend(stack_cells(nb - 1))  # right side, bottom to top
            # top, right to left: rising cells at the right end are met
            # bottom-up, then the top band, then left-end risers top-down
            for b in range(nb - 1, -1, -1):
                ids = stack_cells(b)
                if b % 2 == 1:
                    seq.append(ids[-1])
                    continue
                if b < nb - 1:
                    seq.extend(esc("up", b, 1))
                seq.append(ids[-1])
                if b > 0:
                    seq.extend(reversed(esc("up", b, 0)))
        out: list[int] = []
        for cid in seq:
            if out and out[-1] == cid:
                continue
            out.append(cid)
        while len(out) > 1 and out[0] == out[-1]:
            out.pop()
        return out

    # -- memberships and determinants --------------------------------------

    def _build_adjacency_maps(self):
        n = len(self.cells)
        self.adj_down = [[] for _ in range(n)]  # lower cells in my closure
        self.adj_up = [[] for _ in range(n)]  # higher cells whose closure has me
        for lo, hi in self.frontier_edges():
            self.adj_down[hi].append(lo)
            self.adj_up[lo].append(hi)

    def _memberships(self):
        compiled = []
        for mi, m in enumerate(self.members):
            pairs = self.member_atoms[mi]
            atom = m.single_atom()
            if atom is not None and len(pairs) == 1:
                ai, orient = pairs[0]
                table = (atom.holds(-1), atom.holds(0), atom.holds(1))
                compiled.append((ai, orient, table))
            else:
                compiled.append(None)
        for cell in self.cells:
            sig = cell.atom_signs
            ms = []
            for mi, comp in enumerate(compiled):
                if comp is not None:
                    ai, orient, table = comp
                    s = 0 if ai < 0 else sig[ai] * orient
                    ms.append(table[s + 1])
                    continue
                pairs = iter(self.member_atoms[mi])

                def atom_value(node, _pairs=pairs):
                    ai, orient = next(_pairs)
                    s = 0 if ai < 0 else sig[ai] * orient
                    return node[1].holds(s)

                ms.append(eval_formula(self.members[mi].formula_x, atom_value) is True)
            cell.membership = tuple(ms)

    def member_sign(self, cell: CadCell, mi: int) -> int:
        """Sign of the (single-atom) member mi on the cell."""
        pairs = self.member_atoms[mi]
        if len(pairs) != 1:
            raise EngineAssertionFailure("member_sign needs a single-atom member")
        ai, orient = pairs[0]
        return 0 if ai < 0 else cell.atom_signs[ai] * orient

    def _determinants(self):
        owners_of_point = [bp.owner_members() for bp in self.base_points]
        for st in self.stacks:
            b = st.base_index
            base_det: set[int] = set()
            if b % 2 == 1:
                base_det.update(owners_of_point[b // 2])
            else:
                if b > 0:
                    base_det.update(owners_of_point[b // 2 - 1])
                if b < self.base_cell_count() - 1:
                    base_det.update(owners_of_point[b // 2])
            for pos, cid in enumerate(st.cell_ids):
                det = set(base_det)
                if pos % 2 == 1:
                    sec = st.sections[pos // 2]
                    det.add(min(self.atoms[ai].owner for ai in sec.tags))
                else:
                    j = pos // 2
                    if j - 1 >= 0:
                        det.add(min(self.atoms[ai].owner for ai in st.sections[j - 1].tags))
                    if j < len(st.sections):
                        det.add(min(self.atoms[ai].owner for ai in st.sections[j].tags))
                self.cells[cid].determinants = tuple(sorted(det))

    # -- graph helpers ------------------------------------------------------

    def frontier_edges(self):
        return self.frontier + self._in_stack_frontier()

    def _in_stack_frontier(self):
        out = []
        for st in self.stacks:
            ids = st.cell_ids
            for pos in range(1, len(ids), 2):
                out.append((ids[pos], ids[pos - 1]))
                out.append((ids[pos], ids[pos + 1]))
        return out

    def euler_compact_support(self, cell_ids=None) -> int:
        ids = range(len(self.cells)) if cell_ids is None else cell_ids
        return sum((-1) ** self.cells[c].dim for c in ids)


def _strict_gap(a, b):
    """Rational bounds (lo, hi) with a < lo <= hi' < b for a < b."""

    def hi_of(v):
        return v.hi if isinstance(v, RealAlg) else Fraction(v)

    def lo_of(v):
        return v.lo if isinstance(v, RealAlg) else Fraction(v)

    while not hi_of(a) < lo_of(b):
        if isinstance(a, RealAlg):
            a.refine()
        if isinstance(b, RealAlg):
            b.refine()
        if not isinstance(a, RealAlg) and not isinstance(b, RealAlg):
            raise EngineAssertionFailure("strict gap between equal rationals")
    return hi_of(a), lo_of(b)


def _formula_atom_nodes(formula):
    kind = formula[0]
    if kind == "atom":
        yield formula
    elif kind in ("and", "or"):
        for f in formula[1]:
            yield from _formula_atom_nodes(f)
    elif kind == "not":
        yield from _formula_atom_nodes(formula[1])


def _canonical_bipoly(p):
    """Normalize sign so the highest (y, x) term is positive; return
    (canonical poly, orientation)."""
    top = p[-1]
    lead = top[-1]
    if lead > 0:
        return p, 1
    return bipoly.neg(p), -1


def _root_multiplicities(u, usf, roots):
    if upoly.degree(u) == upoly.degree(usf):
        return [1] * len(roots)
    chain = []
    g = upoly.gcd(u, upoly.derivative(u))
    while upoly.degree(g) >= 1:
        chain.append(g)
        g = upoly.gcd(g, upoly.derivative(g))
    mults = []
    for r in roots:
        mu = 1
        for g in chain:
            if algebraic.sign_of(g, r) == 0:
                mu += 1
            else:
                break
        mults.append(mu)
    return mults


def _forced_matching(branches, roots):
    """Order-preserving matching when at most one point root is multiple
    and no escapes are possible.  Returns a target root index (in the
    *point stack's merged numbering*) per branch, or None if inconsistent."""
    rp = len(branches)
    mp = len(roots)
    if mp == 0:
        return None if rp else []
    hard = [t for t, (j, mu) in enumerate(roots) if mu > 1]
    if not hard:
        if rp != mp:
            return None
        return [roots[t][0] for t in range(mp)]
    h = hard[0]
    c = rp - (mp - 1)
    if c < 0 or c > roots[h][1]:
        return None
    out = []
    for t in range(h):
        out.append(roots[t][0])
    out.extend([roots[h][0]] * c)
    for t in range(h + 1, mp):
        out.append(roots[t][0])
    return out if len(out) == rp else None
