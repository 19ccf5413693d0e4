"""Definable families: a fixed template set T in R^(k+l) given by a
quantifier-free formula, whose parameter fibers are the member sets of
every arrangement this workbench builds.

Polynomial atoms are exact (rational coefficients); optional numeric atoms
compose polynomials with exp on a declared bounded box and evaluate to
three-valued signs through exact outward-rounded enclosures.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from . import onedim
from .errors import (
    AmbientMismatch,
    DimensionMismatch,
    DomainViolation,
    NoRealizationOracle,
    NonExactMember,
    ParseError,
)
from .numeric import (
    exp_interval,
    interval_add,
    interval_mul,
    interval_pow,
    interval_scale,
    interval_sign,
)

UNKNOWN = "unknown"


class MPoly:
    """Sparse multivariate polynomial over Q: {exponent tuple: coefficient}."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        self.terms = {}
        if terms:
            for e, c in terms.items():
                c = Fraction(c)
                if c:
                    self.terms[tuple(e)] = c

    @staticmethod
    def const(nvars, c) -> "MPoly":
        return MPoly(nvars, {(0,) * nvars: Fraction(c)})

    @staticmethod
    def var(nvars, i) -> "MPoly":
        e = [0] * nvars
        e[i] = 1
        return MPoly(nvars, {tuple(e): Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, o):
        t = dict(self.terms)
        for e, c in o.terms.items():
            t[e] = t.get(e, Fraction(0)) + c
        return MPoly(self.nvars, t)

    def __neg__(self):
        return MPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o):
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, Fraction(0)) + c1 * c2
        return MPoly(self.nvars, t)

    def pow(self, n: int):
        out = MPoly.const(self.nvars, 1)
        for _ in range(n):
            out = out * self
        return out

    def scale(self, c):
        c = Fraction(c)
        return MPoly(self.nvars, {e: c * v for e, v in self.terms.items()})

    def eval(self, point) -> Fraction:
        total = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for i, p in enumerate(e):
                if p:
                    v *= Fraction(point[i]) ** p
            total += v
        return total

    def substitute_tail(self, values) -> "MPoly":
        """Substitute the last len(values) variables with rationals."""
        m = len(values)
        keep = self.nvars - m
        t = {}
        for e, c in self.terms.items():
            v = c
            for i in range(m):
                p = e[keep + i]
                if p:
                    v *= Fraction(values[i]) ** p
            if v:
                key = e[:keep]
                t[key] = t.get(key, Fraction(0)) + v
        return MPoly(keep, t)

    def max_var_index(self) -> int:
        mx = -1
        for e in self.terms:
            for i, p in enumerate(e):
                if p:
                    mx = max(mx, i)
        return mx

    def to_upoly(self):
        from . import upoly

        assert self.nvars == 1
        deg = max((e[0] for e in self.terms), default=-1)
        return upoly.from_fractions(
            [self.terms.get((i,), Fraction(0)) for i in range(deg + 1)]
        )

    def to_bipoly(self):
        from . import bipoly

        assert self.nvars == 2
        return bipoly.from_terms((e[0], e[1], c) for e, c in self.terms.items())

    def key(self):
        return tuple(sorted(self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for e, c in sorted(self.terms.items()):
            mono = "*".join(
                f"v{i}^{p}" if p > 1 else f"v{i}" for i, p in enumerate(e) if p
            )
            bits.append(f"{c}{'*' + mono if mono else ''}")
        return " + ".join(bits)


# -- formulas ------------------------------------------------------------
# formula := ('atom', Atom) | ('natom', NumericAtom)
#          | ('and', [f]) | ('or', [f]) | ('not', f) | ('true',) | ('false',)

RELS = ("=", "<", ">", "<=", ">=", "!=")
_REL_NEG = {"=": "!=", "!=": "=", "<": ">=", ">": "<=", "<=": ">", ">=": "<"}


@dataclass(frozen=True)
class Atom:
    poly: MPoly
    rel: str

    def holds(self, sign: int):
        return {
            "=": sign == 0,
            "!=": sign != 0,
            "<": sign < 0,
            ">": sign > 0,
            "<=": sign <= 0,
            ">=": sign >= 0,
        }[self.rel]


# numeric expression := ('poly', MPoly) | ('exp', expr)
#                     | ('add', [expr]) | ('mul', [expr]) | ('pow', expr, n)


@dataclass(frozen=True)
class NumericAtom:
    expr: tuple
    rel: str
    box: tuple  # ((lo, hi), ...) per variable, bounded rationals


def formula_and(parts):
    return ("and", list(parts))


def formula_or(parts):
    return ("or", list(parts))


def formula_atoms(formula):
    kind = formula[0]
    if kind in ("atom", "natom"):
        yield formula
    elif kind in ("and", "or"):
        for f in formula[1]:
            yield from formula_atoms(f)
    elif kind == "not":
        yield from formula_atoms(formula[1])


def normalize_negations(formula):
    """Push negations onto atoms (flipping relations)."""
    kind = formula[0]
    if kind in ("atom",):
        return formula
    if kind == "natom":
        return formula
    if kind in ("true", "false"):
        return formula
    if kind in ("and", "or"):
        return (kind, [normalize_negations(f) for f in formula[1]])
    inner = formula[1]
    ik = inner[0]
    if ik == "atom":
        return ("atom", Atom(inner[1].poly, _REL_NEG[inner[1].rel]))
    if ik == "natom":
        a = inner[1]
        return ("natom", NumericAtom(a.expr, _REL_NEG[a.rel], a.box))
    if ik == "not":
        return normalize_negations(inner[1])
    if ik == "and":
        return ("or", [normalize_negations(("not", f)) for f in inner[1]])
    if ik == "or":
        return ("and", [normalize_negations(("not", f)) for f in inner[1]])
    if ik == "true":
        return ("false",)
    if ik == "false":
        return ("true",)
    raise ValueError(f"bad formula node {ik}")


def eval_formula(formula, atom_value):
    """Three-valued evaluation; atom_value maps an ('atom'/'natom', a) node
    to True/False/UNKNOWN."""
    kind = formula[0]
    if kind == "true":
        return True
    if kind == "false":
        return False
    if kind in ("atom", "natom"):
        return atom_value(formula)
    if kind == "not":
        v = eval_formula(formula[1], atom_value)
        return UNKNOWN if v is UNKNOWN else (not v)
    vals = [eval_formula(f, atom_value) for f in formula[1]]
    if kind == "and":
        if any(v is False for v in vals):
            return False
        if any(v is UNKNOWN for v in vals):
            return UNKNOWN
        return True
    if kind == "or":
        if any(v is True for v in vals):
            return True
        if any(v is UNKNOWN for v in vals):
            return UNKNOWN
        return False
    raise ValueError(f"bad formula node {kind}")


# -- templates and members ------------------------------------------------


@dataclass
class FamilyTemplate:
    ambient_dim: int  # k
    param_dim: int  # l
    formula: tuple
    closedness_flag: bool = False
    name: str = ""
    oracle_key: str | None = None

    def __post_init__(self):
        n = self.ambient_dim + self.param_dim
        for node in formula_atoms(self.formula):
            if node[0] == "atom":
                if node[1].poly.nvars != n:
                    raise DimensionMismatch("atom arity != k+l")
                if node[1].poly.max_var_index() >= n:
                    raise DimensionMismatch("variable index out of range")
            else:
                a = node[1]
                if len(a.box) != n:
                    raise DomainViolation("numeric atom box must cover all k+l variables")
        if self.closedness_flag:
            norm = normalize_negations(self.formula)
            for node in formula_atoms(norm):
                rel = node[1].rel
                if rel not in ("=", "<=", ">="):
                    raise ValueError(
                        "closedness_flag requires only {=, <=, >=} atoms after normalization"
                    )

    def has_numeric_atoms(self) -> bool:
        return any(n[0] == "natom" for n in formula_atoms(self.formula))


@dataclass(frozen=True)
class ParameterPoint:
    coords: tuple

    def __init__(self, coords):
        object.__setattr__(self, "coords", tuple(Fraction(c) for c in coords))

    def __len__(self):
        return len(self.coords)


@dataclass
class MemberSet:
    source: FamilyTemplate
    parameter: ParameterPoint
    formula_x: tuple

    @property
    def k(self) -> int:
        return self.source.ambient_dim

    def is_exact(self) -> bool:
        return all(n[0] == "atom" for n in formula_atoms(self.formula_x))

    def atom_polys(self) -> list[MPoly]:
        return [n[1].poly for n in formula_atoms(self.formula_x) if n[0] == "atom"]

    def single_atom(self) -> Atom | None:
        atoms = [n[1] for n in formula_atoms(self.formula_x) if n[0] == "atom"]
        natoms = [n for n in formula_atoms(self.formula_x) if n[0] == "natom"]
        if len(atoms) == 1 and not natoms:
            return atoms[0]
        return None


def _subst_formula(formula, values, keep):
    kind = formula[0]
    if kind == "atom":
        return ("atom", Atom(formula[1].poly.substitute_tail(values), formula[1].rel))
    if kind == "natom":
        a = formula[1]
        return ("natom", NumericAtom(_subst_expr(a.expr, values, keep), a.rel, a.box[:keep]))
    if kind in ("true", "false"):
        return formula
    if kind == "not":
        return ("not", _subst_formula(formula[1], values, keep))
    return (kind, [_subst_formula(f, values, keep) for f in formula[1]])


def _subst_expr(expr, values, keep):
    op = expr[0]
    if op == "poly":
        return ("poly", expr[1].substitute_tail(values))
    if op == "exp":
        return ("exp", _subst_expr(expr[1], values, keep))
    if op == "pow":
        return ("pow", _subst_expr(expr[1], values, keep), expr[2])
    return (op, [_subst_expr(e, values, keep) for e in expr[1]])


def instantiate(template: FamilyTemplate, y: ParameterPoint) -> MemberSet:
    """The parameter fiber of the template at y, as a set in R^k."""
    if len(y) != template.param_dim:
        raise DimensionMismatch(
            f"parameter length {len(y)} != l={template.param_dim}"
        )
    fx = _subst_formula(template.formula, y.coords, template.ambient_dim)
    return MemberSet(template, y, fx)


def _pad_params(formula, old_n, add):
    """Re-embed a formula over n variables into n+add variables (new
    trailing parameter slots unused)."""

    def pad_poly(p: MPoly) -> MPoly:
        return MPoly(old_n + add, {e + (0,) * add: c for e, c in p.terms.items()})

    def walk(f):
        kind = f[0]
        if kind == "atom":
            return ("atom", Atom(pad_poly(f[1].poly), f[1].rel))
        if kind == "natom":
            a = f[1]
            pad_box = a.box + ((Fraction(0), Fraction(0)),) * add
            return ("natom", NumericAtom(_pad_expr(a.expr, pad_poly), a.rel, pad_box))
        if kind in ("true", "false"):
            return f
        if kind == "not":
            return ("not", walk(f[1]))
        return (kind, [walk(g) for g in f[1]])

    return walk(formula)


def _pad_expr(expr, pad_poly):
    op = expr[0]
    if op == "poly":
        return ("poly", pad_poly(expr[1]))
    if op == "exp":
        return ("exp", _pad_expr(expr[1], pad_poly))
    if op == "pow":
        return ("pow", _pad_expr(expr[1], pad_poly), expr[2])
    return (op, [_pad_expr(e, pad_poly) for e in expr[1]])


def union_of_families(templates) -> FamilyTemplate:
    """One template whose fibers at (y, e_i) are the fibers of the i-th
    input template at y; e_i is encoded by m extra parameter coordinates
    pinned by equations."""
    templates = list(templates)
    if not templates:
        raise AmbientMismatch("need at least one template")
    k = templates[0].ambient_dim
    if any(t.ambient_dim != k for t in templates):
        raise AmbientMismatch("ambient dimensions differ")
    lmax = max(t.param_dim for t in templates)
    m = len(templates)
    new_l = lmax + m
    branches = []
    for i, t in enumerate(templates):
        f = t.formula
        base_n = t.ambient_dim + t.param_dim
        f = _pad_params(f, base_n, (lmax - t.param_dim) + m)
        n = k + new_l
        pins = []
        for j in range(m):
            var = MPoly.var(n, k + lmax + j)
            target = MPoly.const(n, 1 if j == i else 0)
            pins.append(("atom", Atom(var - target, "=")))
        branches.append(formula_and([f] + pins))
    return FamilyTemplate(
        ambient_dim=k,
        param_dim=new_l,
        formula=formula_or(branches),
        closedness_flag=all(t.closedness_flag for t in templates),
        name="union(" + ",".join(t.name or "?" for t in templates) + ")",
    )


def basis_parameter(templates, index: int, y) -> ParameterPoint:
    """Parameter (y, e_index) for a union-of-families template."""
    templates = list(templates)
    lmax = max(t.param_dim for t in templates)
    coords = list(y) + [Fraction(0)] * (lmax - len(y))
    coords += [Fraction(1) if j == index else Fraction(0) for j in range(len(templates))]
    return ParameterPoint(coords)


# -- sign evaluation ------------------------------------------------------


def _eval_numeric_interval(expr, point_ivs, precision):
    op = expr[0]
    if op == "poly":
        lo = hi = Fraction(0)
        acc = (Fraction(0), Fraction(0))
        for e, c in expr[1].terms.items():
            term = (Fraction(1), Fraction(1))
            for i, p in enumerate(e):
                if p:
                    term = interval_mul(term, interval_pow(point_ivs[i], p))
            acc = interval_add(acc, interval_scale(term, c))
        return acc
    if op == "exp":
        lo, hi = _eval_numeric_interval(expr[1], point_ivs, precision)
        return exp_interval(lo, hi, precision)
    if op == "pow":
        return interval_pow(
            _eval_numeric_interval(expr[1], point_ivs, precision), expr[2]
        )
    if op == "add":
        acc = (Fraction(0), Fraction(0))
        for e in expr[1]:
            acc = interval_add(acc, _eval_numeric_interval(e, point_ivs, precision))
        return acc
    if op == "mul":
        acc = (Fraction(1), Fraction(1))
        for e in expr[1]:
            acc = interval_mul(acc, _eval_numeric_interval(e, point_ivs, precision))
        return acc
    raise ValueError(f"bad numeric node {op}")


def sign_eval(member: MemberSet, point, precision: int = 16):
    """Per-atom signs at a rational point plus three-valued membership.

    Polynomial atoms are exact (never UNKNOWN); numeric atoms use
    outward-rounded enclosures whose tightness grows with ``precision``.
    """
    point = [Fraction(p) for p in point]
    if len(point) != member.k:
        raise DimensionMismatch(f"point length {len(point)} != k={member.k}")
    signs = []

    def atom_value(node):
        if node[0] == "atom":
            v = node[1].poly.eval(point)
            s = (v > 0) - (v < 0)
            signs.append(s)
            return node[1].holds(s)
        a = node[1]
        for i, p in enumerate(point):
            lo, hi = a.box[i]
            if not (lo <= p <= hi):
                raise DomainViolation(
                    f"coordinate {i} = {p} outside declared box [{lo}, {hi}]"
                )
        ivs = [(p, p) for p in point]
        lo, hi = _eval_numeric_interval(a.expr, ivs, precision)
        s = interval_sign((lo, hi))
        if s is None:
            signs.append(UNKNOWN)
            return UNKNOWN
        signs.append(s)
        return a.holds(s)

    membership = eval_formula(member.formula_x, atom_value)
    return signs, membership


# -- realization on the line (k = 1) --------------------------------------


def realize_1d(member: MemberSet) -> onedim.IntervalSet:
    """Exact IntervalSet realization of a k=1 member."""
    from . import algebraic

    if member.k != 1:
        raise DimensionMismatch("realize_1d needs k = 1")
    if not member.is_exact():
        raise NonExactMember("numeric atoms cannot be realized exactly")
    polys = [p.to_upoly() for p in member.atom_polys()]
    roots: list = []
    for f in polys:
        roots.extend(algebraic.roots_of(f))
    roots.sort(key=algebraic.sort_key)
    dedup = []
    for r in roots:
        if not dedup or algebraic.cmp(dedup[-1], r) != 0:
            dedup.append(r)
    samples = algebraic.sample_points(dedup)

    def member_at(x):
        def val(node):
            a = node[1]
            f = a.poly.to_upoly()
            s = algebraic.sign_of(f, x)
            return a.holds(s)

        return eval_formula(member.formula_x, val) is True

    pieces = []
    if not dedup:
        if member_at(samples[0]):
            return onedim.IntervalSet.reals()
        return onedim.IntervalSet.empty()
    pts = [onedim.NEG_INF] + dedup + [onedim.POS_INF]
    for i in range(len(pts) - 1):
        if member_at(samples[i]):
            pieces.append(onedim.Piece(pts[i], False, pts[i + 1], False))
    for r in dedup:
        if member_at(r):
            pieces.append(onedim.Piece(r, True, r, True))
    return onedim.IntervalSet(pieces)


# -- VC shattering ---------------------------------------------------------

_ORACLES: dict = {}


def register_realization_oracle(key: str, fn) -> None:
    """fn(points) -> iterable of frozenset(indices): all realizable traces."""
    _ORACLES[key] = fn


def shatter_check(template: FamilyTemplate, points) -> bool:
    """True iff every subset of the points is a member trace."""
    pts = [tuple(Fraction(c) for c in p) for p in points]
    if len(set(pts)) != len(pts):
        raise ValueError("points must be distinct")
    if not pts:
        return True
    key = template.oracle_key
    if key is None or key not in _ORACLES:
        raise NoRealizationOracle(
            f"no realization oracle registered for template {template.name!r}"
        )
    traces = set(map(frozenset, _ORACLES[key](pts)))
    if len(traces) < (1 << len(pts)):
        return False
    full = range(len(pts))
    return all(
        frozenset(s) in traces
        for r in range(len(pts) + 1)
        for s in itertools.combinations(full, r)
    )


# exact planar hull utilities for the built-in oracles


def _orient(a, b, c) -> int:
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (v > 0) - (v < 0)


def _convex_hull(pts):
    pts = sorted(set(pts))
    if len(pts) <= 2:
        return pts
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and _orient(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and _orient(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _on_segment(a, b, p) -> bool:
    if _orient(a, b, p) != 0:
        return False
    return (
        min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
        and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])
    )


def _segments_intersect(a, b, c, d) -> bool:
    o1, o2 = _orient(a, b, c), _orient(a, b, d)
    o3, o4 = _orient(c, d, a), _orient(c, d, b)
    if o1 != o2 and o3 != o4:
        return True
    return (
        _on_segment(a, b, c)
        or _on_segment(a, b, d)
        or _on_segment(c, d, a)
        or _on_segment(c, d, b)
    )


def _point_in_hull(hull, p) -> bool:
    if len(hull) == 1:
        return hull[0] == p
    if len(hull) == 2:
        return _on_segment(hull[0], hull[1], p)
    sign = 0
    for i in range(len(hull)):
        o = _orient(hull[i], hull[(i + 1) % len(hull)], p)
        if o == 0:
            continue
        if sign == 0:
            sign = o
        elif o != sign:
            return False
    return True


def _hulls_disjoint(h1, h2) -> bool:
    def edges(h):
        if len(h) == 1:
            return [(h[0], h[0])]
        if len(h) == 2:
            return [(h[0], h[1])]
        return [(h[i], h[(i + 1) % len(h)]) for i in range(len(h))]

    for a, b in edges(h1):
        for c, d in edges(h2):
            if _segments_intersect(a, b, c, d):
                return False
    if any(_point_in_hull(h2, p) for p in h1):
        return False
    if any(_point_in_hull(h1, p) for p in h2):
        return False
    return True


def _halfplane_traces(pts):
    n = len(pts)
    out = [frozenset(), frozenset(range(n))]
    for r in range(1, n):
        for sub in itertools.combinations(range(n), r):
            b = [pts[i] for i in sub]
            rest = [pts[i] for i in range(n) if i not in sub]
            if _hulls_disjoint(_convex_hull(b), _convex_hull(rest)):
                out.append(frozenset(sub))
    return out


def _disk_traces(pts):
    """Realizable disk traces via the bisector-line arrangement: inside a
    face the distance order is strict and constant; realizable traces are
    exactly the prefixes of these orders."""
    from . import arrangement2d

    n = len(pts)
    traces = {frozenset(), frozenset(range(n))}
    if n == 1:
        return traces
    lines = []
    seen = set()
    for i in range(n):
        for j in range(i + 1, n):
            (ax, ay), (bx, by) = pts[i], pts[j]
            # bisector: 2(b-a).z = |b|^2 - |a|^2
            cx, cy = 2 * (bx - ax), 2 * (by - ay)
            cc = bx * bx + by * by - ax * ax - ay * ay
            poly = MPoly(
                2,
                {(1, 0): cx, (0, 1): cy, (0, 0): -cc},
            )
            if poly.key() in seen:
                continue
            seen.add(poly.key())
            lines.append(poly)
    members = [_poly_member(p) for p in lines]
    arr = arrangement2d.build_arrangement(members)
    for cell in arr.cells:
        if cell.dimension != 2:
            continue
        sx, sy = cell.sample
        order = sorted(
            range(n), key=lambda i: (sx - pts[i][0]) ** 2 + (sy - pts[i][1]) ** 2
        )
        for r in range(1, n):
            traces.add(frozenset(order[:r]))
    return traces


def _poly_member(p: MPoly) -> MemberSet:
    t = FamilyTemplate(ambient_dim=2, param_dim=1, formula=("true",), name="aux")
    # fabricate a member directly; only formula_x matters downstream
    return MemberSet(t, ParameterPoint([Fraction(0)]), ("atom", Atom(p, "=")))


register_realization_oracle("disks", _disk_traces)
register_realization_oracle("halfplanes", _halfplane_traces)


# -- stock templates -------------------------------------------------------


def circle_template() -> FamilyTemplate:
    """(x1-c1)^2 + (x2-c2)^2 - r^2 = 0 with parameters (c1, c2, r)."""
    n = 5
    x1, x2, c1, c2, r = (MPoly.var(n, i) for i in range(5))
    p = (x1 - c1) * (x1 - c1) + (x2 - c2) * (x2 - c2) - r * r
    return FamilyTemplate(2, 3, ("atom", Atom(p, "=")), closedness_flag=True, name="circles")


def disk_template() -> FamilyTemplate:
    """(x1-c1)^2 + (x2-c2)^2 - r^2 <= 0: closed disks."""
    n = 5
    x1, x2, c1, c2, r = (MPoly.var(n, i) for i in range(5))
    p = (x1 - c1) * (x1 - c1) + (x2 - c2) * (x2 - c2) - r * r
    return FamilyTemplate(
        2, 3, ("atom", Atom(p, "<=")), closedness_flag=True, name="disks", oracle_key="disks"
    )


def unit_disk_template() -> FamilyTemplate:
    n = 4
    x1, x2, c1, c2 = (MPoly.var(n, i) for i in range(4))
    p = (x1 - c1) * (x1 - c1) + (x2 - c2) * (x2 - c2) - MPoly.const(n, 1)
    return FamilyTemplate(
        2, 2, ("atom", Atom(p, "<=")), closedness_flag=True, name="unit-disks", oracle_key="disks"
    )


def hyperplane_template(k: int) -> FamilyTemplate:
    """<a, x> - b = 0 in R^k with parameters (a_1..a_k, b)."""
    n = 2 * k + 1
    p = MPoly(n, {})
    for i in range(k):
        p = p + MPoly.var(n, i) * MPoly.var(n, k + i)
    p = p - MPoly.var(n, 2 * k)
    return FamilyTemplate(k, k + 1, ("atom", Atom(p, "=")), closedness_flag=True, name="hyperplanes")


def halfplane_template() -> FamilyTemplate:
    n = 5
    p = MPoly(n, {})
    for i in range(2):
        p = p + MPoly.var(n, i) * MPoly.var(n, 2 + i)
    p = p - MPoly.var(n, 4)
    return FamilyTemplate(
        2, 3, ("atom", Atom(p, "<=")), closedness_flag=True, name="halfplanes", oracle_key="halfplanes"
    )


def open_interval_template() -> FamilyTemplate:
    """Members (a, b) on the line with parameters (a, b)."""
    n = 3
    x, a, b = (MPoly.var(n, i) for i in range(3))
    f = formula_and([("atom", Atom(x - a, ">")), ("atom", Atom(x - b, "<"))])
    return FamilyTemplate(1, 2, f, closedness_flag=False, name="open-intervals")


def exp_monomial_template(m: int = 1) -> FamilyTemplate:
    """sum_i a_i * exp(y_i * ln x)-style one-variable members; realized here
    as the m=1 special case a0 + a1 * x^(y) = 0 on x > 0, encoded with
    exp(y * t), t = ln x, over a declared box.  Flagged numeric-only."""
    if m != 1:
        raise NotImplementedError("only the single-exponent member is built in")
    # variables: x1 (=t, the log of the original coordinate), y1 (=exponent),
    # y2, y3 (=coefficients a0, a1)
    n = 4
    t = ("poly", MPoly.var(n, 0))
    yexp = ("poly", MPoly.var(n, 1))
    a0 = ("poly", MPoly.var(n, 2))
    a1 = ("poly", MPoly.var(n, 3))
    expr = ("add", [a0, ("mul", [a1, ("exp", ("mul", [yexp, t]))])])
    box = ((Fraction(-4), Fraction(4)),) * n
    return FamilyTemplate(
        1, 3, ("natom", NumericAtom(expr, "=", box)), closedness_flag=False, name="exp-monomials"
    )


# -- direct member constructors (engine-facing conveniences) ----------------


def _member_from_formula(formula, k=2, name="adhoc") -> MemberSet:
    t = FamilyTemplate(ambient_dim=k, param_dim=1, formula=("true",), name=name)
    return MemberSet(t, ParameterPoint([Fraction(0)]), formula)


def circle_member(cx, cy, r, rel="=") -> MemberSet:
    x1, x2 = MPoly.var(2, 0), MPoly.var(2, 1)
    c1, c2, rr = (MPoly.const(2, v) for v in (cx, cy, Fraction(r) * Fraction(r)))
    p = (x1 - c1) * (x1 - c1) + (x2 - c2) * (x2 - c2) - rr
    return _member_from_formula(("atom", Atom(p, rel)), name="circle")


def line_member(a, b, c, rel="=") -> MemberSet:
    """a*x + b*y + c rel 0."""
    x1, x2 = MPoly.var(2, 0), MPoly.var(2, 1)
    p = x1.scale(a) + x2.scale(b) + MPoly.const(2, c)
    return _member_from_formula(("atom", Atom(p, rel)), name="line")


def point_member(px, py) -> MemberSet:
    x1, x2 = MPoly.var(2, 0), MPoly.var(2, 1)
    dx = x1 - MPoly.const(2, px)
    dy = x2 - MPoly.const(2, py)
    return _member_from_formula(("atom", Atom(dx * dx + dy * dy, "=")), name="point")


def segment_member(p, q) -> MemberSet:
    """Closed segment from p to q as a 3-atom formula."""
    (px, py), (qx, qy) = p, q
    x1, x2 = MPoly.var(2, 0), MPoly.var(2, 1)
    dxp = x1 - MPoly.const(2, px)
    dyp = x2 - MPoly.const(2, py)
    dxq = x1 - MPoly.const(2, qx)
    dyq = x2 - MPoly.const(2, qy)
    ex, ey = Fraction(qx) - Fraction(px), Fraction(qy) - Fraction(py)
    on_line = dxp.scale(ey) - dyp.scale(ex)
    after_p = dxp.scale(ex) + dyp.scale(ey)
    before_q = dxq.scale(-ex) + dyq.scale(-ey)
    f = formula_and(
        [
            ("atom", Atom(on_line, "=")),
            ("atom", Atom(after_p, ">=")),
            ("atom", Atom(before_q, ">=")),
        ]
    )
    return _member_from_formula(f, name="segment")


def member_from_mpoly(p: MPoly, rel="=") -> MemberSet:
    return _member_from_formula(("atom", Atom(p, rel)), name="poly")


# -- census ----------------------------------------------------------------


def betti_type_census(template: FamilyTemplate, parameters):
    """Betti vector of every fiber plus the empirical topological-complexity
    bound max(b0 + b1): one number per fixed template, by finiteness of
    fiber topologies."""
    from . import arrangement2d

    vectors = []
    for y in parameters:
        member = instantiate(template, y if isinstance(y, ParameterPoint) else ParameterPoint(y))
        if not member.is_exact():
            raise NonExactMember("census needs exact members")
        if template.ambient_dim == 1:
            s = realize_1d(member)
            vectors.append((s.b0(), 0))
        elif template.ambient_dim == 2:
            arr = arrangement2d.build_arrangement([member])
            bv = arrangement2d.betti_of_set(arr, lambda mem: mem[0])
            vectors.append((bv.b0, bv.b1))
        else:
            raise DimensionMismatch("census supports k <= 2")
    census: dict = {}
    for v in vectors:
        census[v] = census.get(v, 0) + 1
    max_total = max((b0 + b1 for b0, b1 in vectors), default=0)
    return {"vectors": vectors, "census": census, "empirical_C": max_total}
