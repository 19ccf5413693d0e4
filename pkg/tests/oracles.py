"""Independent brute-force oracles used to freeze expected values.

The circle-arrangement oracle counts vertices, edges, and faces of a
circle arrangement from pairwise intersection data and Euler's relation
only; it shares no code with the cylindrical engine.
"""

from fractions import Fraction


def circle_pair_intersections(c1, c2):
    """Number of intersection points of two distinct circles: 0, 1, or 2.

    Exact: compares squared center distance with (r1 +- r2)^2.
    """
    (x1, y1, r1), (x2, y2, r2) = c1, c2
    d2 = (Fraction(x1) - Fraction(x2)) ** 2 + (Fraction(y1) - Fraction(y2)) ** 2
    hi = (Fraction(r1) + Fraction(r2)) ** 2
    lo = (Fraction(r1) - Fraction(r2)) ** 2
    if d2 > hi or d2 < lo:
        return 0
    if d2 == hi or d2 == lo:
        return 1 if d2 > 0 else 0  # concentric equal circles excluded
    return 2


def circle_arrangement_counts(circles):
    """(V, E, F, total cells) for an arrangement of distinct circles,
    assuming no triple points (checked by the caller via genericity).

    Vertexless circles contribute one closed-curve edge; Euler's formula
    with one artificial vertex per such circle yields the face count.
    """
    n = len(circles)
    pts_on = [0] * n
    v = 0
    adj = list(range(n))

    def find(i):
        while adj[i] != i:
            i = adj[i]
        return i

    pair_points = {}
    for i in range(n):
        for j in range(i + 1, n):
            k = circle_pair_intersections(circles[i], circles[j])
            pair_points[(i, j)] = k
            if k:
                ri, rj = find(i), find(j)
                if ri != rj:
                    adj[max(ri, rj)] = min(ri, rj)
            # tangency contributes one vertex; crossing two
            v += k
            pts_on[i] += k
            pts_on[j] += k
    e = 0
    artificial = 0
    for i in range(n):
        if pts_on[i] == 0:
            e += 1
            artificial += 1
        else:
            e += pts_on[i]
    comps = len({find(i) for i in range(n)})
    # Euler with artificial vertices: V' - E + F = 1 + C
    f = e - (v + artificial) + 1 + comps
    total = v + e + f
    return v, e, f, total


def is_generic_circle_family(circles):
    """Pairwise crossing (exactly 2 points per pair), no tangencies, no
    triple points, distinct circles."""
    n = len(circles)
    if len(set(circles)) != n:
        return False
    for i in range(n):
        for j in range(i + 1, n):
            if circle_pair_intersections(circles[i], circles[j]) != 2:
                return False
    # triple point check: intersection points of pair (i,j) on circle k.
    # The two intersection points of circles i and j satisfy both circle
    # equations; a third circle passes through one iff the radical-center
    # system has a common solution, detectable exactly via resultants of
    # the radical axes.
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                if _concurrent(circles[i], circles[j], circles[k]):
                    return False
    return True


def _circle_poly(c):
    x, y, r = (Fraction(v) for v in c)
    # coefficients of X^2+Y^2 - 2x X - 2y Y + (x^2+y^2-r^2)
    return (-2 * x, -2 * y, x * x + y * y - r * r)


def _concurrent(c1, c2, c3):
    """True iff the three circles share a common point (exact)."""
    a1, b1, d1 = _circle_poly(c1)
    a2, b2, d2 = _circle_poly(c2)
    a3, b3, d3 = _circle_poly(c3)
    # radical axes: (a1-a2) X + (b1-b2) Y + (d1-d2) = 0, etc.
    l1 = (a1 - a2, b1 - b2, d1 - d2)
    l2 = (a1 - a3, b1 - b3, d1 - d3)
    det = l1[0] * l2[1] - l1[1] * l2[0]
    if det == 0:
        return False  # parallel radical axes: no radical center
    px = (-l1[2] * l2[1] + l2[2] * l1[1]) / det
    py = (-l1[0] * l2[2] + l2[0] * l1[2]) / det
    # common point iff the radical center lies on the first circle
    x, y, r = (Fraction(v) for v in c1)
    return (px - x) ** 2 + (py - y) ** 2 == r * r
