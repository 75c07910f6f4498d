"""Exact planar predicates over rationals."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Point = tuple[Fraction, Fraction]


def cross(o: Sequence, a: Sequence, b: Sequence):
    """Twice the signed area of triangle (o, a, b)."""
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def wedge(u: Sequence, v: Sequence):
    return u[0] * v[1] - u[1] * v[0]


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _on_segment(p, q, r) -> bool:
    """r collinear with p, q: is it within their bounding box?"""
    return min(p[0], q[0]) <= r[0] <= max(p[0], q[0]) and min(p[1], q[1]) <= r[1] <= max(p[1], q[1])


def segments_intersect(p1, p2, q1, q2) -> bool:
    """Closed segments [p1,p2] and [q1,q2] share a point."""
    d1 = _sign(cross(q1, q2, p1))
    d2 = _sign(cross(q1, q2, p2))
    d3 = _sign(cross(p1, p2, q1))
    d4 = _sign(cross(p1, p2, q2))
    if d1 * d2 < 0 and d3 * d4 < 0:
        return True
    return (
        (d1 == 0 and _on_segment(q1, q2, p1))
        or (d2 == 0 and _on_segment(q1, q2, p2))
        or (d3 == 0 and _on_segment(p1, p2, q1))
        or (d4 == 0 and _on_segment(p1, p2, q2))
    )


def signed_area(poly: Sequence[Sequence]) -> Fraction:
    n = len(poly)
    total = sum(wedge(poly[i], poly[(i + 1) % n]) for i in range(n))
    return Fraction(total) / 2


def clip_halfplane(poly: list, normal: Sequence, offset) -> list:
    """Keep the part of a convex polygon where normal . x <= offset."""
    out = []
    n = len(poly)
    for i in range(n):
        cur, nxt = poly[i], poly[(i + 1) % n]
        fc = normal[0] * cur[0] + normal[1] * cur[1] - offset
        fn = normal[0] * nxt[0] + normal[1] * nxt[1] - offset
        if fc <= 0:
            out.append(cur)
        if (fc < 0 < fn) or (fn < 0 < fc):
            lam = Fraction(fc) / (fc - fn)
            out.append((cur[0] + lam * (nxt[0] - cur[0]), cur[1] + lam * (nxt[1] - cur[1])))
    return out


def clip_box(poly: list, lo: Sequence, hi: Sequence) -> list:
    for normal, offset in (
        ((1, 0), hi[0]), ((-1, 0), -lo[0]), ((0, 1), hi[1]), ((0, -1), -lo[1]),
    ):
        poly = clip_halfplane(poly, normal, offset)
        if not poly:
            break
    return poly


def point_in_polygon(pt: Sequence, poly: Sequence[Sequence]) -> int:
    """1 strictly inside, 0 on the boundary, -1 outside (even-odd rule)."""
    n = len(poly)
    inside = False
    x, y = pt
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        if cross(a, b, pt) == 0 and _on_segment(a, b, pt):
            return 0
        if (a[1] > y) != (b[1] > y):
            xint = a[0] + Fraction(y - a[1]) * (b[0] - a[0]) / (b[1] - a[1])
            if x < xint:
                inside = not inside
    return 1 if inside else -1


def drop_collinear(poly: Sequence[Sequence]) -> list:
    pts = list(poly)
    changed = True
    while changed and len(pts) > 3:
        changed = False
        for i in range(len(pts)):
            if cross(pts[i - 1], pts[i], pts[(i + 1) % len(pts)]) == 0:
                del pts[i]
                changed = True
                break
    return pts


def is_simple_polygon(poly: Sequence[Sequence]) -> bool:
    n = len(poly)
    for i in range(n):
        a1, a2 = poly[i], poly[(i + 1) % n]
        for j in range(i + 1, n):
            if j == i or (j + 1) % n == i or j == (i + 1) % n:
                continue
            if segments_intersect(a1, a2, poly[j], poly[(j + 1) % n]):
                return False
    return True


def triangulate(poly: Sequence[Sequence]) -> list[tuple]:
    """Ear-clipping triangulation of a simple polygon."""
    pts = drop_collinear(poly)
    if signed_area(pts) < 0:
        pts = pts[::-1]
    idx = list(range(len(pts)))
    tris = []
    while len(idx) > 3:
        for pos in range(len(idx)):
            i0, i1, i2 = idx[pos - 1], idx[pos], idx[(pos + 1) % len(idx)]
            a, b, c = pts[i0], pts[i1], pts[i2]
            if cross(a, b, c) <= 0:
                continue
            blocked = False
            for j in idx:
                if j in (i0, i1, i2):
                    continue
                p = pts[j]
                if cross(a, b, p) >= 0 and cross(b, c, p) >= 0 and cross(c, a, p) >= 0:
                    blocked = True
                    break
            if not blocked:
                tris.append((a, b, c))
                del idx[pos]
                break
        else:
            raise ValueError("polygon is not simple; no ear found")
    tris.append(tuple(pts[i] for i in idx))
    return tris


def triangles_overlap(t1: Sequence, t2: Sequence) -> bool:
    """Whether two counterclockwise triangles have intersecting interiors (separating axis test)."""
    for tri, other in ((t1, t2), (t2, t1)):
        for i in range(3):
            a, b = tri[i], tri[(i + 1) % 3]
            if all(cross(a, b, p) <= 0 for p in other):
                return False
    return True


def bbox(points: Sequence[Sequence]) -> tuple:
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    return (min(xs), min(ys), max(xs), max(ys))


def bboxes_overlap(b1, b2) -> bool:
    """Open-interior overlap of axis-aligned boxes."""
    return b1[0] < b2[2] and b2[0] < b1[2] and b1[1] < b2[3] and b2[1] < b1[3]
