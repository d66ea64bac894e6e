"""Exact 2-D polygon helpers for volume-conservation oracles.

Convex hull (monotone chain), Sutherland-Hodgman clipping against a box, and
the shoelace area, all over Fractions.  Unbounded regions are represented by
pushing the recession directions out to a radius far beyond the clip box, so
clipped areas are exact.
"""

from __future__ import annotations

from fractions import Fraction

Pt = tuple[Fraction, Fraction]


def _cross(o: Pt, a: Pt, b: Pt) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: list[Pt]) -> list[Pt]:
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower: list[Pt] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Pt] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def clip_to_box(polygon: list[Pt], lo: Fraction, hi: Fraction) -> list[Pt]:
    """Clip a convex polygon (ccw) to the axis box [lo, hi]^2."""

    def clip_half(poly: list[Pt], inside, intersect) -> list[Pt]:
        out: list[Pt] = []
        for i, cur in enumerate(poly):
            prev = poly[i - 1]
            cur_in, prev_in = inside(cur), inside(prev)
            if cur_in:
                if not prev_in:
                    out.append(intersect(prev, cur))
                out.append(cur)
            elif prev_in:
                out.append(intersect(prev, cur))
        return out

    def x_cut(value: Fraction, keep_ge: bool):
        def inside(p: Pt) -> bool:
            return p[0] >= value if keep_ge else p[0] <= value

        def intersect(p: Pt, q: Pt) -> Pt:
            s = (value - p[0]) / (q[0] - p[0])
            return (value, p[1] + s * (q[1] - p[1]))

        return inside, intersect

    def y_cut(value: Fraction, keep_ge: bool):
        def inside(p: Pt) -> bool:
            return p[1] >= value if keep_ge else p[1] <= value

        def intersect(p: Pt, q: Pt) -> Pt:
            s = (value - p[1]) / (q[1] - p[1])
            return (p[0] + s * (q[0] - p[0]), value)

        return inside, intersect

    poly = list(polygon)
    for inside, intersect in (
        x_cut(lo, True),
        x_cut(hi, False),
        y_cut(lo, True),
        y_cut(hi, False),
    ):
        if not poly:
            return []
        poly = clip_half(poly, inside, intersect)
    return poly


def area(polygon: list[Pt]) -> Fraction:
    if len(polygon) < 3:
        return Fraction(0)
    total = Fraction(0)
    for i, (x0, y0) in enumerate(polygon):
        x1, y1 = polygon[(i + 1) % len(polygon)]
        total += x0 * y1 - x1 * y0
    return abs(total) / 2


def clipped_region_area(
    finite: list[tuple[int, int]],
    rays: list[tuple[int, int]],
    lo: int,
    hi: int,
    reach: int,
) -> Fraction:
    """Exact area of (conv(finite) + cone(rays)) intersected with [lo, hi]^2.

    ``reach`` must exceed the box size plus the coordinate spread so that the
    pushed-out polygon contains the true intersection.
    """
    pts: list[Pt] = [(Fraction(x), Fraction(y)) for x, y in finite]
    for x, y in finite:
        for rx, ry in rays:
            pts.append((Fraction(x + reach * rx), Fraction(y + reach * ry)))
    hull = convex_hull(pts)
    return area(clip_to_box(hull, Fraction(lo), Fraction(hi)))
