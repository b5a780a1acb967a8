"""Exact integer predicates for 2-D segments.

Everything operates on integer points; there is no epsilon anywhere.
"""

from __future__ import annotations

Point = tuple[int, int]


def orient(a: Point, b: Point, c: Point) -> int:
    """Sign of the cross product (b-a) x (c-a): >0 left turn, <0 right, 0 collinear."""
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (v > 0) - (v < 0)


def on_segment(p: Point, a: Point, b: Point) -> bool:
    """p lies on the closed segment ab (p assumed collinear with a, b)."""
    return (
        min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
        and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])
    )


def segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool:
    """Closed segments ab and cd share at least one point."""
    o1 = orient(a, b, c)
    o2 = orient(a, b, d)
    o3 = orient(c, d, a)
    o4 = orient(c, d, b)
    if o1 != o2 and o3 != o4:
        return True
    if o1 == 0 and on_segment(c, a, b):
        return True
    if o2 == 0 and on_segment(d, a, b):
        return True
    if o3 == 0 and on_segment(a, c, d):
        return True
    if o4 == 0 and on_segment(b, c, d):
        return True
    return False


def collinear_overlap(a: Point, b: Point, c: Point, d: Point) -> bool:
    """Segments ab and cd lie on one line and share a portion of positive length."""
    if orient(a, b, c) != 0 or orient(a, b, d) != 0:
        return False
    # project on the axis where ab actually extends
    axis = 0 if a[0] != b[0] else 1
    lo1, hi1 = sorted((a[axis], b[axis]))
    lo2, hi2 = sorted((c[axis], d[axis]))
    if lo2 == hi2:  # cd degenerate on this axis: it extends on the other one
        axis = 1 - axis
        lo1, hi1 = sorted((a[axis], b[axis]))
        lo2, hi2 = sorted((c[axis], d[axis]))
    return max(lo1, lo2) < min(hi1, hi2)


def _half_plane(dx: int, dy: int) -> int:
    """0 for directions in [0, pi), 1 for [pi, 2pi); angle 0 is +x."""
    if dy > 0 or (dy == 0 and dx > 0):
        return 0
    return 1


def compare_directions(u: tuple[int, int], v: tuple[int, int]) -> int:
    """Order two nonzero direction vectors by angle counterclockwise from +x.

    Returns -1/0/+1; 0 means the directions coincide exactly.
    """
    hu, hv = _half_plane(*u), _half_plane(*v)
    if hu != hv:
        return -1 if hu < hv else 1
    cross = u[0] * v[1] - u[1] * v[0]
    if cross > 0:
        return -1
    if cross < 0:
        return 1
    return 0
