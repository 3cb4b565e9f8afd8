"""Exact rational plane geometry for polyline diagrams.

All predicates work over `fractions.Fraction`, so intersection
classification, clearance tests, and winding counts are exact: there are
no epsilon thresholds anywhere in the diagram pipeline.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Tuple

Point = Tuple[Fraction, Fraction]

POINT = "point"
OVERLAP = "overlap"


def as_point(x: object, y: object) -> Point:
    return (Fraction(x), Fraction(y))


def sub(a: Point, b: Point) -> Point:
    return (a[0] - b[0], a[1] - b[1])


def cross(u: Point, v: Point) -> Fraction:
    return u[0] * v[1] - u[1] * v[0]


def dot(u: Point, v: Point) -> Fraction:
    return u[0] * v[0] + u[1] * v[1]


def lerp(a: Point, b: Point, t: Fraction) -> Point:
    return (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))


def segment_intersection(
    a: Point, b: Point, c: Point, d: Point
) -> Optional[Tuple[str, Optional[Point], Optional[Fraction], Optional[Fraction]]]:
    """Classify the contact between closed segments [a,b] and [c,d].

    Returns None when disjoint, ("point", p, t, u) for a single shared
    point p = a + t(b-a) = c + u(d-c), or ("overlap", None, None, None)
    when the segments are collinear and share a sub-segment of positive
    length.  Zero-length segments are rejected.
    """
    r = sub(b, a)
    s = sub(d, c)
    rr = dot(r, r)
    ss = dot(s, s)
    if rr == 0 or ss == 0:
        raise ValueError("degenerate zero-length segment")
    denom = cross(r, s)
    ac = sub(c, a)
    if denom != 0:
        t = cross(ac, s) / denom
        u = cross(ac, r) / denom
        if 0 <= t <= 1 and 0 <= u <= 1:
            return (POINT, lerp(a, b, t), t, u)
        return None
    if cross(ac, r) != 0:
        return None
    # Collinear: compare parameter intervals along [a,b].
    t0 = dot(ac, r) / rr
    t1 = t0 + dot(s, r) / rr
    lo, hi = (t0, t1) if t0 <= t1 else (t1, t0)
    lo = max(lo, Fraction(0))
    hi = min(hi, Fraction(1))
    if lo > hi:
        return None
    if lo == hi:
        p = lerp(a, b, lo)
        u = dot(sub(p, c), s) / ss
        return (POINT, p, lo, u)
    return (OVERLAP, None, None, None)


def point_segment_dist2(p: Point, a: Point, b: Point) -> Fraction:
    """Squared distance from p to the closed segment [a,b]."""
    r = sub(b, a)
    rr = dot(r, r)
    if rr == 0:
        d = sub(p, a)
        return dot(d, d)
    t = dot(sub(p, a), r) / rr
    if t < 0:
        t = Fraction(0)
    elif t > 1:
        t = Fraction(1)
    d = sub(p, lerp(a, b, t))
    return dot(d, d)


def winding_contribution(a: Point, b: Point, center: Point) -> int:
    """Crossing count of the directed segment a->b with the rightward
    horizontal ray from center, signed by direction.

    Half-open rule (y_start <= cy < y_end counts as upward): summing over
    the edges of any closed polyline yields its exact winding number about
    center, provided no vertex or edge lies on the ray endpoint itself.
    """
    cx, cy = center
    (x1, y1), (x2, y2) = a, b
    if y1 <= cy < y2:
        x = x1 + (cy - y1) * (x2 - x1) / (y2 - y1)
        return 1 if x > cx else 0
    if y2 <= cy < y1:
        x = x1 + (cy - y1) * (x2 - x1) / (y2 - y1)
        return -1 if x > cx else 0
    return 0
