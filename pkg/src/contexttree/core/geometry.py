"""Geodesic distance plus planar operations in a local equirectangular frame.

Hulls, areas and intersection tests project coordinates to metres around a
local origin (usually the centroid of the geometry involved). Element extents
are small, so the projection error is negligible at these scales.
"""
from __future__ import annotations

import math
from typing import Iterable, Sequence

from .types import CoordinateSet, LandUsageElement

EARTH_RADIUS_M = 6_371_000.0
METRES_PER_DEGREE = EARTH_RADIUS_M * math.pi / 180.0
_EPS = 1e-9

LatLng = tuple[float, float]
XY = tuple[float, float]


def haversine_m(a: LatLng, b: LatLng) -> float:
    lat1, lng1 = math.radians(a[0]), math.radians(a[1])
    lat2, lng2 = math.radians(b[0]), math.radians(b[1])
    h = math.sin((lat2 - lat1) / 2) ** 2 + math.cos(lat1) * math.cos(lat2) * math.sin((lng2 - lng1) / 2) ** 2
    return 2 * EARTH_RADIUS_M * math.asin(min(1.0, math.sqrt(h)))


class LocalProjection:
    """Equirectangular projection to metres centred on ``origin``."""

    __slots__ = ("lat0", "lng0", "kx")

    def __init__(self, origin: LatLng):
        self.lat0, self.lng0 = origin
        self.kx = METRES_PER_DEGREE * math.cos(math.radians(self.lat0))

    @classmethod
    def around(cls, points: Iterable[LatLng]) -> "LocalProjection":
        pts = list(points)
        return cls((sum(p[0] for p in pts) / len(pts), sum(p[1] for p in pts) / len(pts)))

    def __call__(self, p: LatLng) -> XY:
        return ((p[1] - self.lng0) * self.kx, (p[0] - self.lat0) * METRES_PER_DEGREE)

    def project(self, points: Iterable[LatLng]) -> list[XY]:
        lat0, lng0, kx = self.lat0, self.lng0, self.kx
        return [((lng - lng0) * kx, (lat - lat0) * METRES_PER_DEGREE) for lat, lng in points]


def _cross(o: XY, a: XY, b: XY) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: Sequence[LatLng]) -> CoordinateSet:
    """Counter-clockwise convex hull (monotone chain) of ``points``.

    Hull vertices are returned as the original coordinates. Fewer than three
    non-collinear points give an open set of the distinct inputs instead.
    """
    unique = list(dict.fromkeys((float(p[0]), float(p[1])) for p in points))
    if len(unique) < 3:
        return CoordinateSet(tuple(unique), closed=False)
    proj = LocalProjection.around(unique)
    order = sorted(range(len(unique)), key=lambda i: proj(unique[i]))
    xy = [proj(unique[i]) for i in order]

    def chain(indices):
        out: list[int] = []
        for i in indices:
            while len(out) >= 2 and _cross(xy[out[-2]], xy[out[-1]], xy[i]) <= _EPS:
                out.pop()
            out.append(i)
        return out

    lower = chain(range(len(xy)))
    upper = chain(reversed(range(len(xy))))
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        return CoordinateSet(tuple(unique), closed=False)
    return CoordinateSet(tuple(unique[order[i]] for i in hull), closed=True)


def _segments(xy: list[XY], closed: bool) -> list[tuple[XY, XY]]:
    if len(xy) == 1:
        return [(xy[0], xy[0])]
    segs = list(zip(xy, xy[1:]))
    if closed:
        segs.append((xy[-1], xy[0]))
    return segs


def _on_segment(p: XY, q: XY, r: XY) -> bool:
    """``q`` is collinear with ``pr``; test whether it lies within its bounds."""
    return (min(p[0], r[0]) - _EPS <= q[0] <= max(p[0], r[0]) + _EPS
            and min(p[1], r[1]) - _EPS <= q[1] <= max(p[1], r[1]) + _EPS)


def segments_intersect(p1: XY, p2: XY, q1: XY, q2: XY) -> bool:
    d1 = _cross(q1, q2, p1)
    d2 = _cross(q1, q2, p2)
    d3 = _cross(p1, p2, q1)
    d4 = _cross(p1, p2, q2)
    if ((d1 > _EPS and d2 < -_EPS) or (d1 < -_EPS and d2 > _EPS)) and \
            ((d3 > _EPS and d4 < -_EPS) or (d3 < -_EPS and d4 > _EPS)):
        return True
    if abs(d1) <= _EPS and _on_segment(q1, p1, q2):
        return True
    if abs(d2) <= _EPS and _on_segment(q1, p2, q2):
        return True
    if abs(d3) <= _EPS and _on_segment(p1, q1, p2):
        return True
    if abs(d4) <= _EPS and _on_segment(p1, q2, p2):
        return True
    return False


def point_in_polygon(p: XY, polygon: list[XY]) -> bool:
    """Even-odd ray casting; boundary points are not guaranteed either way."""
    x, y = p
    inside = False
    n = len(polygon)
    for i in range(n):
        x1, y1 = polygon[i]
        x2, y2 = polygon[(i + 1) % n]
        if (y1 > y) != (y2 > y):
            xi = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
            if xi > x:
                inside = not inside
    return inside


def point_segment_distance(p: XY, a: XY, b: XY) -> float:
    dx, dy = b[0] - a[0], b[1] - a[1]
    seg2 = dx * dx + dy * dy
    if seg2 == 0.0:
        return math.hypot(p[0] - a[0], p[1] - a[1])
    t = max(0.0, min(1.0, ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / seg2))
    return math.hypot(p[0] - (a[0] + t * dx), p[1] - (a[1] + t * dy))


def bboxes_overlap(a, b) -> bool:
    return a[0] <= b[2] and b[0] <= a[2] and a[1] <= b[3] and b[1] <= a[3]


def coordsets_intersect(a: CoordinateSet, b: CoordinateSet) -> bool:
    """True if any pair of segments meets or one closed set contains the other."""
    if not bboxes_overlap(a.bbox(), b.bbox()):
        return False
    proj = LocalProjection.around(a.points + b.points)
    ax, bx = proj.project(a.points), proj.project(b.points)
    for p1, p2 in _segments(ax, a.closed):
        for q1, q2 in _segments(bx, b.closed):
            if segments_intersect(p1, p2, q1, q2):
                return True
    if b.closed and point_in_polygon(ax[0], bx):
        return True
    if a.closed and point_in_polygon(bx[0], ax):
        return True
    return False


def area_m2(s: CoordinateSet) -> float:
    """Shoelace area of a closed set in the local frame; open sets have no area."""
    if not s.closed:
        return 0.0
    xy = LocalProjection.around(s.points).project(s.points)
    total = 0.0
    for (x1, y1), (x2, y2) in zip(xy, xy[1:] + xy[:1]):
        total += x1 * y2 - x2 * y1
    return abs(total) / 2.0


def circle_intersects_coordset(center: LatLng, radius: float, s: CoordinateSet) -> bool:
    proj = LocalProjection(center)
    xy = proj.project(s.points)
    origin = (0.0, 0.0)
    for a, b in _segments(xy, s.closed):
        if point_segment_distance(origin, a, b) <= radius:
            return True
    return s.closed and point_in_polygon(origin, xy)


def circle_intersects_element(center: LatLng, radius: float, e: LandUsageElement) -> bool:
    """Whether any part of ``e`` lies within ``radius`` metres of ``center``."""
    return any(circle_intersects_coordset(center, radius, s) for s in e.coordsets)


def circle_bbox(center: LatLng, radius: float) -> tuple[float, float, float, float]:
    """Lat/lng box enclosing the circle as seen by the local projection at ``center``."""
    dlat = radius / METRES_PER_DEGREE
    coslat = max(math.cos(math.radians(center[0])), 1e-12)
    dlng = dlat / coslat
    pad = 1e-12
    return (center[0] - dlat - pad, center[1] - dlng - pad, center[0] + dlat + pad, center[1] + dlng + pad)
