"""Visibility regions of points, segments, routes and closed regions.

Regions are shapely geometries in float coordinates.  A point's region is P
minus the shadows cast by every edge.  A segment's region is assembled from
point regions: q sees some point of ab iff q sees a, b, a vertex lying on
ab, or q lies behind a reflex vertex v inside the cone that v's visible
part of ab projects through v.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence, Union

import shapely
from shapely.geometry import LineString, MultiPolygon
from shapely.geometry import Point as SPoint
from shapely.geometry import Polygon as SPolygon
from shapely.geometry.base import BaseGeometry
from shapely.ops import unary_union

from .errors import RegionOutsidePolygon, RouteOutsidePolygon, SourceOutsidePolygon
from .geometry import (
    TAU_GEOM,
    GeodesicPath,
    Point,
    Polygon,
    as_point,
    locate,
    on_segment,
    orient,
    segment_inside,
)

TAU_AREA = 1e-3
# sagitta of a chord over angle t is r(1 - cos(t/2)) ~ r t^2 / 8
THETA_ARC = math.sqrt(8 * TAU_AREA)
# snapping grid for boolean results
SNAP = 1e-9


@dataclass(frozen=True)
class Arc:
    center: Point
    radius: float
    start: float  # angle, radians
    sweep: float  # signed sweep, radians

    def point_at(self, angle: float) -> Point:
        return Point(
            float(self.center.x) + self.radius * math.cos(angle),
            float(self.center.y) + self.radius * math.sin(angle),
        )

    @property
    def length(self) -> float:
        return abs(self.sweep) * self.radius

    def sample(self, theta: float = THETA_ARC) -> list[Point]:
        steps = max(1, math.ceil(abs(self.sweep) / theta))
        return [self.point_at(self.start + self.sweep * i / steps) for i in range(steps + 1)]


Piece = Union[tuple, Arc]


@dataclass(frozen=True)
class VisibilityRegion:
    shape: BaseGeometry
    source: str

    @property
    def area(self) -> float:
        return self.shape.area

    @property
    def vertices(self) -> list[Point]:
        geom = self.shape
        polys = geom.geoms if isinstance(geom, MultiPolygon) else [geom]
        out = []
        for g in polys:
            out.extend(Point(x, y) for x, y in list(g.exterior.coords)[:-1])
        return out

    def contains(self, q, tol: float = 1e-7) -> bool:
        q = as_point(q)
        return self.shape.distance(SPoint(float(q.x), float(q.y))) <= tol


@lru_cache(maxsize=128)
def polygon_shape(P: Polygon) -> SPolygon:
    return SPolygon(P.coords())


@lru_cache(maxsize=128)
def _far(P: Polygon) -> float:
    x0, y0, x1, y1 = (float(c) for c in P.bbox)
    return 4.0 * (math.hypot(x1 - x0, y1 - y0) + 1.0)


def _snap(geom: BaseGeometry) -> BaseGeometry:
    return shapely.set_precision(geom, SNAP)


def _fpt(p: Point) -> tuple[float, float]:
    return float(p.x), float(p.y)


def _piece_near(geom: BaseGeometry, x: tuple[float, float]) -> BaseGeometry:
    """Largest polygon of ``geom`` touching x; drops slivers from float noise."""
    if isinstance(geom, SPolygon):
        return geom
    parts = [g for g in getattr(geom, "geoms", []) if isinstance(g, SPolygon) and g.area > 0]
    if not parts:
        return SPolygon()
    sx = SPoint(*x)
    near = [g for g in parts if g.distance(sx) <= 1e-7]
    return max(near or parts, key=lambda g: g.area)


@lru_cache(maxsize=200_000)
def point_visibility_shape(P: Polygon, x: Point) -> SPolygon:
    fx = _fpt(x)
    R = _far(P)
    shadows = []
    for a, b in P.edges:
        if orient(x, a, b) == 0:
            continue
        fa, fb = _fpt(a), _fpt(b)
        da = math.hypot(fa[0] - fx[0], fa[1] - fx[1])
        db = math.hypot(fb[0] - fx[0], fb[1] - fx[1])
        fa2 = (fa[0] + (fa[0] - fx[0]) / da * R, fa[1] + (fa[1] - fx[1]) / da * R)
        fb2 = (fb[0] + (fb[0] - fx[0]) / db * R, fb[1] + (fb[1] - fx[1]) / db * R)
        shadows.append(SPolygon([fa, fb, fb2, fa2]))
    vis = polygon_shape(P)
    if shadows:
        vis = _snap(vis.difference(unary_union(shadows)))
    return _piece_near(vis, fx)


def _visible_interval(P: Polygon, v: Point, a: Point, b: Point) -> tuple[Point, Point] | None:
    """Sub-segment of ab visible from v (it is connected in a simple polygon)."""
    hit = point_visibility_shape(P, v).intersection(LineString([_fpt(a), _fpt(b)]))
    if hit.is_empty:
        return None
    coords = []
    for g in getattr(hit, "geoms", [hit]):
        coords.extend(g.coords)
    ax, ay = _fpt(a)
    bx, by = _fpt(b)
    L2 = (bx - ax) ** 2 + (by - ay) ** 2
    ts = [((cx - ax) * (bx - ax) + (cy - ay) * (by - ay)) / L2 for cx, cy in coords]
    t0, t1 = max(0.0, min(ts)), min(1.0, max(ts))
    if t1 - t0 <= 1e-12:
        return None
    return (
        Point(ax + t0 * (bx - ax), ay + t0 * (by - ay)),
        Point(ax + t1 * (bx - ax), ay + t1 * (by - ay)),
    )


@lru_cache(maxsize=50_000)
def segment_visibility_shape(P: Polygon, a: Point, b: Point) -> BaseGeometry:
    if a == b:
        return point_visibility_shape(P, a)
    parts = [point_visibility_shape(P, a), point_visibility_shape(P, b)]
    for w in P.vertices:
        if w != a and w != b and on_segment(w, a, b):
            parts.append(point_visibility_shape(P, w))
    R = _far(P)
    for v in P.reflex_vertices:
        if orient(a, b, v) == 0:
            continue
        span = _visible_interval(P, v, a, b)
        if span is None:
            continue
        fv = _fpt(v)
        rays = []
        for x in span:
            dx, dy = fv[0] - float(x.x), fv[1] - float(x.y)
            d = math.hypot(dx, dy)
            rays.append((fv[0] + dx / d * R, fv[1] + dy / d * R))
        cone = SPolygon([fv, rays[0], rays[1]])
        if cone.area <= 0:
            continue
        parts.append(point_visibility_shape(P, v).intersection(cone))
    return _snap(unary_union(parts))


def visibility_polygon(P: Polygon, x) -> VisibilityRegion:
    """Visibility region of a point or of a segment given as a pair of points."""
    if isinstance(x, (tuple, list)) and len(x) == 2 and isinstance(x[0], (tuple, list)):
        a, b = as_point(x[0]), as_point(x[1])
        for p in (a, b):
            if locate(P, p) < 0:
                raise SourceOutsidePolygon(f"segment endpoint {p} lies outside the polygon")
        if not segment_inside(P, a, b):
            raise SourceOutsidePolygon(f"segment {a}-{b} leaves the polygon")
        return VisibilityRegion(segment_visibility_shape(P, a, b), f"segment {a}-{b}")
    p = as_point(x)
    if locate(P, p) < 0:
        raise SourceOutsidePolygon(f"point {p} lies outside the polygon")
    return VisibilityRegion(point_visibility_shape(P, p), f"point {p}")


def _route_points(route) -> tuple[Point, ...]:
    if isinstance(route, GeodesicPath):
        return route.waypoints
    return tuple(as_point(p) for p in route)


def route_visibility_shape(P: Polygon, routes: Iterable) -> BaseGeometry:
    parts = []
    for route in routes:
        wps = _route_points(route)
        for p in wps:
            if locate(P, p) < 0:
                raise RouteOutsidePolygon(f"route point {p} lies outside the polygon")
        if len(wps) == 1:
            parts.append(point_visibility_shape(P, wps[0]))
            continue
        for a, b in zip(wps, wps[1:]):
            if not segment_inside(P, a, b):
                raise RouteOutsidePolygon(f"route segment {a}-{b} leaves the polygon")
            parts.append(segment_visibility_shape(P, a, b))
    if not parts:
        return SPolygon()
    return _snap(unary_union(parts))


def route_visible_area(P: Polygon, routes: Iterable) -> float:
    """Area of the union of the visibility regions of all routes."""
    return route_visibility_shape(P, routes).area


def sample_pieces(pieces: Sequence[Piece], theta: float = THETA_ARC) -> list[Point]:
    """Closed ring of points tracing the boundary pieces in order."""
    ring: list[Point] = []
    for piece in pieces:
        pts = piece.sample(theta) if isinstance(piece, Arc) else [as_point(piece[0]), as_point(piece[1])]
        for p in pts:
            if not ring or (abs(float(ring[-1].x) - float(p.x)) > TAU_GEOM or abs(float(ring[-1].y) - float(p.y)) > TAU_GEOM):
                ring.append(p)
    if len(ring) > 1 and math.hypot(float(ring[0].x) - float(ring[-1].x), float(ring[0].y) - float(ring[-1].y)) <= TAU_GEOM:
        ring.pop()
    return ring


def region_visibility_shape(P: Polygon, pieces: Sequence[Piece], theta: float = THETA_ARC) -> BaseGeometry:
    ring = sample_pieces(pieces, theta)
    if not ring:
        raise RegionOutsidePolygon("empty region boundary")
    Pf = P.to_float() if P.exact else P
    for p in ring:
        if locate(Pf, Point(float(p.x), float(p.y))) < 0:
            raise RegionOutsidePolygon(f"region boundary point {p} lies outside the polygon")
    parts = []
    if len(ring) >= 3:
        region = SPolygon([_fpt(p) for p in ring])
        if not region.is_valid:
            region = region.buffer(0)
        parts.append(region)
    if len(ring) == 1:
        parts.append(point_visibility_shape(P, ring[0]))
    closed = ring + ring[:1] if len(ring) > 2 else ring
    for a, b in zip(closed, closed[1:]):
        if not segment_inside(P, a, b):
            raise RegionOutsidePolygon(f"region boundary segment {a}-{b} leaves the polygon")
        parts.append(segment_visibility_shape(P, a, b))
    return _snap(unary_union(parts))


def region_visible_area(
    P: Polygon, region_boundary: Sequence[Piece], interior_area: float | None = None, theta: float = THETA_ARC
) -> float:
    """|V(X)| for a closed region X given by its boundary, via V(X) = X u V(boundary).

    Arcs are replaced by chords at angular step ``theta``.  Since X lies inside
    V(X), an exactly known ``interior_area`` is used as a lower bound.
    """
    area = region_visibility_shape(P, region_boundary, theta).area
    if interior_area is not None:
        area = max(area, float(interior_area))
    return area
