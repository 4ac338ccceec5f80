"""Polygon primitives, predicates and geodesic shortest paths.

Coordinates are either exact (``int`` / ``Fraction``) or ``float``.  Exact
inputs get exact predicates; as soon as a float takes part, predicates fall
back to the absolute tolerance :data:`TAU_GEOM`.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, NamedTuple, Sequence, Union

from .errors import (
    DegenerateCollinearRun,
    NonIntegerCoordinates,
    NotClosed,
    NotOrthogonal,
    PointOutsidePolygon,
    SelfIntersecting,
)

TAU_GEOM = 1e-9

Number = Union[int, Fraction, float]


class Point(NamedTuple):
    x: Number
    y: Number

    def __repr__(self) -> str:
        return f"({self.x}, {self.y})"


Segment = tuple[Point, Point]


def as_number(v) -> Number:
    if isinstance(v, bool):
        raise TypeError("booleans are not coordinates")
    if isinstance(v, int):
        return v
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else v
    if isinstance(v, float):
        if not math.isfinite(v):
            raise ValueError(f"non-finite coordinate {v!r}")
        return v
    if isinstance(v, (Decimal, str)):
        return as_number(Fraction(v))
    raise TypeError(f"unsupported coordinate type {type(v).__name__}")


def as_point(p) -> Point:
    if isinstance(p, Point):
        return p
    x, y = p
    return Point(as_number(x), as_number(y))


def is_exact(*values: Number) -> bool:
    return not any(isinstance(v, float) for v in values)


def div(a: Number, b: Number) -> Number:
    """Division that stays exact for exact operands."""
    if isinstance(a, float) or isinstance(b, float):
        return a / b
    q = Fraction(a) / b
    return q.numerator if q.denominator == 1 else q


def cross(o: Point, a: Point, b: Point) -> Number:
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)


def orient(o: Point, a: Point, b: Point) -> int:
    """Sign of the turn o -> a -> b (+1 left, -1 right, 0 collinear)."""
    v = cross(o, a, b)
    if isinstance(v, float):
        scale = max(abs(a.x - o.x), abs(a.y - o.y), 1.0) * max(abs(b.x - o.x), abs(b.y - o.y), 1.0)
        if abs(v) <= TAU_GEOM * scale:
            return 0
    return (v > 0) - (v < 0)


def _le(a: Number, b: Number) -> bool:
    if isinstance(a, float) or isinstance(b, float):
        return a <= b + TAU_GEOM
    return a <= b


def on_segment(p: Point, a: Point, b: Point) -> bool:
    """True iff p lies on the closed segment ab."""
    if orient(a, b, p) != 0:
        return False
    return (
        _le(min(a.x, b.x), p.x)
        and _le(p.x, max(a.x, b.x))
        and _le(min(a.y, b.y), p.y)
        and _le(p.y, max(a.y, b.y))
    )


def segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool:
    """Closed segment intersection test."""
    d1 = orient(a, b, c)
    d2 = orient(a, b, d)
    d3 = orient(c, d, a)
    d4 = orient(c, d, b)
    if d1 * d2 < 0 and d3 * d4 < 0:
        return True
    return (
        (d1 == 0 and on_segment(c, a, b))
        or (d2 == 0 and on_segment(d, a, b))
        or (d3 == 0 and on_segment(a, c, d))
        or (d4 == 0 and on_segment(b, c, d))
    )


def segments_cross_properly(a: Point, b: Point, c: Point, d: Point) -> bool:
    return orient(a, b, c) * orient(a, b, d) < 0 and orient(c, d, a) * orient(c, d, b) < 0


def l1_length(a: Point, b: Point) -> Number:
    return abs(a.x - b.x) + abs(a.y - b.y)


def l2_length(a: Point, b: Point) -> float:
    return math.hypot(float(a.x - b.x), float(a.y - b.y))


def segment_length(a: Point, b: Point, metric: str) -> Number:
    return l1_length(a, b) if metric == "L1" else l2_length(a, b)


def path_length(waypoints: Sequence[Point], metric: str) -> Number:
    total: Number = 0
    for a, b in zip(waypoints, waypoints[1:]):
        total += segment_length(a, b, metric)
    return total


@dataclass(frozen=True)
class Polygon:
    """Simple polygon, counterclockwise, no repeated or collinear corners."""

    vertices: tuple[Point, ...]
    orthogonal: bool = False

    @property
    def n(self) -> int:
        return len(self.vertices)

    @cached_property
    def edges(self) -> tuple[Segment, ...]:
        vs = self.vertices
        return tuple((vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs)))

    @cached_property
    def exact(self) -> bool:
        return all(is_exact(v.x, v.y) for v in self.vertices)

    @cached_property
    def reflex_indices(self) -> tuple[int, ...]:
        vs = self.vertices
        n = len(vs)
        return tuple(i for i in range(n) if orient(vs[i - 1], vs[i], vs[(i + 1) % n]) < 0)

    @cached_property
    def reflex_vertices(self) -> tuple[Point, ...]:
        return tuple(self.vertices[i] for i in self.reflex_indices)

    @cached_property
    def bbox(self) -> tuple[Number, Number, Number, Number]:
        xs = [v.x for v in self.vertices]
        ys = [v.y for v in self.vertices]
        return min(xs), min(ys), max(xs), max(ys)

    @cached_property
    def perimeter_l1(self) -> Number:
        return sum(l1_length(a, b) for a, b in self.edges)

    def to_float(self) -> "Polygon":
        return Polygon(tuple(Point(float(v.x), float(v.y)) for v in self.vertices), self.orthogonal)

    def coords(self) -> list[tuple[float, float]]:
        return [(float(v.x), float(v.y)) for v in self.vertices]


def signed_area(vertices: Sequence[Point]) -> Number:
    s: Number = 0
    n = len(vertices)
    for i in range(n):
        a, b = vertices[i], vertices[(i + 1) % n]
        s += a.x * b.y - b.x * a.y
    return div(s, 2)


def validate_polygon(vertices: Iterable, require_orthogonal: bool = False) -> Polygon:
    """Check a vertex cycle and return it as a counterclockwise :class:`Polygon`.

    A trailing copy of the first vertex is accepted and dropped.  With
    ``require_orthogonal`` the cycle must be axis-parallel with integer
    coordinates.
    """
    pts = [as_point(v) for v in vertices]
    if len(pts) >= 2 and pts[0] == pts[-1]:
        pts.pop()
    if len(pts) < 3 or len(set(pts)) < 3:
        raise NotClosed(f"a closed boundary needs at least 3 distinct vertices, got {len(set(pts))}")
    n = len(pts)
    if require_orthogonal:
        ints = []
        for p in pts:
            coords = []
            for c in p:
                if isinstance(c, float) and c.is_integer():
                    c = int(c)
                if not isinstance(c, int):
                    raise NonIntegerCoordinates(f"vertex {p} has a non-integer coordinate")
                coords.append(c)
            ints.append(Point(*coords))
        pts = ints
    for i in range(n):
        a, b, c = pts[i - 1], pts[i], pts[(i + 1) % n]
        if a == b:
            raise DegenerateCollinearRun(f"repeated vertex {b}")
        if orient(a, b, c) == 0:
            raise DegenerateCollinearRun(f"vertex {b} is collinear with its neighbours")
    for i in range(n):
        a, b = pts[i], pts[(i + 1) % n]
        for j in range(i + 2, n):
            if i == 0 and j == n - 1:
                continue
            c, d = pts[j], pts[(j + 1) % n]
            if segments_intersect(a, b, c, d):
                raise SelfIntersecting(f"edges {a}-{b} and {c}-{d} intersect")
    axis_parallel = all(a.x == b.x or a.y == b.y for a, b in zip(pts, pts[1:] + pts[:1]))
    if require_orthogonal and not axis_parallel:
        raise NotOrthogonal("every edge must be horizontal or vertical")
    if signed_area(pts) < 0:
        pts.reverse()
    return Polygon(tuple(pts), orthogonal=axis_parallel)


def polygon_area(P: Polygon) -> Number:
    return abs(signed_area(P.vertices))


def locate(P: Polygon, q: Point) -> int:
    """+1 strictly inside, 0 on the boundary, -1 outside."""
    winding = 0
    for a, b in P.edges:
        if on_segment(q, a, b):
            return 0
        if a.y <= q.y:
            if b.y > q.y and orient(a, b, q) > 0:
                winding += 1
        elif b.y <= q.y and orient(a, b, q) < 0:
            winding -= 1
    return 1 if winding else -1


def contains(P: Polygon, q: Point) -> bool:
    return locate(P, as_point(q)) >= 0


def on_boundary(P: Polygon, q: Point) -> bool:
    return locate(P, as_point(q)) == 0


def _require_inside(P: Polygon, *pts: Point, error=PointOutsidePolygon) -> None:
    for p in pts:
        if locate(P, p) < 0:
            raise error(f"point {p} lies outside the polygon")


def _segment_param(a: Point, b: Point, p: Point) -> Number:
    dx, dy = b.x - a.x, b.y - a.y
    if abs(dx) >= abs(dy):
        return div(p.x - a.x, dx)
    return div(p.y - a.y, dy)


def segment_inside(P: Polygon, a: Point, b: Point) -> bool:
    """True iff the closed segment ab avoids the exterior of P (endpoints assumed in P)."""
    if a == b:
        return True
    ts = {0, 1}
    for p, q in P.edges:
        op, oq = orient(a, b, p), orient(a, b, q)
        if op == 0 and oq == 0:
            for r in (p, q):
                t = _segment_param(a, b, r)
                if 0 < t < 1:
                    ts.add(t)
            continue
        if op * oq > 0:
            continue
        oa, ob = orient(p, q, a), orient(p, q, b)
        if oa * ob > 0:
            continue
        den = (b.x - a.x) * (q.y - p.y) - (b.y - a.y) * (q.x - p.x)
        t = div((p.x - a.x) * (q.y - p.y) - (p.y - a.y) * (q.x - p.x), den)
        if 0 < t < 1:
            ts.add(t)
    params = sorted(ts)
    for t0, t1 in zip(params, params[1:]):
        tm = div(t0 + t1, 2)
        m = Point(a.x + tm * (b.x - a.x), a.y + tm * (b.y - a.y))
        if locate(P, m) < 0:
            return False
    return True


def point_sees_point(P: Polygon, a, b) -> bool:
    a, b = as_point(a), as_point(b)
    _require_inside(P, a, b)
    return segment_inside(P, a, b)


@dataclass(frozen=True)
class GeodesicPath:
    waypoints: tuple[Point, ...]
    length: Number
    metric: str = "L2"

    @property
    def start(self) -> Point:
        return self.waypoints[0]

    @property
    def end(self) -> Point:
        return self.waypoints[-1]

    def segments(self) -> list[Segment]:
        return list(zip(self.waypoints, self.waypoints[1:]))

    def reversed(self) -> "GeodesicPath":
        return GeodesicPath(tuple(reversed(self.waypoints)), self.length, self.metric)


def make_path(waypoints: Sequence[Point], metric: str) -> GeodesicPath:
    wps: list[Point] = []
    for p in waypoints:
        p = as_point(p)
        if not wps or wps[-1] != p:
            wps.append(p)
    if not wps:
        raise ValueError("empty path")
    return GeodesicPath(tuple(wps), path_length(wps, metric), metric)


class _VisibilityGraph:
    """Mutual visibility among reflex vertices; shortest paths bend only there."""

    def __init__(self, P: Polygon):
        self.P = P
        self.nodes = list(P.reflex_vertices)
        m = len(self.nodes)
        self.adj: list[list[int]] = [[] for _ in range(m)]
        for i in range(m):
            for j in range(i + 1, m):
                if segment_inside(P, self.nodes[i], self.nodes[j]):
                    self.adj[i].append(j)
                    self.adj[j].append(i)
        self._seen: dict[Point, list[int]] = {}

    def visible_nodes(self, p: Point) -> list[int]:
        hit = self._seen.get(p)
        if hit is None:
            if len(self._seen) > 4096:
                self._seen.clear()
            hit = self._seen[p] = [i for i, v in enumerate(self.nodes) if segment_inside(self.P, p, v)]
        return hit

    def shortest(self, a: Point, b: Point, metric: str) -> tuple[Number, list[Point]]:
        if segment_inside(self.P, a, b):
            return segment_length(a, b, metric), [a, b]
        m = len(self.nodes)
        src, dst = m, m + 1
        pts = self.nodes + [a, b]
        from_a = self.visible_nodes(a)
        to_b = set(self.visible_nodes(b))
        dist: dict[int, Number] = {src: 0}
        prev: dict[int, int] = {}
        heap: list = [(0, src)]
        done = set()
        while heap:
            d, u = heapq.heappop(heap)
            if u in done:
                continue
            done.add(u)
            if u == dst:
                break
            if u == src:
                nbrs = from_a
            else:
                nbrs = list(self.adj[u])
                if u in to_b:
                    nbrs.append(dst)
            for v in nbrs:
                nd = d + segment_length(pts[u], pts[v], metric)
                if v not in dist or nd < dist[v]:
                    dist[v] = nd
                    prev[v] = u
                    heapq.heappush(heap, (nd, v))
        if dst not in dist:
            raise PointOutsidePolygon(f"no path between {a} and {b}")
        chain = [dst]
        while chain[-1] != src:
            chain.append(prev[chain[-1]])
        return dist[dst], [pts[i] for i in reversed(chain)]


@lru_cache(maxsize=64)
def visibility_graph(P: Polygon) -> _VisibilityGraph:
    return _VisibilityGraph(P)


def geodesic_shortest_path(P: Polygon, a, b, metric: str = "L2") -> GeodesicPath:
    """Shortest path inside P from a to b.

    The search runs over the visibility graph of the reflex vertices.  In a
    simple polygon the Euclidean shortest path is also L1-shortest, so the
    same graph with L1 weights gives the continuous rectilinear distance.
    """
    if metric not in ("L1", "L2"):
        raise ValueError(f"unknown metric {metric!r}")
    a, b = as_point(a), as_point(b)
    _require_inside(P, a, b)
    if a == b:
        return GeodesicPath((a,), 0, metric)
    length, wps = visibility_graph(P).shortest(a, b, metric)
    return GeodesicPath(tuple(wps), length, metric)


def geodesic_distance(P: Polygon, a, b, metric: str = "L2") -> Number:
    return geodesic_shortest_path(P, a, b, metric).length


def boundary_edge_index(P: Polygon, q: Point) -> int | None:
    """Index of the first edge containing q, or None."""
    for i, (a, b) in enumerate(P.edges):
        if on_segment(q, a, b):
            return i
    return None
