"""Quota watchmen: k routes whose joint visibility region reaches area A.

Pipeline: find the smallest geodesic radius r_min whose disk sees A, then for
each radius r on a multiplicative schedule search the smallest budget B for
which a short tour inside the disk sees A, split that tour into k pieces of
equal length and close each piece at s with geodesic connectors.

Everything here is floating point; areas compare with relative tolerance
``TAU_AREA``.
"""

from __future__ import annotations

import bisect
import itertools
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np
import shapely
from shapely.geometry import MultiPolygon
from shapely.geometry import Point as SPoint
from shapely.geometry import Polygon as SPolygon
from shapely.geometry.base import BaseGeometry
from shapely.ops import unary_union

from .errors import BudgetInfeasible, QuotaExceedsArea
from .geometry import (
    TAU_GEOM,
    GeodesicPath,
    Point,
    Polygon,
    as_point,
    geodesic_distance,
    geodesic_shortest_path,
    make_path,
    polygon_area,
)
from .visibility import (
    TAU_AREA,
    Arc,
    Piece,
    point_visibility_shape,
    polygon_shape,
    region_visible_area,
    route_visible_area,
)

V_MAX = 8
# arc discretisation used for disk shapes (segments per quarter circle)
DISK_QUAD_SEGS = 64
# reachability slack for visibility tests on float points
VIS_TOL = 1e-7
MAX_CANDIDATES = 160
BEAM_WIDTH = 6


# ---------------------------------------------------------------------------
# geodesic disks


@dataclass(frozen=True)
class Apex:
    point: Point
    distance: float


@lru_cache(maxsize=64)
def apexes(P: Polygon, s: Point) -> tuple[Apex, ...]:
    """s and every reflex vertex, with its geodesic distance from s."""
    out = [Apex(s, 0.0)]
    for v in P.reflex_vertices:
        if v != s:
            out.append(Apex(v, float(geodesic_distance(P, s, v, "L2"))))
    return tuple(out)


@lru_cache(maxsize=64)
def geodesic_radius(P: Polygon, s: Point) -> float:
    """Largest geodesic distance from s to a point of P (attained at a vertex)."""
    return max(float(geodesic_distance(P, s, v, "L2")) for v in P.vertices)


def geodesic_from(P: Polygon, s: Point, xy: np.ndarray) -> np.ndarray:
    """Geodesic L2 distances from s to an (N, 2) array of points inside P."""
    best = np.full(len(xy), np.inf)
    if len(xy) == 0:
        return best
    pts = shapely.points(xy)
    for a in apexes(P, s):
        seen = shapely.distance(point_visibility_shape(P, a.point), pts) <= VIS_TOL
        d = a.distance + np.hypot(xy[:, 0] - float(a.point.x), xy[:, 1] - float(a.point.y))
        best = np.where(seen & (d < best), d, best)
    return best


@dataclass
class GeodesicDisk:
    center: Point
    radius: float
    shape: BaseGeometry
    boundary: list[Piece] = field(default_factory=list)

    @property
    def area(self) -> float:
        return self.shape.area

    @property
    def perimeter(self) -> float:
        total = 0.0
        for piece in self.boundary:
            if isinstance(piece, Arc):
                total += piece.length
            else:
                a, b = piece
                total += math.hypot(float(b.x) - float(a.x), float(b.y) - float(a.y))
        return total

    def arcs(self) -> list[Arc]:
        return [p for p in self.boundary if isinstance(p, Arc)]


def _on_boundary(P: Polygon, x: float, y: float) -> bool:
    return polygon_shape(P).exterior.distance(SPoint(x, y)) <= 1e-7


def _classify_ring(P: Polygon, ring: list[tuple[float, float]], circles: list[tuple[Apex, float]]) -> list[Piece]:
    """Split a disk outline into straight pieces on the polygon boundary and arcs."""
    pieces: list[Piece] = []
    run: list[tuple[float, float]] = []
    run_apex: tuple[Apex, float] | None = None

    def flush():
        nonlocal run, run_apex
        if run_apex is not None and len(run) >= 2:
            a, rad = run_apex
            cx, cy = float(a.point.x), float(a.point.y)
            angles = np.unwrap([math.atan2(y - cy, x - cx) for x, y in run])
            pieces.append(Arc(a.point, rad, float(angles[0]), float(angles[-1] - angles[0])))
        run, run_apex = [], None

    def circle_of(p, q):
        for a, rad in circles:
            cx, cy = float(a.point.x), float(a.point.y)
            if all(abs(math.hypot(x - cx, y - cy) - rad) <= 1e-6 * max(1.0, rad) for x, y in (p, q)):
                return a, rad
        return None

    for p, q in zip(ring, ring[1:]):
        mid = ((p[0] + q[0]) / 2, (p[1] + q[1]) / 2)
        straight = _on_boundary(P, *p) and _on_boundary(P, *q) and _on_boundary(P, *mid)
        c = None if straight else circle_of(p, q)
        if c is None:
            flush()
            pieces.append((Point(*p), Point(*q)))
            continue
        if run_apex is not None and c[0] != run_apex[0]:
            flush()
        if not run:
            run = [p]
            run_apex = c
        run.append(q)
    flush()
    return pieces


def _largest(geom: BaseGeometry) -> BaseGeometry:
    if isinstance(geom, MultiPolygon):
        return max(geom.geoms, key=lambda g: g.area)
    return geom


@lru_cache(maxsize=512)
def _disk(P: Polygon, s: Point, r: float) -> GeodesicDisk:
    if r <= 0:
        return GeodesicDisk(s, 0.0, SPolygon(), [])
    if r >= geodesic_radius(P, s):
        shape = polygon_shape(P)
        pieces: list[Piece] = list(P.edges)
        return GeodesicDisk(s, r, shape, pieces)
    parts = []
    circles = []
    for a in apexes(P, s):
        rest = r - a.distance
        if rest <= TAU_GEOM:
            continue
        ball = SPoint(float(a.point.x), float(a.point.y)).buffer(rest, quad_segs=DISK_QUAD_SEGS)
        parts.append(point_visibility_shape(P, a.point).intersection(ball))
        circles.append((a, rest))
    shape = _largest(shapely.set_precision(unary_union(parts), 1e-9))
    shape = shapely.normalize(shape)
    ring = list(shape.exterior.coords)
    return GeodesicDisk(s, r, shape, _classify_ring(P, ring, circles))


def geodesic_disk(P: Polygon, s, r: float) -> GeodesicDisk:
    """Points within geodesic L2 distance r of s: the union over apexes u of
    V(u) intersected with the Euclidean ball of radius r - d(s, u)."""
    if r < 0:
        raise ValueError("radius must be non-negative")
    return _disk(P, as_point(s), float(r))


def disk_visible_area(P: Polygon, s, r: float) -> float:
    """|V(C_g(r))|; the zero-radius disk is the point s."""
    s = as_point(s)
    if r <= 0:
        return point_visibility_shape(P, s).area
    disk = geodesic_disk(P, s, r)
    if r >= geodesic_radius(P, s):
        return disk.area
    return region_visible_area(P, disk.boundary, interior_area=disk.area)


def quota_met(area: float, A: float) -> bool:
    return area >= A * (1 - TAU_AREA)


def rmin_search(P: Polygon, s, A: float, rel_tol: float = 1e-4) -> float:
    """Smallest r (to ``rel_tol``) with |V(C_g(r))| >= A, by bisection."""
    s = as_point(s)
    total = float(polygon_area(P))
    if A > total * (1 + 1e-12):
        raise QuotaExceedsArea(f"quota {A} exceeds polygon area {total}")
    if quota_met(point_visibility_shape(P, s).area, A):
        return 0.0
    lo, hi = 0.0, geodesic_radius(P, s)
    while hi - lo > rel_tol * hi:
        mid = (lo + hi) / 2
        if quota_met(disk_visible_area(P, s, mid), A):
            hi = mid
        else:
            lo = mid
    return hi


# ---------------------------------------------------------------------------
# budget routes


@dataclass
class BudgetGrid:
    cell_size: float
    vertex_set: np.ndarray
    covered_cells: list[tuple[int, int]]


@dataclass
class BudgetRoute:
    route: GeodesicPath
    area: float
    budget: float
    grid: BudgetGrid | None = None
    stats: dict = field(default_factory=dict)


def budget_grid(P: Polygon, s: Point, r: float, B: float, eps: float) -> BudgetGrid:
    """Vertices of the cells (clipped to P) that overlap the geodesic disk.

    The lattice has spacing eps*B/(4n), is anchored at s and spans the
    square of side B centred at s, which holds every tour of length B.
    """
    delta = max(eps * B / (4 * P.n), TAU_GEOM)
    disk = geodesic_disk(P, s, r).shape
    x0, y0, x1, y1 = disk.bounds
    sx, sy = float(s.x), float(s.y)
    x0, y0 = max(x0, sx - B / 2), max(y0, sy - B / 2)
    x1, y1 = min(x1, sx + B / 2), min(y1, sy + B / 2)
    if disk.is_empty or x1 < x0 or y1 < y0:
        return BudgetGrid(delta, np.zeros((0, 2)), [])
    i0, i1 = math.floor((x0 - sx) / delta), math.ceil((x1 - sx) / delta)
    j0, j1 = math.floor((y0 - sy) / delta), math.ceil((y1 - sy) / delta)
    ii, jj = np.meshgrid(np.arange(i0, i1), np.arange(j0, j1), indexing="ij")
    ii, jj = ii.ravel(), jj.ravel()
    boxes = shapely.box(sx + ii * delta, sy + jj * delta, sx + (ii + 1) * delta, sy + (jj + 1) * delta)
    shapely.prepare(disk)
    hit = shapely.intersects(disk, boxes)
    clipped = shapely.intersection(boxes[hit], polygon_shape(P))
    coords = shapely.get_coordinates(clipped)
    verts = np.unique(np.round(coords, 9), axis=0) if len(coords) else np.zeros((0, 2))
    cells = list(zip(ii[hit].tolist(), jj[hit].tolist()))
    return BudgetGrid(delta, verts, cells)


def _farthest_point_subset(xy: np.ndarray, start: np.ndarray, size: int) -> np.ndarray:
    """Deterministic farthest-point sampling seeded at ``start``."""
    if len(xy) <= size:
        return np.arange(len(xy))
    dist = np.hypot(xy[:, 0] - start[0], xy[:, 1] - start[1])
    chosen = []
    for _ in range(size):
        i = int(np.argmax(dist))
        chosen.append(i)
        dist = np.minimum(dist, np.hypot(xy[:, 0] - xy[i, 0], xy[:, 1] - xy[i, 1]))
    return np.array(sorted(chosen))


@lru_cache(maxsize=64)
def _targets(P: Polygon, per_side: int = 40) -> tuple[np.ndarray, np.ndarray]:
    """Weighted sample of P: centroids of lattice cells clipped to P, weighted by area."""
    x0, y0, x1, y1 = (float(c) for c in P.bbox)
    w, h = (x1 - x0) / per_side, (y1 - y0) / per_side
    ii, jj = np.meshgrid(np.arange(per_side), np.arange(per_side), indexing="ij")
    ii, jj = ii.ravel(), jj.ravel()
    boxes = shapely.box(x0 + ii * w, y0 + jj * h, x0 + (ii + 1) * w, y0 + (jj + 1) * h)
    clipped = shapely.intersection(boxes, polygon_shape(P))
    area = shapely.area(clipped)
    keep = area > 1e-12
    pts = shapely.point_on_surface(clipped[keep])
    return shapely.get_coordinates(pts), area[keep]


def _geodesic_matrix(P: Polygon, pts: list[Point], shapes: list[BaseGeometry]) -> np.ndarray:
    """All-pairs geodesic L2 distances among pts via direct sight or reflex vertices."""
    xy = np.array([[float(p.x), float(p.y)] for p in pts])
    n = len(pts)
    geo = shapely.points(xy)
    direct = np.hypot(xy[:, None, 0] - xy[None, :, 0], xy[:, None, 1] - xy[None, :, 1])
    sees = np.array([shapely.distance(sh, geo) <= VIS_TOL for sh in shapes])
    sees = sees & sees.T
    D = np.where(sees, direct, np.inf)
    refl = list(P.reflex_vertices)
    if refl:
        rxy = np.array([[float(v.x), float(v.y)] for v in refl])
        rgeo = shapely.points(rxy)
        to_r = np.array([shapely.distance(sh, rgeo) <= VIS_TOL for sh in shapes])
        A = np.where(to_r, np.hypot(xy[:, None, 0] - rxy[None, :, 0], xy[:, None, 1] - rxy[None, :, 1]), np.inf)
        R = _reflex_apsp(P)
        # min over u, v of A[a,u] + R[u,v] + A[b,v]
        AR = np.min(A[:, :, None] + R[None, :, :], axis=1)
        via = np.min(AR[:, None, :] + A[None, :, :], axis=2)
        D = np.minimum(D, via)
    np.fill_diagonal(D, 0.0)
    return D


@lru_cache(maxsize=64)
def _reflex_apsp(P: Polygon) -> np.ndarray:
    refl = list(P.reflex_vertices)
    R = np.array([[float(geodesic_distance(P, u, v, "L2")) for v in refl] for u in refl])
    return R.reshape(len(refl), len(refl))


def _tour_waypoints(P: Polygon, tour: Sequence[Point]) -> GeodesicPath:
    wps: list[Point] = [tour[0]]
    for a, b in zip(tour, tour[1:]):
        wps.extend(geodesic_shortest_path(P, a, b, "L2").waypoints[1:])
    return make_path(wps, "L2")


def _zero_route(P: Polygon, s: Point, B: float) -> BudgetRoute:
    return BudgetRoute(GeodesicPath((s,), 0.0, "L2"), point_visibility_shape(P, s).area, B)


def budget_route(P: Polygon, s, r: float, B: float, eps: float, A: float | None = None) -> BudgetRoute:
    """Closed tour through s of length <= (1+eps)B with vertices on the budget
    grid, chosen to see as much area as the search family allows.

    The family is built by best-first insertion: tours grow one grid vertex at
    a time (at most ``V_MAX``), keeping the ``BEAM_WIDTH`` tours with the
    largest sampled coverage.  Final candidates are ranked by exact visible
    area, then length, then vertex list.
    """
    s = as_point(s)
    if B <= 0:
        return _zero_route(P, s, B)
    t0 = time.perf_counter()
    grid = budget_grid(P, s, r, B, eps)
    xy = grid.vertex_set
    if len(xy):
        xy = xy[geodesic_from(P, s, xy) <= r * (1 + eps) + TAU_GEOM]
    cap = (1 + eps) * B
    sxy = np.array([float(s.x), float(s.y)])
    pick = _farthest_point_subset(xy, sxy, MAX_CANDIDATES)
    cand = [s] + [Point(float(x), float(y)) for x, y in xy[pick] if (x, y) != (sxy[0], sxy[1])]
    shapes = [point_visibility_shape(P, p) for p in cand]
    txy, tw = _targets(P)
    tgeo = shapely.points(txy)
    vis = np.array([shapely.distance(sh, tgeo) <= VIS_TOL for sh in shapes])
    D = _geodesic_matrix(P, cand, shapes)
    n = len(cand)

    # tour: tuple of candidate indices, implicitly closed at 0
    def length(tour):
        seq = (0, *tour, 0)
        return float(sum(D[a, b] for a, b in zip(seq, seq[1:])))

    beam = [((), vis[0].copy(), 0.0)]
    finals = {(): (float(tw @ vis[0]), 0.0)}
    for _ in range(V_MAX):
        grown = {}
        for tour, cov, L in beam:
            seq = (0, *tour, 0)
            gain = (vis & ~cov) @ tw
            # cheapest insertion position per candidate
            ins = np.full(n, np.inf)
            pos = np.zeros(n, dtype=int)
            for p, (a, b) in enumerate(zip(seq, seq[1:])):
                extra = D[a, :] + D[:, b] - D[a, b]
                better = extra < ins
                ins = np.where(better, extra, ins)
                pos = np.where(better, p, pos)
            ok = (L + ins <= cap) & (gain > 1e-12)
            ok[list(tour) + [0]] = False
            idx = np.nonzero(ok)[0]
            if len(idx) == 0:
                continue
            order = idx[np.lexsort((idx, ins[idx], -gain[idx]))][:BEAM_WIDTH]
            for c in order.tolist():
                new = tour[: pos[c]] + (c,) + tour[pos[c] :]
                if new in grown:
                    continue
                cov2 = cov | vis[c]
                grown[new] = (cov2, length(new))
        if not grown:
            break
        ranked = sorted(grown.items(), key=lambda kv: (-float(tw @ kv[1][0]), kv[1][1], kv[0]))[:BEAM_WIDTH]
        beam = [(t, c, L) for t, (c, L) in ranked]
        for t, c, L in beam:
            finals[t] = (float(tw @ c), L)
    ranked = sorted(finals.items(), key=lambda kv: (-kv[1][0], kv[1][1], kv[0]))[:3]
    best = None
    for tour, _ in ranked:
        path = _tour_waypoints(P, [cand[i] for i in (0, *tour, 0)])
        if path.length > cap * (1 + 1e-9) + TAU_GEOM:
            continue
        area = route_visible_area(P, [path])
        key = (-round(area, 9), round(float(path.length), 9), tuple(path.waypoints))
        if best is None or key < best[0]:
            best = (key, path, area)
    if best is None:
        out = _zero_route(P, s, B)
    else:
        out = BudgetRoute(best[1], best[2], B)
    out.grid = grid
    out.stats = {"candidates": n, "grid_vertices": len(grid.vertex_set), "time": time.perf_counter() - t0}
    return out


def budget_values(n: int, r_min: float, eps: float) -> list[float]:
    steps = math.ceil(9 * n / eps)
    top = 9 * n * r_min
    return [top * i / steps for i in range(steps + 1)]


@dataclass
class BudgetSearch:
    budget: float
    route: BudgetRoute
    evaluated: dict[float, float]
    monotone: bool
    linear_scan: bool


def budget_binary_search(
    P: Polygon, s, r: float, eps: float, A: float, r_min: float, cache: dict | None = None
) -> BudgetSearch:
    """Smallest budget value whose budget route sees A.

    Binary search presumes the area is nondecreasing in B.  The areas seen
    along the way are checked for that; on a violation the values below the
    found budget are rescanned in order.
    """
    s = as_point(s)
    cache = {} if cache is None else cache
    eff_r = min(r, geodesic_radius(P, s))
    values = budget_values(P.n, r_min, eps)
    evaluated: dict[float, float] = {}

    def run(i: int) -> BudgetRoute:
        key = (round(values[i], 12), round(eff_r, 12))
        if key not in cache:
            cache[key] = budget_route(P, s, eff_r, values[i], eps, A)
        res = cache[key]
        evaluated[values[i]] = res.area
        return res

    if quota_met(run(0).area, A):
        return BudgetSearch(0.0, run(0), evaluated, True, False)
    hi = len(values) - 1
    if not quota_met(run(hi).area, A):
        raise BudgetInfeasible(f"no budget up to {values[hi]:.6g} reaches the quota at r={r:.6g}")
    lo = 0
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if quota_met(run(mid).area, A):
            hi = mid
        else:
            lo = mid
    items = sorted(evaluated.items())
    monotone = all(a2 >= a1 - TAU_AREA * max(A, 1.0) for (_, a1), (_, a2) in zip(items, items[1:]))
    linear = False
    if not monotone:
        linear = True
        for i in range(hi):
            if quota_met(run(i).area, A):
                hi = i
                break
    return BudgetSearch(values[hi], run(hi), evaluated, monotone, linear)


# ---------------------------------------------------------------------------
# assembly


@dataclass
class QuotaSolution:
    routes: list[GeodesicPath]
    max_length: float
    per_route_lengths: list[float]
    achieved_area: float
    r_final: float
    budget_used: float
    factor_mode: str
    r_min: float = 0.0
    eps_prime: float = 0.0
    tour_length: float = 0.0
    quota: float = 0.0
    metric: str = "L2"
    disks: list[tuple[float, float]] = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    @property
    def assembly_bound(self) -> float:
        """|gamma'|/k + 2(1 + eps) r for the chosen radius."""
        return self.stats.get("assembly_bound", 0.0)


FACTOR_MODES = {"double": "double_3eps", "oneplus": "oneplus_2eps"}


def eps_prime(eps: float, factor_mode: str) -> float:
    if factor_mode == "double":
        return 4 * eps + eps**2
    if factor_mode == "oneplus":
        return 4 * eps + 2 * eps**2
    raise ValueError(f"unknown factor mode {factor_mode!r}")


def split_route(path: GeodesicPath, k: int) -> list[tuple[Point, ...]]:
    """Cut a closed path into k pieces of equal arclength, starting at its first point."""
    wps = [Point(float(p.x), float(p.y)) for p in path.waypoints]
    lens = [math.hypot(b.x - a.x, b.y - a.y) for a, b in zip(wps, wps[1:])]
    total = sum(lens)
    if total <= 0:
        return [(wps[0],)] * k
    cum = [0.0, *itertools.accumulate(lens)]
    cuts = [total * i / k for i in range(k + 1)]

    def at(t: float) -> tuple[int, Point]:
        i = min(bisect.bisect_right(cum, t) - 1, len(lens) - 1)
        if lens[i] == 0:
            return i, wps[i]
        f = (t - cum[i]) / lens[i]
        a, b = wps[i], wps[i + 1]
        return i, Point(a.x + f * (b.x - a.x), a.y + f * (b.y - a.y))

    pieces = []
    for t0, t1 in zip(cuts, cuts[1:]):
        i0, p0 = at(t0)
        i1, p1 = at(t1)
        if t1 >= total:
            i1, p1 = len(lens) - 1, wps[-1]
        pts = [p0, *wps[i0 + 1 : i1 + 1], p1]
        dedup = [pts[0]]
        for p in pts[1:]:
            if math.hypot(p.x - dedup[-1].x, p.y - dedup[-1].y) > TAU_GEOM:
                dedup.append(p)
        pieces.append(tuple(dedup))
    return pieces


def assemble_routes(P: Polygon, s: Point, path: GeodesicPath, k: int) -> list[GeodesicPath]:
    """Route i: geodesic s -> a_i, the i-th piece of the tour, geodesic a_{i+1} -> s."""
    routes = []
    for piece in split_route(path, k):
        head = geodesic_shortest_path(P, s, piece[0], "L2").waypoints
        tail = geodesic_shortest_path(P, piece[-1], s, "L2").waypoints
        wps = [*head, *piece[1:], *tail[1:]]
        routes.append(make_path(wps, "L2"))
    return routes


def _radius_schedule(r_min: float, n: int, eps: float, factor_mode: str) -> list[float]:
    factor = 2.0 if factor_mode == "double" else 1.0 + eps
    out = []
    r = r_min
    while r <= 9 * n * r_min:
        out.append(r)
        r *= factor
    return out


def solve_quota(
    P: Polygon, s, k: int, A: float, eps: float, factor_mode: str = "double", threads: int = 1
) -> QuotaSolution:
    """Approximate min-max k routes whose joint visibility area reaches A."""
    t0 = time.perf_counter()
    s = as_point(s)
    if k < 1:
        raise ValueError("k must be positive")
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    ep = eps_prime(eps, factor_mode)
    total = float(polygon_area(P))
    if A > total * (1 + 1e-12):
        raise QuotaExceedsArea(f"quota {A} exceeds polygon area {total}")
    vs = point_visibility_shape(P, s).area
    if quota_met(vs, A):
        routes = [GeodesicPath((s,), 0.0, "L2") for _ in range(k)]
        return QuotaSolution(
            routes, 0.0, [0.0] * k, vs, 0.0, 0.0, FACTOR_MODES[factor_mode], 0.0, ep, 0.0, A,
            stats={"iterations": 0, "wall_time": time.perf_counter() - t0, "assembly_bound": 0.0},
        )
    r_min = rmin_search(P, s, A)
    schedule = _radius_schedule(r_min, P.n, eps, factor_mode)
    cache: dict = {}

    def attempt(r: float):
        try:
            found = budget_binary_search(P, s, r, eps, A, r_min, cache)
        except BudgetInfeasible:
            return r, None
        routes = assemble_routes(P, s, found.route.route, k)
        return r, (found, routes)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(attempt, schedule))
    else:
        results = [attempt(r) for r in schedule]
    best = None
    disks = []
    for r, res in results:
        disks.append((r, geodesic_disk(P, s, min(r, geodesic_radius(P, s))).perimeter))
        if res is None:
            continue
        found, routes = res
        L = max(float(p.length) for p in routes)
        key = (round(L, 9), r)
        if best is None or key < best[0]:
            best = (key, r, found, routes)
    if best is None:
        raise BudgetInfeasible("no radius on the schedule produced a route meeting the quota")
    _, r, found, routes = best
    lengths = [float(p.length) for p in routes]
    achieved = route_visible_area(P, routes)
    tour = float(found.route.route.length)
    stats = {
        "iterations": len(schedule),
        "schedule": schedule,
        "budget_evaluations": len(cache),
        "monotone": found.monotone,
        "linear_scan": found.linear_scan,
        "assembly_bound": tour / k + 2 * (1 + eps) * r,
        "wall_time": time.perf_counter() - t0,
    }
    return QuotaSolution(
        routes, max(lengths), lengths, achieved, r, found.budget, FACTOR_MODES[factor_mode],
        r_min, ep, tour, A, "L2", disks, stats,
    )
