"""Anchored k-watchmen routes in an orthogonal polygon under rectilinear motion.

Every route is a closed tour from s through contact points on essential cuts,
joined by geodesic L1 shortest paths along the Hanan grid.  The exact solver
tabulates reachable (endpoints, lengths) configurations cut by cut; the FPTAS
runs the same table on lengths rounded down to a uniform bucket width.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from shapely.geometry import Point as SPoint

from .cuts import EssentialCutList, HananGrid, build_hanan_grid, compute_essential_cuts, contact_point
from .errors import InstanceTooLarge
from .geometry import (
    GeodesicPath,
    Number,
    Point,
    Polygon,
    as_number,
    as_point,
    div,
    l2_length,
    locate,
    make_path,
    on_segment,
    path_length,
    segment_inside,
    segments_intersect,
)

DEFAULT_STATE_BUDGET = 2_000_000
# samples farther than this from the float visibility outline skip the exact test
SCREEN_MARGIN = 1e-6


@dataclass
class Solution:
    routes: list[GeodesicPath]
    max_length: Number
    per_route_lengths: list[Number]
    mode: str
    metric: str = "L1"
    stats: dict = field(default_factory=dict)
    # grid node sequence of each route, s excluded
    contacts: list[tuple[int, ...]] = field(default_factory=list)


@dataclass
class Context:
    P: Polygon
    s: Point
    cuts: EssentialCutList
    grid: HananGrid


def prepare(P: Polygon, s, cuts: EssentialCutList | None = None) -> Context:
    s = as_point(s)
    if cuts is None:
        cuts = compute_essential_cuts(P, s)
    return Context(P, s, cuts, build_hanan_grid(P, s, cuts))


def _route_from_nodes(ctx: Context, nodes: Sequence[int]) -> GeodesicPath:
    grid = ctx.grid
    seq = [grid.s_node, *nodes, grid.s_node]
    wps: list[Point] = [ctx.s]
    for u, v in zip(seq, seq[1:]):
        wps.extend(grid.path(u, v)[1:])
    return make_path(wps, "L1")


def _tour_length(ctx: Context, nodes: Sequence[int]) -> Number:
    seq = [ctx.grid.s_node, *nodes, ctx.grid.s_node]
    return sum(ctx.grid.distance(u, v) for u, v in zip(seq, seq[1:]))


def _layered_tour(ctx: Context, layers: Sequence[int]) -> tuple[Number, tuple[int, ...]]:
    """Shortest closed tour from s touching the given cuts in the given order."""
    grid = ctx.grid
    s = grid.s_node
    prev: dict[int, tuple[Number, tuple[int, ...]]] = {s: (0, ())}
    for j in layers:
        cur: dict[int, tuple[Number, tuple[int, ...]]] = {}
        for p in grid.cut_incidence[j]:
            best = None
            for q, (d, hist) in prev.items():
                cand = (d + grid.distance(q, p), hist + (p,))
                if best is None or cand < best:
                    best = cand
            cur[p] = best
        prev = cur
    best = None
    for p, (d, hist) in prev.items():
        cand = (d + grid.distance(p, s), hist)
        if best is None or cand < best:
            best = cand
    return best


def single_route_opt(P: Polygon, s, ctx: Context | None = None) -> tuple[Number, GeodesicPath]:
    """Shortest single anchored watchman route, visiting the cuts in boundary order."""
    ctx = ctx or prepare(P, s)
    length, nodes = _layered_tour(ctx, range(ctx.cuts.m))
    return length, _route_from_nodes(ctx, nodes)


def _pareto_insert(group: dict, lengths: tuple, payload) -> bool:
    """Keep only component-wise minimal length vectors. Returns True if inserted."""
    for other in list(group):
        if all(a <= b for a, b in zip(other, lengths)):
            if other == lengths and payload < group[other]:
                group[other] = payload
                return True
            return False
    for other in list(group):
        if all(a <= b for a, b in zip(lengths, other)):
            del group[other]
    group[lengths] = payload
    return True


def _solve_table(
    ctx: Context,
    k: int,
    bucket: Callable[[Number], Number],
    cap: Number,
    budget: int,
) -> tuple[tuple, dict]:
    """Run the cut-by-cut table.

    ``bucket`` maps a true leg length to its table length (identity for the
    exact solver, rounded-down bucket count for the FPTAS).  States whose
    table lower bound exceeds ``cap`` are discarded.  Returns the chosen final
    state as (endpoints, table lengths, true lengths, histories) and stats.
    """
    grid = ctx.grid
    s = grid.s_node
    home = {u: bucket(grid.distance(u, s)) for u in grid.key_nodes()}
    contact_cache: dict[tuple[int, int], tuple[int, Number, Number]] = {}

    def contact(u: int, j: int):
        key = (u, j)
        if key not in contact_cache:
            c = contact_point(grid, u, j)
            contact_cache[key] = (c.node, c.distance, bucket(c.distance))
        return contact_cache[key]

    # state: endpoints (sorted with lengths) -> {table lengths: (true lengths, histories)}
    start = ((s,) * k, (0,) * k)
    layer: dict[tuple, dict] = {start[0]: {start[1]: ((0,) * k, ((),) * k)}}
    per_layer = [1]
    generated = 0
    for j in range(ctx.cuts.m):
        on_cut = set(grid.cut_incidence[j])
        nxt: dict[tuple, dict] = {}

        def push(ends, tab, true, hist):
            order = sorted(range(k), key=lambda i: (ends[i], tab[i], true[i], hist[i]))
            e = tuple(ends[i] for i in order)
            group = nxt.setdefault(e, {})
            _pareto_insert(group, tuple(tab[i] for i in order), (tuple(true[i] for i in order), tuple(hist[i] for i in order)))

        for ends in sorted(layer):
            for tab, (true, hist) in sorted(layer[ends].items()):
                if any(p in on_cut for p in ends):
                    push(ends, tab, true, hist)
                seen = set()
                for i in range(k):
                    if (ends[i], tab[i]) in seen:
                        continue
                    seen.add((ends[i], tab[i]))
                    p, d, db = contact(ends[i], j)
                    if db > cap:
                        continue
                    new_tab = tab[i] + db
                    if new_tab + home[p] > cap:
                        continue
                    generated += 1
                    if generated > budget:
                        raise InstanceTooLarge(f"state budget of {budget} exceeded at cut {j + 1}")
                    e2 = ends[:i] + (p,) + ends[i + 1 :]
                    t2 = tab[:i] + (new_tab,) + tab[i + 1 :]
                    tr2 = true[:i] + (true[i] + d,) + true[i + 1 :]
                    h2 = hist[:i] + (hist[i] + (p,),) + hist[i + 1 :]
                    push(e2, t2, tr2, h2)
        layer = nxt
        per_layer.append(sum(len(g) for g in layer.values()))
    best = None
    for ends in sorted(layer):
        for tab, (true, hist) in layer[ends].items():
            closed_tab = tuple(t + home[p] for p, t in zip(ends, tab))
            closed_true = tuple(t + grid.distance(p, s) for p, t in zip(ends, true))
            key = (max(closed_tab), tuple(sorted(closed_true)), max(closed_true), tuple(sorted(hist)))
            if best is None or key < best[0]:
                best = (key, ends, hist)
    stats = {"states_per_layer": per_layer, "transitions": generated, "cuts": ctx.cuts.m}
    return best, stats


def _solution_from_histories(ctx: Context, hists: Sequence[tuple[int, ...]], mode: str, stats: dict) -> Solution:
    hists = sorted(hists, key=lambda h: (_tour_length(ctx, h), h))
    routes = [_route_from_nodes(ctx, h) for h in hists]
    lengths = [r.length for r in routes]
    return Solution(routes, max(lengths), lengths, mode, "L1", stats, [tuple(h) for h in hists])


def _check_k(k: int) -> None:
    if not isinstance(k, int) or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")


def exact_dp(P: Polygon, s, k: int, ctx: Context | None = None, budget: int = DEFAULT_STATE_BUDGET) -> Solution:
    """Min-max k watchmen routes, exact under the Hanan-grid restriction."""
    _check_k(k)
    t0 = time.perf_counter()
    ctx = ctx or prepare(P, s)
    if ctx.cuts.m == 0:
        return _solution_from_histories(ctx, [()] * k, "exact", {"L": 0, "cuts": 0, "states_per_layer": [1], "transitions": 0, "wall_time": time.perf_counter() - t0})
    L, _ = single_route_opt(P, s, ctx)
    best, stats = _solve_table(ctx, k, lambda d: d, L, budget)
    stats.update(L=L, wall_time=time.perf_counter() - t0)
    return _solution_from_histories(ctx, best[2], "exact", stats)


def _as_fraction(eps) -> Fraction:
    e = as_number(eps) if not isinstance(eps, float) else Fraction(str(eps))
    e = Fraction(e)
    if e <= 0:
        raise ValueError("epsilon must be positive")
    return e


def fptas(P: Polygon, s, k: int, eps, ctx: Context | None = None, budget: int = DEFAULT_STATE_BUDGET) -> Solution:
    """(1 + eps)-approximation with lengths bucketed to L / ceil(n k / eps)."""
    _check_k(k)
    t0 = time.perf_counter()
    e = _as_fraction(eps)
    ctx = ctx or prepare(P, s)
    if ctx.cuts.m == 0:
        return _solution_from_histories(ctx, [()] * k, "fptas", {"L": 0, "cuts": 0, "states_per_layer": [1], "transitions": 0, "wall_time": time.perf_counter() - t0})
    L, _ = single_route_opt(P, s, ctx)
    N = math.ceil(Fraction(P.n * k) / e)

    def bucket(d: Number) -> int:
        # floor(d / (L / N)) in exact arithmetic; L == 0 when s lies on every cut
        return math.floor(Fraction(d) * N / L) if L else 0

    best, stats = _solve_table(ctx, k, bucket, N, budget)
    stats.update(L=L, intervals=N, interval_width=div(L, N) if L else 0, wall_time=time.perf_counter() - t0)
    sol = _solution_from_histories(ctx, best[2], "fptas", stats)
    sol.stats["rounded_max"] = best[0][0]
    return sol


def l2_wrapper(P: Polygon, s, k: int, eps, ctx: Context | None = None) -> Solution:
    """FPTAS routes measured in the Euclidean metric."""
    sol = fptas(P, s, k, eps, ctx)
    l2 = [path_length(r.waypoints, "L2") for r in sol.routes]
    routes = [GeodesicPath(r.waypoints, x, "L2") for r, x in zip(sol.routes, l2)]
    stats = dict(sol.stats, l1_max_length=sol.max_length, l1_lengths=list(sol.per_route_lengths))
    return Solution(routes, max(l2), l2, "l2", "L2", stats, sol.contacts)


def brute_force_oracle(P: Polygon, s, k: int, ctx: Context | None = None, max_cuts: int = 8, max_k: int = 3) -> Solution:
    """Enumerate every assignment of cuts to watchmen; each watchman tours its
    cuts in boundary order along the grid."""
    _check_k(k)
    t0 = time.perf_counter()
    ctx = ctx or prepare(P, s)
    m = ctx.cuts.m
    if m > max_cuts or k > max_k:
        raise InstanceTooLarge(f"oracle limited to m <= {max_cuts}, k <= {max_k} (got m={m}, k={k})")
    subset: dict[int, tuple[Number, tuple[int, ...]]] = {}
    for mask in range(1 << m):
        subset[mask] = _layered_tour(ctx, [j for j in range(m) if mask >> j & 1])
    best = None
    for assign in itertools.product(range(k), repeat=m):
        masks = [0] * k
        for j, w in enumerate(assign):
            masks[w] |= 1 << j
        value = max(subset[mk][0] for mk in masks)
        if best is None or value < best[0]:
            best = (value, masks)
    hists = [subset[mk][1] for mk in best[1]]
    stats = {"assignments": k**m, "cuts": m, "wall_time": time.perf_counter() - t0}
    return _solution_from_histories(ctx, hists, "oracle", stats)


# ---------------------------------------------------------------------------
# coverage verification


@dataclass
class CoverReport:
    passed: bool
    cuts_total: int
    unvisited_cuts: list[int]
    samples_checked: int
    invisible_samples: list[Point]
    outside_segments: list[tuple[Point, Point]]

    def summary(self) -> dict:
        return {
            "passed": self.passed,
            "cuts_total": self.cuts_total,
            "unvisited_cuts": list(self.unvisited_cuts),
            "samples_checked": self.samples_checked,
            "invisible_samples": len(self.invisible_samples),
            "outside_segments": len(self.outside_segments),
        }


def _route_points(route) -> tuple[Point, ...]:
    if isinstance(route, GeodesicPath):
        return route.waypoints
    return tuple(as_point(p) for p in route)


def _line_hit(q: Point, v: Point, a: Point, b: Point) -> Point | None:
    """Intersection of the line through q, v with the segment ab, if any."""
    dx, dy = v.x - q.x, v.y - q.y
    ex, ey = b.x - a.x, b.y - a.y
    den = dx * ey - dy * ex
    if den == 0:
        return None
    t = div((a.x - q.x) * dy - (a.y - q.y) * dx, den)
    if 0 <= t <= 1:
        return Point(a.x + t * ex, a.y + t * ey)
    return None


def point_sees_segment(P: Polygon, q: Point, a: Point, b: Point) -> bool:
    """Exact: the visible part of ab from q is a closed interval whose ends are
    a, b, or hits of lines through q and a polygon vertex."""
    if segment_inside(P, q, a) or segment_inside(P, q, b):
        return True
    if a == b:
        return False
    for v in P.vertices:
        if v == q:
            continue
        x = on_segment(v, a, b) and v or _line_hit(q, v, a, b)
        if x is not None and segment_inside(P, q, x):
            return True
    return False


def sample_points(P: Polygon, per_side: int = 24, region: Polygon | None = None) -> list[Point]:
    """Interior sample points on an offset rational lattice over the bounding box."""
    target = region or P
    x0, y0, x1, y1 = target.bbox
    out = []
    for i in range(per_side):
        for j in range(per_side):
            x = x0 + (x1 - x0) * Fraction(100 * i + 37, 100 * per_side)
            y = y0 + (y1 - y0) * Fraction(100 * j + 61, 100 * per_side)
            q = Point(as_number(x), as_number(y))
            if _strictly_inside(target, q) and (target is P or _strictly_inside(P, q)):
                out.append(q)
    return out


def _strictly_inside(P: Polygon, q: Point) -> bool:
    from .visibility import polygon_shape

    shape = polygon_shape(P)
    fq = SPoint(float(q.x), float(q.y))
    if shape.boundary.distance(fq) > SCREEN_MARGIN:
        return shape.contains(fq)
    return locate(P, q) > 0


def verify_cover(
    P: Polygon,
    s,
    routes: Sequence,
    cuts: EssentialCutList | None = None,
    samples: Sequence[Point] | None = None,
    per_side: int = 16,
) -> CoverReport:
    """Check that the routes see all of P.

    The decisive test is exact: every essential cut must meet some route.
    Independently, lattice sample points must each see some route segment.
    """
    s = as_point(s)
    if cuts is None:
        cuts = compute_essential_cuts(P, s)
    paths = [_route_points(r) for r in routes]
    segs = []
    outside = []
    for wps in paths:
        if len(wps) == 1:
            segs.append((wps[0], wps[0]))
        for a, b in zip(wps, wps[1:]):
            if locate(P, a) < 0 or locate(P, b) < 0 or not segment_inside(P, a, b):
                outside.append((a, b))
            segs.append((a, b))
    unvisited = []
    for j, c in enumerate(cuts):
        ca, cb = c.segment
        if not any(segments_intersect(a, b, ca, cb) for a, b in segs):
            unvisited.append(j)
    if samples is None:
        samples = sample_points(P, per_side)
    invisible = []
    screen = None
    if not outside and samples:
        from .visibility import route_visibility_shape

        screen = route_visibility_shape(P, paths)
    for q in samples:
        if screen is not None:
            # decide clear cases on the float region, borderline ones exactly
            gap = screen.boundary.distance(SPoint(float(q.x), float(q.y))) if not screen.is_empty else 0.0
            if gap > SCREEN_MARGIN:
                if screen.contains(SPoint(float(q.x), float(q.y))):
                    continue
                invisible.append(q)
                continue
        if not any(point_sees_segment(P, q, a, b) for a, b in segs):
            invisible.append(q)
    passed = not unvisited and not invisible and not outside
    return CoverReport(passed, len(cuts), unvisited, len(samples), invisible, outside)


def route_l1_consistent(ctx: Context, sol: Solution) -> bool:
    """Reported L1 lengths equal the grid distances along each contact sequence."""
    return all(_tour_length(ctx, h) == r.length for h, r in zip(sol.contacts, sol.routes))
