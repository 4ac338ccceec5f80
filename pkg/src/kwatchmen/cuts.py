"""Essential cuts and the Hanan grid of an orthogonal polygon anchored at s."""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .errors import NotOrthogonal, StartNotOnBoundary
from .geometry import (
    Number,
    Point,
    Polygon,
    as_point,
    div,
    l1_length,
    locate,
    on_segment,
    orient,
)


class BoundaryWalk:
    """Counterclockwise arclength along the boundary, measured from s."""

    def __init__(self, P: Polygon, s: Point):
        self.P = P
        self.s = s
        edges = P.edges
        start = None
        for i, (a, b) in enumerate(edges):
            if on_segment(s, a, b) and s != b:
                start = i
                break
        if start is None:
            raise StartNotOnBoundary(f"start {s} is not on the polygon boundary")
        self.start_edge = start
        n = P.n
        # offset[i] = walk length from s to the first vertex of edge (start + i)
        self.order = [(start + i) % n for i in range(n)]
        self.offset: dict[int, Number] = {}
        acc: Number = -l1_length(edges[start][0], s)
        for i in self.order:
            self.offset[i] = acc
            acc += l1_length(*edges[i])
        self.total = P.perimeter_l1

    def param(self, q: Point) -> Number:
        """Walk length from s to q, in [0, total)."""
        if q == self.s:
            return 0
        best = None
        for i in self.order:
            a, b = self.P.edges[i]
            if on_segment(q, a, b):
                t = self.offset[i] + l1_length(a, q)
                if t < 0:
                    t += self.total
                if t >= self.total:
                    t -= self.total
                if best is None or t < best:
                    best = t
        if best is None:
            raise StartNotOnBoundary(f"{q} is not on the boundary")
        return best

    def vertices_between(self, t0: Number, t1: Number) -> list[Point]:
        """Polygon vertices strictly inside the walk interval (t0, t1)."""
        out = []
        for i in self.order:
            v = self.P.edges[i][0]
            t = self.offset[i]
            if t < 0:
                t += self.total
            if t0 < t < t1:
                out.append((t, v))
        out.sort(key=lambda tv: tv[0])
        return [v for _, v in out]


@dataclass(frozen=True)
class Cut:
    reflex_vertex: Point
    far_endpoint: Point
    axis: str  # "horizontal" | "vertical"
    pocket: Polygon
    boundary_index: int
    # walk interval of the pocket's boundary chain
    interval: tuple[Number, Number]

    @property
    def segment(self) -> tuple[Point, Point]:
        return self.reflex_vertex, self.far_endpoint

    def contains(self, p: Point) -> bool:
        return on_segment(p, self.reflex_vertex, self.far_endpoint)


@dataclass(frozen=True)
class EssentialCutList:
    cuts: tuple[Cut, ...]
    s: Point

    @property
    def m(self) -> int:
        return len(self.cuts)

    def __iter__(self):
        return iter(self.cuts)

    def __len__(self) -> int:
        return len(self.cuts)

    def __getitem__(self, i):
        return self.cuts[i]

    def without(self, index: int) -> "EssentialCutList":
        return EssentialCutList(self.cuts[:index] + self.cuts[index + 1 :], self.s)


def _sign(v: Number) -> int:
    return (v > 0) - (v < 0)


def _ray_hit(P: Polygon, v: Point, d: tuple[int, int]) -> Point:
    """First boundary point hit by the ray from v in axis direction d."""
    best_t = None
    for a, b in P.edges:
        if d[0]:
            # horizontal ray along y = v.y
            if a.y == b.y:
                if a.y != v.y:
                    continue
                cands = [a.x, b.x]
            else:
                if not (min(a.y, b.y) <= v.y <= max(a.y, b.y)):
                    continue
                cands = [a.x]
            for x in cands:
                t = (x - v.x) * d[0]
                if t > 0 and (best_t is None or t < best_t):
                    best_t = t
        else:
            if a.x == b.x:
                if a.x != v.x:
                    continue
                cands = [a.y, b.y]
            else:
                if not (min(a.x, b.x) <= v.x <= max(a.x, b.x)):
                    continue
                cands = [a.y]
            for y in cands:
                t = (y - v.y) * d[1]
                if t > 0 and (best_t is None or t < best_t):
                    best_t = t
    assert best_t is not None, "ray from a reflex vertex must hit the boundary"
    return Point(v.x + d[0] * best_t, v.y + d[1] * best_t)


def _strip_collinear(pts: Sequence[Point]) -> tuple[Point, ...]:
    out = list(pts)
    changed = True
    while changed and len(out) > 3:
        changed = False
        for i in range(len(out)):
            a, b, c = out[i - 1], out[i], out[(i + 1) % len(out)]
            if a == b or orient(a, b, c) == 0:
                del out[i]
                changed = True
                break
    return tuple(out)


def _require_orthogonal(P: Polygon) -> None:
    if not P.orthogonal or not P.exact:
        raise NotOrthogonal("cuts are defined for orthogonal polygons with exact coordinates")


def visibility_cuts(P: Polygon, s) -> list[Cut]:
    """All visibility cuts with respect to s, unordered, deduplicated."""
    _require_orthogonal(P)
    s = as_point(s)
    if locate(P, s) != 0:
        raise StartNotOnBoundary(f"start {s} is not on the polygon boundary")
    walk = BoundaryWalk(P, s)
    vs = P.vertices
    n = P.n
    found: dict[tuple, Cut] = {}
    for i in P.reflex_indices:
        v, prev, nxt = vs[i], vs[i - 1], vs[(i + 1) % n]
        # extension of the incoming edge: pocket is the side holding that edge,
        # i.e. the chain from the far endpoint forward to v
        d_in = (_sign(v.x - prev.x), _sign(v.y - prev.y))
        # extension of the outgoing edge backwards: pocket chain runs v -> far
        d_out = (_sign(v.x - nxt.x), _sign(v.y - nxt.y))
        for d, incoming in ((d_in, True), (d_out, False)):
            w = _ray_hit(P, v, d)
            if on_segment(s, v, w):
                # every anchored route already touches this cut at s
                continue
            lo, hi = (w, v) if incoming else (v, w)
            t0, t1 = walk.param(lo), walk.param(hi)
            if t0 >= t1:
                # s lies strictly inside the pocket chain
                continue
            chain = [lo] + walk.vertices_between(t0, t1) + [hi]
            pocket = Polygon(_strip_collinear(chain), orthogonal=True)
            axis = "horizontal" if d[0] else "vertical"
            key = (min(v, w), max(v, w), t0, t1)
            if key not in found:
                found[key] = Cut(v, w, axis, pocket, -1, (t0, t1))
    return list(found.values())


def compute_essential_cuts(P: Polygon, s) -> EssentialCutList:
    """Visibility cuts whose pockets contain no other pocket, in boundary order from s.

    Pockets are compared through their boundary chains: one pocket contains
    another iff its walk interval contains the other's.
    """
    s = as_point(s)
    cuts = visibility_cuts(P, s)
    essential = []
    for c in cuts:
        a0, a1 = c.interval
        nested = any(
            o is not c and a0 <= o.interval[0] and o.interval[1] <= a1 and o.interval != c.interval
            for o in cuts
        )
        if not nested:
            essential.append(c)
    # walk clockwise from s: the first pocket point met is the chain's ccw end
    essential.sort(key=lambda c: (-c.interval[1], -c.interval[0], c.reflex_vertex, c.far_endpoint))
    ordered = tuple(
        Cut(c.reflex_vertex, c.far_endpoint, c.axis, c.pocket, j + 1, c.interval)
        for j, c in enumerate(essential)
    )
    return EssentialCutList(ordered, s)


# ---------------------------------------------------------------------------
# Hanan grid


def _line_components(P: Polygon, horizontal: bool, c: Number) -> list[tuple[Number, Number]]:
    """Maximal closed intervals of the axis line (y = c or x = c) inside P."""
    cuts = set()
    for a, b in P.edges:
        if horizontal:
            if a.y == b.y == c:
                cuts.update((a.x, b.x))
            elif a.y != b.y and min(a.y, b.y) <= c <= max(a.y, b.y):
                cuts.add(a.x)
        else:
            if a.x == b.x == c:
                cuts.update((a.y, b.y))
            elif a.x != b.x and min(a.x, b.x) <= c <= max(a.x, b.x):
                cuts.add(a.y)
    xs = sorted(cuts)
    comps: list[list[Number]] = []
    for u, w in zip(xs, xs[1:]):
        m = div(u + w, 2)
        q = Point(m, c) if horizontal else Point(c, m)
        if locate(P, q) >= 0:
            if comps and comps[-1][1] == u:
                comps[-1][1] = w
            else:
                comps.append([u, w])
    return [(u, w) for u, w in comps]


def _component_containing(comps, lo: Number, hi: Number) -> tuple[Number, Number]:
    for u, w in comps:
        if u <= lo and hi <= w:
            return u, w
    raise AssertionError("edge not inside its own line component")


@dataclass(frozen=True)
class GridSegment:
    horizontal: bool
    coord: Number  # y for horizontal, x for vertical
    lo: Number
    hi: Number

    def contains(self, p: Point) -> bool:
        if self.horizontal:
            return p.y == self.coord and self.lo <= p.x <= self.hi
        return p.x == self.coord and self.lo <= p.y <= self.hi


class Contact(NamedTuple):
    node: int
    point: Point
    distance: Number


@dataclass
class HananGrid:
    """Grid graph inside P with geodesic L1 distances from the key nodes.

    ``dist[u]`` is filled for every key node u (s and every node on a cut);
    with ``full_apsp`` it is filled for every node.
    """

    P: Polygon
    s: Point
    segments: list[GridSegment]
    nodes: list[Point]
    index: dict[Point, int]
    adj: list[list[tuple[int, Number]]]
    cut_incidence: list[list[int]]
    cuts: EssentialCutList
    s_node: int
    dist: dict[int, list[Number]] = field(default_factory=dict)
    pred: dict[int, list[int]] = field(default_factory=dict)

    def node(self, p) -> int:
        return self.index[as_point(p)]

    def distance(self, u: int, v: int) -> Number:
        if u in self.dist:
            return self.dist[u][v]
        if v in self.dist:
            return self.dist[v][u]
        self._search(u)
        return self.dist[u][v]

    # name used by the DP
    apsp = distance

    def _search(self, src: int) -> None:
        n = len(self.nodes)
        dist: list = [None] * n
        pred = [-1] * n
        dist[src] = 0
        heap = [(0, src)]
        while heap:
            d, u = heapq.heappop(heap)
            if d != dist[u]:
                continue
            for v, w in self.adj[u]:
                nd = d + w
                if dist[v] is None or nd < dist[v]:
                    dist[v] = nd
                    pred[v] = u
                    heapq.heappush(heap, (nd, v))
        self.dist[src] = dist
        self.pred[src] = pred

    def path(self, u: int, v: int) -> list[Point]:
        """Grid shortest path from node u to node v, collinear nodes removed."""
        if u == v:
            return [self.nodes[u]]
        if u not in self.pred and v in self.pred:
            return list(reversed(self.path(v, u)))
        if u not in self.pred:
            self._search(u)
        pred = self.pred[u]
        chain = [v]
        while chain[-1] != u:
            chain.append(pred[chain[-1]])
        pts = [self.nodes[i] for i in reversed(chain)]
        out = [pts[0]]
        for i in range(1, len(pts) - 1):
            if orient(out[-1], pts[i], pts[i + 1]) != 0:
                out.append(pts[i])
        out.append(pts[-1])
        return out

    def nodes_on_cut(self, j: int) -> list[int]:
        return self.cut_incidence[j]

    def key_nodes(self) -> list[int]:
        keys = {self.s_node}
        for inc in self.cut_incidence:
            keys.update(inc)
        return sorted(keys)


def build_hanan_grid(P: Polygon, s, cuts: EssentialCutList | None = None, full_apsp: bool = False) -> HananGrid:
    _require_orthogonal(P)
    s = as_point(s)
    if cuts is None:
        cuts = compute_essential_cuts(P, s)
    segs: set[GridSegment] = set()
    for a, b in P.edges:
        horizontal = a.y == b.y
        if horizontal:
            lo, hi = _component_containing(_line_components(P, True, a.y), min(a.x, b.x), max(a.x, b.x))
            segs.add(GridSegment(True, a.y, lo, hi))
        else:
            lo, hi = _component_containing(_line_components(P, False, a.x), min(a.y, b.y), max(a.y, b.y))
            segs.add(GridSegment(False, a.x, lo, hi))
    lo, hi = _component_containing(_line_components(P, True, s.y), s.x, s.x)
    segs.add(GridSegment(True, s.y, lo, hi))
    lo, hi = _component_containing(_line_components(P, False, s.x), s.y, s.y)
    segs.add(GridSegment(False, s.x, lo, hi))
    segments = sorted(segs, key=lambda g: (not g.horizontal, g.coord, g.lo))
    hs = [g for g in segments if g.horizontal]
    vs = [g for g in segments if not g.horizontal]
    pts = set()
    for h in hs:
        for v in vs:
            if h.lo <= v.coord <= h.hi and v.lo <= h.coord <= v.hi:
                pts.add(Point(v.coord, h.coord))
    nodes = sorted(pts)
    index = {p: i for i, p in enumerate(nodes)}
    adj: list[list[tuple[int, Number]]] = [[] for _ in nodes]
    for g in segments:
        on = sorted((p for p in nodes if g.contains(p)), key=lambda p: p.x if g.horizontal else p.y)
        for p, q in zip(on, on[1:]):
            w = l1_length(p, q)
            adj[index[p]].append((index[q], w))
            adj[index[q]].append((index[p], w))
    for lst in adj:
        lst.sort()
    incidence = [[index[p] for p in nodes if c.contains(p)] for c in cuts]
    grid = HananGrid(P, s, segments, nodes, index, adj, incidence, cuts, index[s])
    sources = range(len(nodes)) if full_apsp else grid.key_nodes()
    for u in sources:
        grid._search(u)
    return grid


def contact_point(grid: HananGrid, source: int, cut: int | Cut) -> Contact:
    """Node of the cut nearest to ``source`` in geodesic L1 distance.

    Ties go to the node nearer the cut's reflex vertex, then to the smaller id.
    """
    j = cut if isinstance(cut, int) else grid.cuts.cuts.index(cut)
    c = grid.cuts[j]
    best = None
    for u in grid.cut_incidence[j]:
        d = grid.distance(source, u)
        key = (d, l1_length(grid.nodes[u], c.reflex_vertex), u)
        if best is None or key < best:
            best = key
    d, _, u = best
    return Contact(u, grid.nodes[u], d)
