"""Independent reference computations used by the tests.

Nothing here touches the Hanan grid, contact points or boundary order: L1
geodesics come from BFS on the unit lattice inside P, and tours from a
Held-Karp search over arbitrary lattice points on the cuts.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import networkx as nx
import shapely
from shapely.geometry import LineString
from shapely.geometry import Polygon as SPolygon


def lattice_graph(vertices) -> nx.Graph:
    poly = SPolygon([(float(x), float(y)) for x, y in vertices])
    x0, y0, x1, y1 = (int(round(c)) for c in poly.bounds)
    g = nx.Graph()
    for x in range(x0, x1 + 1):
        for y in range(y0, y1 + 1):
            if poly.covers(shapely.Point(x, y)):
                g.add_node((x, y))
    for x, y in list(g.nodes):
        for nx_, ny_ in ((x + 1, y), (x, y + 1)):
            if (nx_, ny_) in g and poly.covers(LineString([(x, y), (nx_, ny_)])):
                g.add_edge((x, y), (nx_, ny_))
    return g


@lru_cache(maxsize=None)
def lattice_distances(vertices: tuple) -> dict:
    return dict(nx.all_pairs_shortest_path_length(lattice_graph(vertices)))


def cut_lattice_points(cut) -> list[tuple[int, int]]:
    (ax, ay), (bx, by) = cut
    if ax == bx:
        return [(ax, y) for y in range(min(ay, by), max(ay, by) + 1)]
    return [(x, ay) for x in range(min(ax, bx), max(ax, bx) + 1)]


def subset_tour(dist: dict, s: tuple, cuts: list) -> int:
    """Shortest closed lattice walk from s touching every cut, any order."""
    if not cuts:
        return 0
    pts = [cut_lattice_points(c) for c in cuts]
    m = len(cuts)
    # best[mask][point] = shortest walk from s touching cuts in mask, ending at point
    best: dict[tuple[int, tuple], int] = {}
    for j in range(m):
        for p in pts[j]:
            key = (1 << j, p)
            best[key] = min(best.get(key, 1 << 60), dist[s][p])
    for mask in range(1, 1 << m):
        ends = [(p, v) for (mk, p), v in best.items() if mk == mask]
        for p, v in ends:
            for j in range(m):
                if mask >> j & 1:
                    continue
                # a point may already lie on cut j
                for q in pts[j]:
                    key = (mask | 1 << j, q)
                    nv = v + dist[p][q]
                    if nv < best.get(key, 1 << 60):
                        best[key] = nv
    full = (1 << m) - 1
    # touching several cuts at one point is covered: dist[p][p] == 0
    return min(v + dist[p][s] for (mk, p), v in best.items() if mk == full)


def min_max_tours(vertices, s, cuts, k: int) -> int:
    """Min over assignments of cuts to k watchmen of the longest subset tour."""
    dist = lattice_distances(tuple(map(tuple, vertices)))
    s = tuple(s)
    m = len(cuts)
    cost = {}
    for mask in range(1 << m):
        cost[mask] = subset_tour(dist, s, [cuts[j] for j in range(m) if mask >> j & 1])
    best = None
    for assign in itertools.product(range(k), repeat=m):
        masks = [0] * k
        for j, w in enumerate(assign):
            masks[w] |= 1 << j
        v = max(cost[mk] for mk in masks)
        best = v if best is None else min(best, v)
    return best
