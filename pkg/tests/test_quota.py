import math

import pytest
import shapely
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import orthogonal_instances
from kwatchmen.errors import BudgetInfeasible, QuotaExceedsArea
from kwatchmen.geometry import GeodesicPath, Point, make_path, polygon_area, segment_inside
from kwatchmen.quota import (
    apexes,
    assemble_routes,
    budget_binary_search,
    budget_route,
    budget_values,
    disk_visible_area,
    eps_prime,
    geodesic_disk,
    geodesic_radius,
    rmin_search,
    solve_quota,
    split_route,
)
from kwatchmen.visibility import route_visible_area


@pytest.fixture(scope="module")
def u_runs(U):
    return {mode: solve_quota(U, (4, 0), 2, 30.0, 0.25, mode) for mode in ("double", "oneplus")}


def test_apexes_are_start_and_reflex(U):
    pts = {a.point for a in apexes(U, Point(4, 0))}
    assert pts == {Point(4, 0), Point(2, 2), Point(7, 2)}
    d = {a.point: a.distance for a in apexes(U, Point(4, 0))}
    assert d[Point(2, 2)] == pytest.approx(math.sqrt(8))
    assert d[Point(7, 2)] == pytest.approx(math.sqrt(13))


def test_square_disk_is_quarter_circle(square):
    disk = geodesic_disk(square, (0, 0), 1)
    assert disk.area == pytest.approx(math.pi / 4, rel=1e-3)
    assert len(disk.arcs()) == 1
    assert disk.perimeter == pytest.approx(2 + math.pi / 2, rel=1e-3)


def test_disk_bends_round_reflex_vertex(U):
    disk = geodesic_disk(U, (4, 0), 3)
    assert disk.shape.covers(shapely.Point(7, 0))
    assert not disk.shape.covers(shapely.Point(0, 5))
    # past the reflex vertex (2, 2) the disk continues with radius 3 - sqrt(8)
    assert disk.shape.covers(shapely.Point(1.9, 2.1))


def test_full_radius_disk_is_polygon(U):
    R = geodesic_radius(U, Point(4, 0))
    assert geodesic_disk(U, (4, 0), R).area == pytest.approx(30.0, rel=1e-3)


def test_disk_area_monotone(U):
    areas = [geodesic_disk(U, (4, 0), r).area for r in (0.5, 1, 2, 3, 4, 6)]
    assert areas == sorted(areas)
    vis = [disk_visible_area(U, (4, 0), r) for r in (0, 1, 2, 3)]
    assert all(b >= a - 1e-6 for a, b in zip(vis, vis[1:]))
    assert vis[0] == pytest.approx(64 / 3)


def test_negative_radius(U):
    with pytest.raises(ValueError):
        geodesic_disk(U, (4, 0), -1)


def test_rmin(U):
    assert rmin_search(U, (4, 0), 20.0) == 0.0
    r = rmin_search(U, (4, 0), 30.0)
    assert 2.9 < r < 3.1
    assert disk_visible_area(U, (4, 0), r) >= 30 * (1 - 1e-3)
    assert disk_visible_area(U, (4, 0), r * 0.99) < 30 * (1 - 1e-3)


def test_quota_exceeds_area(U):
    with pytest.raises(QuotaExceedsArea):
        rmin_search(U, (4, 0), 31.0)
    with pytest.raises(QuotaExceedsArea):
        solve_quota(U, (4, 0), 2, 31.0, 0.5)


def test_budget_zero_stays_home(U):
    res = budget_route(U, (4, 0), 3, 0.0, 0.25)
    assert res.route.waypoints == (Point(4, 0),)
    assert res.area == pytest.approx(64 / 3)


def test_budget_route_sees_most_of_u(U):
    res = budget_route(U, (4, 0), 3, 10.0, 0.25)
    assert res.route.length <= 10 * 1.25 + 1e-9
    assert res.route.waypoints[0] == res.route.waypoints[-1]
    # a competitor of length 6 already reaches (7, 0) and sees 30 - 4
    competitor = route_visible_area(U, [[(4, 0), (7, 0), (4, 0)]])
    assert competitor == pytest.approx(26.0)
    assert res.area >= competitor - 1e-6


def test_budget_values():
    vals = budget_values(8, 1.0, 0.5)
    assert vals[0] == 0 and vals[-1] == pytest.approx(72.0)
    assert len(vals) == 145
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_budget_binary_search(U):
    r_min = rmin_search(U, (4, 0), 30.0)
    found = budget_binary_search(U, (4, 0), r_min, 0.25, 30.0, r_min)
    assert r_min <= found.budget <= 9 * U.n * r_min
    assert found.route.area >= 30 * (1 - 1e-3)
    below = [b for b, a in found.evaluated.items() if b < found.budget]
    assert all(found.evaluated[b] < 30 * (1 - 1e-3) for b in below) or found.linear_scan


def test_budget_search_infeasible(U):
    with pytest.raises(BudgetInfeasible):
        # a tiny r_min caps every budget far below any covering tour
        budget_binary_search(U, (4, 0), 3.0, 0.5, 30.0, 0.01)


def test_eps_prime():
    assert eps_prime(0.25, "double") == pytest.approx(1 + 0.0625)
    assert eps_prime(0.25, "oneplus") == pytest.approx(1 + 0.125)
    with pytest.raises(ValueError):
        eps_prime(0.25, "triple")


def test_split_route_equal_parts():
    path = make_path([Point(0, 0), Point(4, 0), Point(4, 2), Point(0, 2), Point(0, 0)], "L2")
    parts = split_route(path, 3)
    assert len(parts) == 3
    lens = [sum(math.hypot(b.x - a.x, b.y - a.y) for a, b in zip(p, p[1:])) for p in parts]
    assert lens == pytest.approx([4, 4, 4])
    assert parts[0][0] == Point(0, 0) and parts[-1][-1] == Point(0, 0)
    assert parts[1][0] == parts[0][-1]


def test_split_zero_route():
    assert split_route(GeodesicPath((Point(1, 1),), 0.0, "L2"), 2) == [(Point(1, 1),)] * 2


@settings(max_examples=30)
@given(st.integers(1, 5), st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5)), min_size=1, max_size=6))
def test_split_preserves_length(k, pts):
    wps = [Point(0, 0), *(Point(x, y) for x, y in pts), Point(0, 0)]
    path = make_path(wps, "L2")
    parts = split_route(path, k)
    total = sum(sum(math.hypot(b.x - a.x, b.y - a.y) for a, b in zip(p, p[1:])) for p in parts)
    assert total == pytest.approx(float(path.length), abs=1e-9)


def test_assembled_routes_are_anchored(U):
    tour = make_path([Point(4, 0), Point(7, 0), Point(7, 1), Point(2, 1), Point(2, 0), Point(4, 0)], "L2")
    routes = assemble_routes(U, Point(4, 0), tour, 2)
    for r in routes:
        assert r.waypoints[0] == Point(4, 0) and r.waypoints[-1] == Point(4, 0)
        assert all(segment_inside(U, a, b) for a, b in zip(r.waypoints, r.waypoints[1:]))
    assert max(r.length for r in routes) <= float(tour.length) / 2 + 2 * 3.0


def test_trivial_quota(U, L):
    sol = solve_quota(U, (4, 0), 3, 20.0, 0.5)
    assert sol.max_length == 0 and len(sol.routes) == 3
    assert all(r.waypoints == (Point(4, 0),) for r in sol.routes)
    assert sol.achieved_area == pytest.approx(64 / 3)
    assert solve_quota(L, (0, 0), 2, 12.0, 0.5).max_length == 0


def test_full_quota_u(u_runs):
    for mode, sol in u_runs.items():
        bound = (3 if mode == "double" else 2) + sol.eps_prime
        assert sol.achieved_area >= 30 * (1 - 1e-3)
        assert sol.max_length <= bound * 6
        assert sol.max_length <= sol.assembly_bound + 1e-9
        assert len(sol.routes) == 2
        assert sol.factor_mode == {"double": "double_3eps", "oneplus": "oneplus_2eps"}[mode]
        assert sol.r_min <= sol.budget_used <= 9 * 8 * sol.r_min


def test_perimeter_bound(u_runs):
    for sol in u_runs.values():
        assert sol.disks
        for r, perim in sol.disks:
            assert perim + 2 * r <= 9 * 8 * r


@settings(max_examples=15)
@given(orthogonal_instances(max_rects=3, size=6), st.floats(0.2, 4.0))
def test_perimeter_bound_random(inst, r):
    P, s = inst
    disk = geodesic_disk(P, s, r)
    assert disk.perimeter + 2 * r <= 9 * P.n * r
    assert disk.area <= float(polygon_area(P)) + 1e-6
    # geodesic distance is at least Euclidean distance; slack covers the two
    # polygonal circle approximations
    assert disk.shape.difference(shapely.Point(*s).buffer(r, quad_segs=64)).area <= 1e-5 * r * r
