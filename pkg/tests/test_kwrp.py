from fractions import Fraction

import pytest
from hypothesis import given, settings

from conftest import orthogonal_instances
from kwatchmen.errors import InstanceTooLarge
from kwatchmen.geometry import Point, path_length, segment_inside
from kwatchmen.kwrp import (
    brute_force_oracle,
    exact_dp,
    fptas,
    l2_wrapper,
    prepare,
    route_l1_consistent,
    single_route_opt,
    verify_cover,
)
from oracles import min_max_tours

# max route length for k = 1, 2, 3 from a lattice-BFS Held-Karp search over
# every assignment of cuts and every lattice touch point (tests/oracles.py)
FROZEN = {
    "comb3": (36, 24, 24),
    "comb4": (48, 26, 20),
    "comb5": (62, 34, 26),
    "double_comb": (80, 54, 42),
    "h_shape": (10, 10, 10),
    "l_corner": (0, 0, 0),
    "l_shape": (4, 4, 4),
    "plus": (4, 4, 4),
    "spiral": (60, 60, 60),
    "square": (0, 0, 0),
    "square_corner": (0, 0, 0),
    "staircase": (8, 8, 8),
    "tee": (8, 8, 8),
    "u_shape": (10, 6, 6),
    "zigzag": (10, 10, 10),
}


def test_single_route_examples(square, L, U):
    assert single_route_opt(square, (0, 0))[0] == 0
    length, route = single_route_opt(L, (4, 0))
    assert length == 4
    assert route.waypoints == (Point(4, 0), Point(2, 0), Point(4, 0))
    assert single_route_opt(U, (4, 0))[0] == 10


def test_exact_examples(square, L, U):
    sol = exact_dp(square, (0, 0), 3)
    assert sol.max_length == 0 and len(sol.routes) == 3
    assert all(r.waypoints == (Point(0, 0),) for r in sol.routes)
    assert exact_dp(L, (4, 0), 2).max_length == 4
    assert exact_dp(L, (0, 0), 1).max_length == 0
    sol = exact_dp(U, (4, 0), 2)
    assert sol.max_length == 6
    assert sorted(r.waypoints for r in sol.routes) == [
        (Point(4, 0), Point(2, 0), Point(4, 0)),
        (Point(4, 0), Point(7, 0), Point(4, 0)),
    ]
    assert sorted(sol.per_route_lengths) == [4, 6]
    assert exact_dp(U, (4, 0), 1).max_length == 10


def test_fptas_examples(square, U):
    assert fptas(square, (0, 0), 2, 0.5).max_length == 0
    sol = fptas(U, (4, 0), 2, 0.5)
    assert sol.max_length <= 9
    assert verify_cover(U, (4, 0), sol.routes).passed
    assert fptas(U, (4, 0), 1, 0.1).max_length <= 11


def test_fptas_interval_width(U):
    sol = fptas(U, (4, 0), 2, Fraction(1, 2))
    # ceil(n k / eps) = ceil(8 * 2 * 2) intervals over L = 10
    assert sol.stats["intervals"] == 32
    assert sol.stats["interval_width"] == Fraction(10, 32)


def test_l2_examples(square, L, U):
    assert l2_wrapper(square, (0, 0), 1, 0.1).max_length == 0
    sol = l2_wrapper(U, (4, 0), 2, 0.1)
    assert sol.metric == "L2"
    assert sol.max_length == pytest.approx(6.0)
    assert sol.stats["l1_max_length"] == 6
    assert sol.max_length <= (2**0.5 + 0.1) * 6
    assert l2_wrapper(L, (4, 0), 1, 0.1).max_length == pytest.approx(4.0)


def test_oracle_examples(square, U):
    assert brute_force_oracle(square, (0, 0), 2).max_length == 0
    assert brute_force_oracle(U, (4, 0), 2).max_length == 6
    assert brute_force_oracle(U, (4, 0), 1).max_length == 10


def test_oracle_size_limit(corpus):
    inst = next(i for i in corpus if i.name == "double_comb")
    with pytest.raises(InstanceTooLarge):
        brute_force_oracle(inst.polygon, inst.start, 2, max_cuts=7)
    with pytest.raises(InstanceTooLarge):
        brute_force_oracle(inst.polygon, inst.start, 4)


def test_state_budget(corpus):
    inst = next(i for i in corpus if i.name == "double_comb")
    with pytest.raises(InstanceTooLarge):
        exact_dp(inst.polygon, inst.start, 3, budget=50)


def test_bad_arguments(U):
    with pytest.raises(ValueError):
        exact_dp(U, (4, 0), 0)
    with pytest.raises(ValueError):
        fptas(U, (4, 0), 1, 0)


def test_verify_cover_examples(square, U):
    assert verify_cover(square, (0, 0), [[(0, 0)]]).passed
    assert verify_cover(U, (4, 0), exact_dp(U, (4, 0), 2).routes).passed
    report = verify_cover(U, (4, 0), [[(4, 0)]])
    assert not report.passed
    assert report.unvisited_cuts == [0, 1]
    assert report.invisible_samples


def test_verify_cover_flags_routes_leaving_polygon(U):
    report = verify_cover(U, (4, 0), [[(4, 0), (4, 3), (4, 0)]])
    assert not report.passed
    assert report.outside_segments


@pytest.mark.parametrize("name", sorted(FROZEN))
def test_corpus_values(corpus, name):
    inst = next(i for i in corpus if i.name == name)
    P, s = inst.polygon, inst.start
    ctx = prepare(P, s)
    L = single_route_opt(P, s, ctx)[0]
    prev = None
    for k, expected in zip((1, 2, 3), FROZEN[name]):
        sol = exact_dp(P, s, k, ctx)
        assert sol.max_length == expected
        assert sol.max_length == max(sol.per_route_lengths)
        assert route_l1_consistent(ctx, sol)
        assert Fraction(L, k) <= sol.max_length <= L
        if prev is not None:
            assert sol.max_length <= prev
        prev = sol.max_length
        for r in sol.routes:
            assert r.waypoints[0] == s == r.waypoints[-1]
            assert path_length(r.waypoints, "L1") == r.length
            assert all(segment_inside(P, a, b) for a, b in zip(r.waypoints, r.waypoints[1:]))
    assert exact_dp(P, s, 1, ctx).max_length == L


@settings(max_examples=25)
@given(orthogonal_instances(max_rects=4, size=6))
def test_exact_matches_lattice_oracle(inst):
    P, s = inst
    ctx = prepare(P, s)
    cuts = [((c.reflex_vertex.x, c.reflex_vertex.y), (c.far_endpoint.x, c.far_endpoint.y)) for c in ctx.cuts]
    verts = [(p.x, p.y) for p in P.vertices]
    for k in (1, 2):
        assert exact_dp(P, s, k, ctx).max_length == min_max_tours(verts, s, cuts, k)


@settings(max_examples=25)
@given(orthogonal_instances(max_rects=4, size=6))
def test_solutions_cover(inst):
    P, s = inst
    ctx = prepare(P, s)
    for k in (1, 2):
        sol = exact_dp(P, s, k, ctx)
        assert verify_cover(P, s, sol.routes, per_side=8).passed
        f = fptas(P, s, k, Fraction(1, 2), ctx)
        assert sol.max_length <= f.max_length <= Fraction(3, 2) * sol.max_length


def test_deterministic(U):
    a = exact_dp(U, (4, 0), 3)
    b = exact_dp(U, (4, 0), 3)
    assert [r.waypoints for r in a.routes] == [r.waypoints for r in b.routes]
