from fractions import Fraction

import pytest
import shapely
from hypothesis import given
from shapely.geometry import Polygon as SPolygon

from conftest import L_VERTS, U_VERTS, orthogonal_instances
from kwatchmen.errors import (
    DegenerateCollinearRun,
    NonIntegerCoordinates,
    NotClosed,
    NotOrthogonal,
    PointOutsidePolygon,
    SelfIntersecting,
)
from kwatchmen.geometry import (
    Point,
    geodesic_distance,
    geodesic_shortest_path,
    locate,
    path_length,
    point_sees_point,
    polygon_area,
    segment_inside,
    signed_area,
    validate_polygon,
)
from oracles import lattice_distances


def test_areas(L, U, square):
    assert polygon_area(L) == 12
    assert polygon_area(U) == 30
    assert polygon_area(square) == 1


def test_reflex_vertices(L, U):
    assert L.reflex_vertices == (Point(2, 2),)
    assert set(U.reflex_vertices) == {Point(7, 2), Point(2, 2)}


def test_clockwise_input_is_reoriented():
    P = validate_polygon(list(reversed(L_VERTS)), require_orthogonal=True)
    assert signed_area(P.vertices) > 0
    assert polygon_area(P) == 12


def test_closing_vertex_is_dropped():
    P = validate_polygon(L_VERTS + [L_VERTS[0]], require_orthogonal=True)
    assert P.n == 6


@pytest.mark.parametrize(
    "verts, error",
    [
        ([(0, 0), (1, 0)], NotClosed),
        ([(0, 0), (2, 0), (0, 2), (2, 2)], SelfIntersecting),
        ([(0, 0), (2, 0), (1, 2)], NotOrthogonal),
        ([(0, 0), (Fraction(1, 2), 0), (Fraction(1, 2), 1), (0, 1)], NonIntegerCoordinates),
        ([(0, 0), (1, 0), (2, 0), (2, 1), (0, 1)], DegenerateCollinearRun),
        ([(0, 0), (2, 0), (2, 2), (2, 2), (0, 2)], DegenerateCollinearRun),
    ],
)
def test_rejects_bad_polygons(verts, error):
    with pytest.raises(error):
        validate_polygon(verts, require_orthogonal=True)


def test_general_polygon_allowed_without_orthogonal_flag():
    P = validate_polygon([(0, 0), (2, 0), (1, 2)])
    assert polygon_area(P) == 2
    assert not P.orthogonal


def test_locate(U):
    assert locate(U, Point(1, 1)) == 1
    assert locate(U, Point(4, 0)) == 0
    assert locate(U, Point(7, 3)) == 0
    assert locate(U, Point(4, 4)) == -1


def test_segment_inside(U):
    assert segment_inside(U, Point(0, 0), Point(9, 0))
    assert segment_inside(U, Point(1, 4), Point(1, 1))
    assert not segment_inside(U, Point(1, 4), Point(8, 4))
    # grazes the reflex vertex (2, 2) from inside
    assert segment_inside(U, Point(0, 4), Point(4, 0))


def test_point_sees_point_outside_raises(U):
    with pytest.raises(PointOutsidePolygon):
        point_sees_point(U, (4, 4), (1, 1))


def test_geodesic_through_both_reflex_vertices(U):
    path = geodesic_shortest_path(U, (1, 4), (8, 4))
    assert path.waypoints == (Point(1, 4), Point(2, 2), Point(7, 2), Point(8, 4))
    assert path.length == pytest.approx(2 * 5**0.5 + 5)
    assert path_length(path.waypoints, "L2") == pytest.approx(path.length)


def test_geodesic_l1_around_corner(L):
    assert geodesic_distance(L, (4, 0), (0, 4), "L1") == 8
    assert geodesic_distance(L, (4, 2), (2, 4), "L1") == 4


def test_geodesic_exact_for_rationals(U):
    d = geodesic_distance(U, (Fraction(1, 2), 4), (Fraction(17, 2), 4), "L1")
    assert isinstance(d, (int, Fraction))
    # legs to (2, 2), across to (7, 2), then up
    assert d == Fraction(7, 2) + 5 + Fraction(7, 2)


@given(orthogonal_instances())
def test_area_matches_shapely(inst):
    P, _ = inst
    assert float(polygon_area(P)) == pytest.approx(SPolygon(P.coords()).area)
    assert signed_area(P.vertices) > 0
    # orthogonal simple polygon: r = (n - 4) / 2
    assert len(P.reflex_vertices) == (P.n - 4) // 2


@given(orthogonal_instances(max_rects=3, size=6))
def test_l1_geodesic_matches_lattice_bfs(inst):
    P, s = inst
    dist = lattice_distances(tuple((int(p.x), int(p.y)) for p in P.vertices))
    for v in P.vertices:
        assert geodesic_distance(P, s, v, "L1") == dist[tuple(s)][(v.x, v.y)]
