import sys
from pathlib import Path

import pytest
import shapely
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st
from shapely.geometry import box
from shapely.ops import unary_union

from kwatchmen import load_corpus, validate_polygon
from kwatchmen.errors import InputError

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

L_VERTS = [(0, 0), (4, 0), (4, 2), (2, 2), (2, 4), (0, 4)]
U_VERTS = [(0, 0), (9, 0), (9, 5), (7, 5), (7, 2), (2, 2), (2, 5), (0, 5)]
SQUARE_VERTS = [(0, 0), (1, 0), (1, 1), (0, 1)]


@pytest.fixture(scope="session")
def L():
    return validate_polygon(L_VERTS, require_orthogonal=True)


@pytest.fixture(scope="session")
def U():
    return validate_polygon(U_VERTS, require_orthogonal=True)


@pytest.fixture(scope="session")
def square():
    return validate_polygon(SQUARE_VERTS, require_orthogonal=True)


@pytest.fixture(scope="session")
def corpus():
    return load_corpus()


def _boundary_lattice(P):
    pts = []
    for a, b in P.edges:
        if a.x == b.x:
            lo, hi = sorted((a.y, b.y))
            pts += [(a.x, y) for y in range(lo, hi)]
        else:
            lo, hi = sorted((a.x, b.x))
            pts += [(x, a.y) for x in range(lo, hi)]
    return sorted(set(pts))


@st.composite
def orthogonal_instances(draw, max_rects=4, size=7):
    """Union of random lattice rectangles, kept when it is a simple polygon,
    plus a start point on its boundary."""
    rects = []
    for _ in range(draw(st.integers(1, max_rects))):
        x0 = draw(st.integers(0, size - 1))
        y0 = draw(st.integers(0, size - 1))
        rects.append((x0, y0, draw(st.integers(x0 + 1, size)), draw(st.integers(y0 + 1, size))))
    g = unary_union([box(*r) for r in rects])
    if g.geom_type != "Polygon" or g.interiors:
        from hypothesis import assume

        assume(False)
    g = shapely.simplify(g, 0)
    try:
        P = validate_polygon([(int(x), int(y)) for x, y in list(g.exterior.coords)[:-1]], require_orthogonal=True)
    except InputError:
        from hypothesis import assume

        assume(False)
    s = draw(st.sampled_from(_boundary_lattice(P)))
    return P, s
