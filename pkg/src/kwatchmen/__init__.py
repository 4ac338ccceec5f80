"""Anchored k-watchmen routes: exact and approximate min-max coverage tours in polygons."""

from .cuts import EssentialCutList, HananGrid, build_hanan_grid, compute_essential_cuts, contact_point, visibility_cuts
from .errors import InfeasibleError, InputError, WatchmenError
from .geometry import GeodesicPath, Point, Polygon, geodesic_distance, geodesic_shortest_path, validate_polygon
from .io import Instance, ResultRecord, load_corpus, parse_instance, run, serialize_instance
from .kwrp import Solution, brute_force_oracle, exact_dp, fptas, l2_wrapper, single_route_opt, verify_cover
from .quota import QuotaSolution, geodesic_disk, rmin_search, solve_quota
from .visibility import route_visible_area, visibility_polygon

__all__ = [
    "EssentialCutList", "GeodesicPath", "HananGrid", "InfeasibleError", "InputError", "Instance",
    "Point", "Polygon", "QuotaSolution", "ResultRecord", "Solution", "WatchmenError",
    "brute_force_oracle", "build_hanan_grid", "compute_essential_cuts", "contact_point",
    "exact_dp", "fptas", "geodesic_disk", "geodesic_distance", "geodesic_shortest_path",
    "l2_wrapper", "load_corpus", "parse_instance", "rmin_search", "route_visible_area", "run",
    "serialize_instance", "single_route_opt", "solve_quota", "validate_polygon", "verify_cover",
    "visibility_cuts", "visibility_polygon",
]
