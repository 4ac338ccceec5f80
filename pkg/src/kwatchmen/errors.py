"""Exception hierarchy. Every error carries a machine-readable ``code``."""

from __future__ import annotations


class WatchmenError(Exception):
    code = "error"
    # exit status used by the CLI
    exit_status = 4


class InputError(WatchmenError):
    code = "input_error"


class SelfIntersecting(InputError):
    code = "self_intersecting"


class NotClosed(InputError):
    code = "not_closed"


class NotOrthogonal(InputError):
    code = "not_orthogonal"


class NonIntegerCoordinates(InputError):
    code = "non_integer_coordinates"


class DegenerateCollinearRun(InputError):
    code = "degenerate_collinear_run"


class PointOutsidePolygon(InputError):
    code = "point_outside_polygon"


class SourceOutsidePolygon(PointOutsidePolygon):
    code = "source_outside_polygon"


class RouteOutsidePolygon(PointOutsidePolygon):
    code = "route_outside_polygon"


class RegionOutsidePolygon(PointOutsidePolygon):
    code = "region_outside_polygon"


class StartNotOnBoundary(InputError):
    code = "start_not_on_boundary"


class ParseError(InputError):
    code = "parse_error"


class SchemaError(InputError):
    code = "schema_error"


class InfeasibleError(WatchmenError):
    code = "infeasible"
    exit_status = 3


class InstanceTooLarge(InfeasibleError):
    code = "instance_too_large"


class QuotaExceedsArea(InfeasibleError):
    code = "quota_exceeds_area"


class BudgetInfeasible(InfeasibleError):
    code = "budget_infeasible"
