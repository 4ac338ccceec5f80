"""Instance parsing, result records and solver dispatch."""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field, replace
from decimal import Decimal
from fractions import Fraction
from importlib import resources
from typing import Any

from .errors import ParseError, SchemaError, StartNotOnBoundary
from .geometry import (
    TAU_GEOM,
    GeodesicPath,
    Number,
    Point,
    Polygon,
    as_number,
    as_point,
    locate,
    path_length,
    polygon_area,
    segment_inside,
    validate_polygon,
)

MODES = ("exact", "fptas", "l2", "quota", "oracle")
FACTOR_MODES = ("double", "oneplus")
NEEDS_EPSILON = {"fptas", "l2", "quota"}
# keys whose values vary run to run
TIMING_KEYS = {"wall_time", "time"}


@dataclass(frozen=True)
class Instance:
    vertices: tuple[Point, ...]
    start: Point
    k: int
    mode: str
    epsilon: Number | None = None
    quota_fraction: Number | None = None
    factor_mode: str | None = None
    name: str | None = None

    @property
    def polygon(self) -> Polygon:
        return validate_polygon(self.vertices, require_orthogonal=self.mode != "quota")

    def with_overrides(self, **changes) -> "Instance":
        """Copy with some fields replaced; drops fields the new mode does not take."""
        changes = {k: v for k, v in changes.items() if v is not None}
        inst = replace(self, **changes)
        if inst.mode not in NEEDS_EPSILON:
            inst = replace(inst, epsilon=None)
        if inst.mode != "quota":
            inst = replace(inst, quota_fraction=None, factor_mode=None)
        return check_instance(inst)


# ---------------------------------------------------------------------------
# numbers


def _number(v, what: str) -> Number:
    if isinstance(v, bool) or v is None:
        raise SchemaError(f"{what}: expected a number, got {v!r}")
    if isinstance(v, float):
        v = Decimal(repr(v))
    if isinstance(v, str):
        try:
            v = Fraction(v)
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"{what}: bad number {v!r}") from exc
    try:
        return as_number(v)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"{what}: {exc}") from exc


def number_to_json(v: Number) -> Any:
    """ints stay ints; a fraction whose shortest float literal reads back exactly
    becomes that literal; anything else becomes the string "p/q"."""
    if isinstance(v, (bool, int, float)):
        return v
    f = Fraction(v)
    if f.denominator == 1:
        return f.numerator
    x = float(f)
    if Fraction(repr(x)) == f:
        return x
    return f"{f.numerator}/{f.denominator}"


def _point_json(p: Point) -> list:
    return [number_to_json(p.x), number_to_json(p.y)]


def _pair(v, what: str) -> Point:
    if not isinstance(v, (list, tuple)) or len(v) != 2:
        raise SchemaError(f"{what}: expected a coordinate pair")
    return Point(_number(v[0], what), _number(v[1], what))


# ---------------------------------------------------------------------------
# instances


def check_instance(inst: Instance) -> Instance:
    if inst.mode not in MODES:
        raise SchemaError(f"mode must be one of {', '.join(MODES)}")
    if not isinstance(inst.k, int) or isinstance(inst.k, bool) or inst.k < 1:
        raise SchemaError("k must be a positive integer")
    if inst.mode in NEEDS_EPSILON:
        if inst.epsilon is None:
            raise SchemaError(f"mode {inst.mode} requires epsilon")
        if inst.epsilon <= 0:
            raise SchemaError("epsilon must be positive")
    elif inst.epsilon is not None:
        raise SchemaError(f"mode {inst.mode} takes no epsilon")
    if inst.mode == "quota":
        if inst.quota_fraction is None:
            raise SchemaError("mode quota requires quota_fraction")
        if not 0 <= inst.quota_fraction <= 1:
            raise SchemaError("quota_fraction must lie in [0, 1]")
        if inst.factor_mode is not None and inst.factor_mode not in FACTOR_MODES:
            raise SchemaError(f"factor_mode must be one of {', '.join(FACTOR_MODES)}")
    elif inst.quota_fraction is not None or inst.factor_mode is not None:
        raise SchemaError(f"mode {inst.mode} takes no quota_fraction or factor_mode")
    P = inst.polygon
    if locate(P, inst.start) != 0:
        raise StartNotOnBoundary(f"start {inst.start} is not on the polygon boundary")
    return inst


def instance_from_dict(doc: Any) -> Instance:
    if not isinstance(doc, dict):
        raise SchemaError("instance must be a JSON object")
    for key in ("vertices", "start", "k", "mode"):
        if key not in doc:
            raise SchemaError(f"missing field {key!r}")
    known = {"vertices", "start", "k", "mode", "epsilon", "quota_fraction", "factor_mode", "name"}
    extra = set(doc) - known
    if extra:
        raise SchemaError(f"unknown fields: {', '.join(sorted(extra))}")
    verts = doc["vertices"]
    if not isinstance(verts, list):
        raise SchemaError("vertices must be a list of coordinate pairs")
    k = doc["k"]
    if isinstance(k, float) and k.is_integer():
        k = int(k)
    inst = Instance(
        vertices=tuple(_pair(v, "vertices") for v in verts),
        start=_pair(doc["start"], "start"),
        k=k,
        mode=doc["mode"],
        epsilon=None if doc.get("epsilon") is None else _number(doc["epsilon"], "epsilon"),
        quota_fraction=None if doc.get("quota_fraction") is None else _number(doc["quota_fraction"], "quota_fraction"),
        factor_mode=doc.get("factor_mode"),
        name=doc.get("name"),
    )
    return check_instance(inst)


def parse_instance(text: str | bytes) -> Instance:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"instance is not UTF-8: {exc}") from exc
    try:
        doc = json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    return instance_from_dict(doc)


def instance_to_dict(inst: Instance) -> dict:
    doc: dict[str, Any] = {}
    if inst.name is not None:
        doc["name"] = inst.name
    doc["vertices"] = [_point_json(p) for p in inst.vertices]
    doc["start"] = _point_json(inst.start)
    doc["k"] = inst.k
    doc["mode"] = inst.mode
    if inst.epsilon is not None:
        doc["epsilon"] = number_to_json(inst.epsilon)
    if inst.quota_fraction is not None:
        doc["quota_fraction"] = number_to_json(inst.quota_fraction)
    if inst.factor_mode is not None:
        doc["factor_mode"] = inst.factor_mode
    return doc


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, sort_keys=False)


def serialize_instance(inst: Instance) -> str:
    return dumps(instance_to_dict(inst))


def load_instance(path) -> Instance:
    with open(path, "rb") as fh:
        return parse_instance(fh.read())


def load_corpus(directory=None) -> list[Instance]:
    """Instances from a directory of JSON files, or the bundled fixtures."""
    if directory is None:
        files = sorted((f for f in resources.files("kwatchmen").joinpath("corpus").iterdir() if f.name.endswith(".json")), key=lambda f: f.name)
        return [parse_instance(f.read_bytes()) for f in files]
    import pathlib

    return [load_instance(p) for p in sorted(pathlib.Path(directory).glob("*.json"))]


# ---------------------------------------------------------------------------
# results


@dataclass
class ResultRecord:
    routes: list[list[Point]]
    per_route_lengths: list[Number]
    max_length: Number
    metric: str
    verification: dict
    stats: dict = field(default_factory=dict)
    achieved_area: float | None = None
    mode: str = ""
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.verification.get("passed"))

    def to_dict(self, timing: bool = True) -> dict:
        doc = {
            "mode": self.mode,
            "metric": self.metric,
            "routes": [[_point_json(p) for p in r] for r in self.routes],
            "per_route_lengths": [_json_value(x) for x in self.per_route_lengths],
            "max_length": _json_value(self.max_length),
        }
        if self.achieved_area is not None:
            doc["achieved_area"] = _json_value(self.achieved_area)
        doc.update({k: _json_value(v) for k, v in self.extra.items()})
        doc["verification"] = _json_value(self.verification)
        stats = self.stats if timing else _strip_timing(self.stats)
        doc["stats"] = _json_value(stats)
        return doc

    def to_json(self, timing: bool = True) -> str:
        return dumps(self.to_dict(timing))


def _strip_timing(v):
    if isinstance(v, dict):
        return {k: _strip_timing(x) for k, x in v.items() if k not in TIMING_KEYS}
    if isinstance(v, (list, tuple)):
        return [_strip_timing(x) for x in v]
    return v


def _json_value(v):
    if isinstance(v, dict):
        return {str(k): _json_value(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_value(x) for x in v]
    if isinstance(v, (int, Fraction)) and not isinstance(v, bool):
        return number_to_json(v)
    if isinstance(v, Decimal):
        v = float(v)
    if isinstance(v, float):
        return round(v, 12) if math.isfinite(v) else str(v)
    return v


def result_from_dict(doc: Any) -> ResultRecord:
    if not isinstance(doc, dict) or "routes" not in doc or "metric" not in doc:
        raise SchemaError("result must be an object with routes and metric")
    routes = [[_pair(p, "route") for p in r] for r in doc["routes"]]
    known = {"mode", "metric", "routes", "per_route_lengths", "max_length", "achieved_area", "verification", "stats"}
    return ResultRecord(
        routes=routes,
        per_route_lengths=[_number(x, "per_route_lengths") for x in doc.get("per_route_lengths", [])],
        max_length=_number(doc.get("max_length", 0), "max_length"),
        metric=doc["metric"],
        verification=doc.get("verification", {}),
        stats=doc.get("stats", {}),
        achieved_area=None if doc.get("achieved_area") is None else float(doc["achieved_area"]),
        mode=doc.get("mode", ""),
        extra={k: v for k, v in doc.items() if k not in known},
    )


def parse_result(text: str | bytes) -> ResultRecord:
    try:
        doc = json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    return result_from_dict(doc)


# ---------------------------------------------------------------------------
# dispatch


def quota_area(inst: Instance) -> float:
    return float(inst.quota_fraction) * float(polygon_area(inst.polygon))


def _lengths_consistent(routes, lengths, metric: str) -> bool:
    for wps, length in zip(routes, lengths):
        if abs(float(path_length(wps, metric)) - float(length)) > TAU_GEOM * max(1.0, abs(float(length))):
            return False
    return True


def verify_routes(inst: Instance, routes: list[list[Point]], metric: str, lengths=None, achieved_area=None) -> dict:
    """Independent check of a solution against its instance."""
    from .kwrp import verify_cover
    from .visibility import route_visible_area
    from .errors import RouteOutsidePolygon

    P = inst.polygon
    s = inst.start
    anchored = all(r and r[0] == r[-1] and _close(r[0], s) for r in routes) and len(routes) == inst.k
    lengths_ok = lengths is None or _lengths_consistent(routes, lengths, metric)
    if inst.mode == "quota":
        from .visibility import TAU_AREA

        try:
            area = route_visible_area(P, routes)
            inside = True
        except RouteOutsidePolygon:
            area, inside = 0.0, False
        A = quota_area(inst)
        quota_ok = area >= A * (1 - TAU_AREA)
        matches = achieved_area is None or abs(area - float(achieved_area)) <= TAU_AREA * max(A, 1.0)
        return {
            "passed": bool(anchored and inside and quota_ok and matches and lengths_ok),
            "anchored": anchored,
            "inside": inside,
            "recomputed_area": area,
            "quota": A,
            "quota_met": quota_ok,
            "area_matches": matches,
            "lengths_consistent": lengths_ok,
        }
    report = verify_cover(P, s, routes)
    summary = report.summary()
    summary["passed"] = bool(report.passed and anchored and lengths_ok)
    summary["anchored"] = anchored
    summary["lengths_consistent"] = lengths_ok
    return summary


def _close(p: Point, q: Point) -> bool:
    return abs(float(p.x) - float(q.x)) <= TAU_GEOM and abs(float(p.y) - float(q.y)) <= TAU_GEOM


def run(inst: Instance, threads: int = 1) -> ResultRecord:
    """Solve an instance and verify the answer."""
    from . import kwrp, quota

    t0 = time.perf_counter()
    P = inst.polygon
    s = inst.start
    if inst.mode == "quota":
        A = quota_area(inst)
        fm = inst.factor_mode or "double"
        sol = quota.solve_quota(P, s, inst.k, A, float(inst.epsilon), fm, threads=threads)
        routes = [list(r.waypoints) for r in sol.routes]
        extra = {
            "r_min": sol.r_min,
            "r_final": sol.r_final,
            "budget_used": sol.budget_used,
            "factor_mode": sol.factor_mode,
            "eps_prime": sol.eps_prime,
            "tour_length": sol.tour_length,
            "quota": A,
        }
        stats = dict(sol.stats, disks=[list(d) for d in sol.disks])
        ver = verify_routes(inst, routes, "L2", sol.per_route_lengths, sol.achieved_area)
        stats["wall_time"] = time.perf_counter() - t0
        return ResultRecord(routes, sol.per_route_lengths, sol.max_length, "L2", ver, stats, sol.achieved_area, inst.mode, extra)
    ctx = kwrp.prepare(P, s)
    if inst.mode == "exact":
        sol = kwrp.exact_dp(P, s, inst.k, ctx)
    elif inst.mode == "fptas":
        sol = kwrp.fptas(P, s, inst.k, inst.epsilon, ctx)
    elif inst.mode == "l2":
        sol = kwrp.l2_wrapper(P, s, inst.k, inst.epsilon, ctx)
    else:
        sol = kwrp.brute_force_oracle(P, s, inst.k, ctx)
    routes = [list(r.waypoints) for r in sol.routes]
    ver = verify_routes(inst, routes, sol.metric, sol.per_route_lengths)
    stats = dict(sol.stats)
    stats["wall_time"] = time.perf_counter() - t0
    extra = {"cuts": ctx.cuts.m}
    if inst.mode == "l2":
        extra["l1_max_length"] = sol.stats["l1_max_length"]
    return ResultRecord(routes, sol.per_route_lengths, sol.max_length, sol.metric, ver, stats, None, inst.mode, extra)


def reverify(inst: Instance, result: ResultRecord) -> dict:
    return verify_routes(inst, result.routes, result.metric, result.per_route_lengths or None, result.achieved_area)
