"""Standalone SVG drawings of an instance and its solution."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

from .geometry import Point
from .io import Instance, ResultRecord
from .visibility import Arc

ROUTE_COLORS = ("#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")


class _Canvas:
    def __init__(self, pts: list[Point], width: float = 640.0, margin: float = 24.0):
        xs = [float(p.x) for p in pts]
        ys = [float(p.y) for p in pts]
        self.x0, self.y1 = min(xs), max(ys)
        span = max(max(xs) - self.x0, self.y1 - min(ys), 1e-9)
        self.scale = (width - 2 * margin) / span
        self.margin = margin
        self.width = (max(xs) - self.x0) * self.scale + 2 * margin
        self.height = (self.y1 - min(ys)) * self.scale + 2 * margin

    def xy(self, p) -> tuple[float, float]:
        # SVG y grows downward
        return (
            round((float(p[0]) - self.x0) * self.scale + self.margin, 3),
            round((self.y1 - float(p[1])) * self.scale + self.margin, 3),
        )

    def points(self, pts) -> str:
        return " ".join(f"{x},{y}" for x, y in map(self.xy, pts))


def _arc_path(c: _Canvas, arc: Arc) -> str:
    a, b = arc.point_at(arc.start), arc.point_at(arc.start + arc.sweep)
    (ax, ay), (bx, by) = c.xy(a), c.xy(b)
    r = round(arc.radius * c.scale, 3)
    large = 1 if abs(arc.sweep) > math.pi else 0
    # counterclockwise in the plane is clockwise on screen
    sweep = 0 if arc.sweep > 0 else 1
    return f"M {ax},{ay} A {r},{r} 0 {large} {sweep} {bx},{by}"


def render_svg(inst: Instance, result: ResultRecord | None = None, grid: bool = False) -> str:
    """Layers: polygon, dashed essential cuts, optional Hanan grid, routes, start, disk boundary."""
    P = inst.polygon
    s = inst.start
    c = _Canvas(list(P.vertices))
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{c.width:.0f}" height="{c.height:.0f}" '
        f'viewBox="0 0 {c.width:.3f} {c.height:.3f}">',
        f"<title>{escape(inst.name or 'instance')} ({inst.mode}, k={inst.k})</title>",
        '<g id="polygon">',
        f'<polygon points="{c.points(P.vertices)}" fill="#f4f1e8" stroke="#222" stroke-width="2"/>',
        "</g>",
    ]
    if P.orthogonal:
        from .cuts import build_hanan_grid, compute_essential_cuts

        cuts = compute_essential_cuts(P, s)
        if grid:
            g = build_hanan_grid(P, s, cuts)
            out.append('<g id="grid" stroke="#bbb" stroke-width="0.7">')
            for seg in g.segments:
                a, b = ((seg.lo, seg.coord), (seg.hi, seg.coord)) if seg.horizontal else ((seg.coord, seg.lo), (seg.coord, seg.hi))
                (ax, ay), (bx, by) = c.xy(a), c.xy(b)
                out.append(f'<line x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}"/>')
            out.append("</g>")
        out.append('<g id="cuts" stroke="#555" stroke-width="1.5" stroke-dasharray="6 4">')
        for cut in cuts:
            (ax, ay), (bx, by) = c.xy(cut.reflex_vertex), c.xy(cut.far_endpoint)
            out.append(f'<line x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}"><title>cut {cut.boundary_index}</title></line>')
        out.append("</g>")
    if result is not None and inst.mode == "quota" and result.extra.get("r_final"):
        from .quota import geodesic_disk

        disk = geodesic_disk(P, s, float(result.extra["r_final"]))
        out.append('<g id="disk" fill="none" stroke="#e6a100" stroke-width="1.5">')
        for piece in disk.boundary:
            if isinstance(piece, Arc):
                out.append(f'<path d="{_arc_path(c, piece)}"/>')
            else:
                (ax, ay), (bx, by) = c.xy(piece[0]), c.xy(piece[1])
                out.append(f'<line x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}"/>')
        out.append("</g>")
    if result is not None:
        out.append('<g id="routes" fill="none" stroke-width="2.5" stroke-linejoin="round">')
        for i, route in enumerate(result.routes):
            color = ROUTE_COLORS[i % len(ROUTE_COLORS)]
            if len(route) > 1:
                out.append(f'<polyline points="{c.points(route)}" stroke="{color}"><title>route {i + 1}</title></polyline>')
        out.append("</g>")
    sx, sy = c.xy(s)
    out.append(f'<g id="start"><circle cx="{sx}" cy="{sy}" r="5" fill="#000"/></g>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
