"""SVG and GeoJSON renderings of a plan and its spray program."""

from __future__ import annotations

import math
from xml.sax.saxutils import quoteattr

import numpy as np

from .field import build_layout
from .geometry import PlannedPath
from .switching import SprayProgram

ON_COLOUR = "#1b7f3a"
OFF_COLOUR = "#9a9a9a"
SWATH_COLOUR = "#7fd18f"


def _polyline(path: PlannedPath, s0: float, s1: float, ds: float) -> np.ndarray:
    """Sampled ``(x, y)`` points along ``[s0, s1]``."""
    pts = []
    for _, piece, _ in path.pieces(s0, s1):
        n = max(1, math.ceil(piece.length / ds))
        x, y, _ = piece.sample(np.linspace(0.0, piece.length, n + 1))
        xy = np.column_stack([x, y])
        pts.append(xy if not pts else xy[1:])
    return np.vstack(pts) if pts else np.zeros((0, 2))


def _off_ranges(program: SprayProgram, length: float) -> list:
    out, s = [], 0.0
    for a, b in program.intervals:
        if a > s:
            out.append((s, a))
        s = b
    if s < length:
        out.append((s, length))
    return out


def rounded_rect_ring(x0, y0, x1, y1, r, n_arc: int = 16) -> list:
    """Closed counter-clockwise ring approximating a rounded rectangle."""
    corners = ((x1 - r, y0 + r, -math.pi / 2), (x1 - r, y1 - r, 0.0),
               (x0 + r, y1 - r, math.pi / 2), (x0 + r, y0 + r, math.pi))
    pts = []
    for cx, cy, a0 in corners:
        for k in range(n_arc + 1):
            a = a0 + (math.pi / 2) * k / n_arc
            pts.append([cx + r * math.cos(a), cy + r * math.sin(a)])
    pts.append(pts[0])
    return pts


def render_svg(plan, program: SprayProgram, ds: float = 0.5, scale: float = 2.0) -> str:
    """North-up SVG: target region, swath shading and path coloured by spray state.

    Every ON interval becomes one ``<g class="spray-on">`` group.
    """
    layout = build_layout(plan.spec)
    W = plan.spec.working_width
    tx0, ty0, tx1, ty1, rho = layout.target
    pad = W
    vx0, vy0, vx1, vy1 = tx0 - pad, ty0 - pad, tx1 + pad, ty1 + pad

    def pts(xy):
        # flip y so north is up
        return " ".join(f"{(x - vx0) * scale:.3f},{(vy1 - y) * scale:.3f}" for x, y in xy)

    width, height = (vx1 - vx0) * scale, (vy1 - vy0) * scale
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.1f}" height="{height:.1f}" '
        f'viewBox="0 0 {width:.3f} {height:.3f}">',
        f"<title>{plan.method} plan</title>",
        f'<rect class="target" x="{(tx0 - vx0) * scale:.3f}" y="{(vy1 - ty1) * scale:.3f}" '
        f'width="{(tx1 - tx0) * scale:.3f}" height="{(ty1 - ty0) * scale:.3f}" '
        f'rx="{rho * scale:.3f}" fill="#f4f1e6" stroke="#555" stroke-width="1"/>',
    ]
    for k, (a, b) in enumerate(program.intervals):
        line = pts(_polyline(plan.path, a, b, ds))
        out.append(f'<g class="spray-on" data-interval={quoteattr(str(k))}>')
        out.append(f'<polyline points="{line}" fill="none" stroke="{SWATH_COLOUR}" '
                   f'stroke-opacity="0.45" stroke-width="{W * scale:.3f}" stroke-linecap="butt"/>')
        out.append(f'<polyline points="{line}" fill="none" stroke="{ON_COLOUR}" stroke-width="1.5"/>')
        out.append("</g>")
    for a, b in _off_ranges(program, plan.path.length):
        line = pts(_polyline(plan.path, a, b, ds))
        out.append(f'<g class="spray-off"><polyline points="{line}" fill="none" '
                   f'stroke="{OFF_COLOUR}" stroke-width="1" stroke-dasharray="4 3"/></g>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_geojson(plan, program: SprayProgram, ds: float = 0.5) -> dict:
    """One LineString per path segment plus the target region polygon (local metres)."""
    layout = build_layout(plan.spec)
    features = []
    for k, (seg, ann) in enumerate(zip(plan.path.segments, plan.path.annotations)):
        s0, s1 = plan.path.window(k)
        on_len = sum(max(0.0, min(b, s1) - max(a, s0)) for a, b in program.intervals)
        xy = _polyline(plan.path, s0, s1, ds)
        features.append({
            "type": "Feature",
            "geometry": {"type": "LineString", "coordinates": xy.round(6).tolist()},
            "properties": {"index": k, "role": ann.role.value, "lane": ann.lane,
                           "on": on_len > 0.5 * seg.length, "on_length_m": on_len,
                           "length_m": seg.length},
        })
    x0, y0, x1, y1, rho = layout.target
    features.append({
        "type": "Feature",
        "geometry": {"type": "Polygon", "coordinates": [rounded_rect_ring(x0, y0, x1, y1, rho)]},
        "properties": {"role": "target_region", "area_m2": layout.target_area},
    })
    return {"type": "FeatureCollection",
            "properties": {"method": plan.method, "crs": "local metres, mainfield corner at origin"},
            "features": features}
