"""Field parameters and the rectangular layout derived from them.

Canonical frame: mainfield lower-left corner at the origin, lanes run
north-south.  Lane length is measured between the bottom and top headland
centerlines, so the part of a lane that is not covered by the headland
passes spans ``y in [0, lane_length - working_width]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .geometry import Arc, Line, PlannedPath, Point, Pose, Role, Annotation

CORNERS = ("SW", "SE", "NW", "NE")


class InvalidSpec(ValueError):
    """A FieldSpec violates one of its invariants."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field_name = field_name


@dataclass(frozen=True)
class FieldSpec:
    working_width: float
    lane_length: float
    lane_count: int
    turn_radius: float
    entrance: str = "SW"

    def validate(self) -> "FieldSpec":
        W, H, N, R = self.working_width, self.lane_length, self.lane_count, self.turn_radius
        for name, v in (("working_width", W), ("lane_length", H), ("turn_radius", R)):
            if not isinstance(v, (int, float)) or isinstance(v, bool) or not math.isfinite(v):
                raise InvalidSpec(name, f"must be a finite number, got {v!r}")
        if isinstance(N, bool) or not isinstance(N, (int, np.integer)):
            raise InvalidSpec("lane_count", f"must be an integer, got {N!r}")
        if W <= 0:
            raise InvalidSpec("working_width", f"must be > 0, got {W}")
        if N < 2:
            raise InvalidSpec("lane_count", f"must be >= 2, got {N}")
        if not 0 < R <= W / 2:
            raise InvalidSpec("turn_radius",
                              f"must satisfy 0 < turn_radius <= working_width/2 = {W / 2}, got {R}")
        if H <= 4 * R:
            raise InvalidSpec("lane_length", f"must exceed 4*turn_radius = {4 * R}, got {H}")
        if H <= W:
            raise InvalidSpec("lane_length", f"must exceed working_width = {W}, got {H}")
        if self.entrance not in CORNERS:
            raise InvalidSpec("entrance", f"must be one of {CORNERS}, got {self.entrance!r}")
        return self

    def with_entrance(self, entrance: str) -> "FieldSpec":
        return FieldSpec(self.working_width, self.lane_length, self.lane_count,
                         self.turn_radius, entrance)

    def to_json(self) -> dict:
        return {
            "working_width_m": self.working_width,
            "lane_length_m": self.lane_length,
            "lane_count": self.lane_count,
            "turn_radius_m": self.turn_radius,
            "entrance": self.entrance,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "FieldSpec":
        return cls(doc["working_width_m"], doc["lane_length_m"], doc["lane_count"],
                   doc["turn_radius_m"], doc.get("entrance", "SW"))


@dataclass(frozen=True)
class Layout:
    spec: FieldSpec
    mainfield: tuple          # (x0, y0, x1, y1)
    lane_x: tuple             # centerline x of lanes 1..N
    lane_centerlines: tuple   # Line per lane, south to north, headland to headland
    headland: tuple           # (x_left, y_bottom, x_right, y_top) of the centerline ring
    headland_ring: PlannedPath
    target: tuple             # (x0, y0, x1, y1, corner_radius) rounded rectangle

    @property
    def W(self) -> float:
        return self.spec.working_width

    @property
    def R(self) -> float:
        return self.spec.turn_radius

    @property
    def N(self) -> int:
        return self.spec.lane_count

    @property
    def ring_length(self) -> float:
        return self.headland_ring.length

    @property
    def entrance_pose(self) -> Pose:
        """Tangent point just past the SW corner arc, heading east (canonical frame)."""
        return self.headland_ring.start_pose

    @property
    def mirror_axes(self) -> tuple:
        xl, yb, xr, yt = self.headland
        return (xl + xr) / 2.0, (yb + yt) / 2.0

    def mirror_for(self, entrance: str) -> tuple:
        """``(mx, my)`` reflection axes mapping the SW construction onto ``entrance``."""
        cx, cy = self.mirror_axes
        mx = cx if entrance in ("SE", "NE") else None
        my = cy if entrance in ("NW", "NE") else None
        return mx, my

    def lane_map_for(self, entrance: str):
        if entrance in ("SE", "NE"):
            return lambda i: self.N + 1 - i
        return lambda i: i

    def in_target(self, x, y) -> np.ndarray:
        x0, y0, x1, y1, rho = self.target
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        cx, cy = (x0 + x1) / 2, (y0 + y1) / 2
        hx, hy = (x1 - x0) / 2, (y1 - y0) / 2
        qx = np.abs(x - cx) - (hx - rho)
        qy = np.abs(y - cy) - (hy - rho)
        inside_box = (np.abs(x - cx) <= hx) & (np.abs(y - cy) <= hy)
        corner = (qx > 0) & (qy > 0)
        return inside_box & (~corner | (qx * qx + qy * qy <= rho * rho))

    @property
    def target_area(self) -> float:
        x0, y0, x1, y1, rho = self.target
        return (x1 - x0) * (y1 - y0) - self.corner_sliver_area

    @property
    def corner_sliver_area(self) -> float:
        """Outer-corner slivers of the bounding rectangle outside the target region."""
        rho = self.target[4]
        return 4.0 * (1.0 - math.pi / 4.0) * rho * rho

    def ring_param(self, p: Point) -> float:
        """Arc-length coordinate of the closest point on the headland ring."""
        best, best_u = math.inf, 0.0
        ring = self.headland_ring
        for k, seg in enumerate(ring.segments):
            d = float(seg.distance_to(p.x, p.y))
            if d < best - 1e-12:
                best = d
                if isinstance(seg, Line):
                    ux, uy = seg.end.x - seg.start.x, seg.end.y - seg.start.y
                    t = ((p.x - seg.start.x) * ux + (p.y - seg.start.y) * uy) / seg.length
                    t = min(max(t, 0.0), seg.length)
                else:
                    phi = math.atan2(p.y - seg.center.y, p.x - seg.center.x)
                    rel = math.fmod((phi - seg.start_angle) * seg.direction, 2 * math.pi)
                    if rel < 0:
                        rel += 2 * math.pi
                    t = min(rel, abs(seg.sweep)) * seg.radius
                best_u = ring.cum_length[k] + t
        return best_u % ring.length

    def ring_leg(self, u0: float, u1: float, ccw: bool = True) -> list:
        """Segments following the ring from ``u0`` to ``u1`` (wrapping once at most)."""
        ring = self.headland_ring
        L = ring.length
        u0 %= L
        if ccw:
            dist = (u1 - u0) % L
            if dist < 1e-9 and abs(u1 - u0) > 1e-9:
                dist = L
            pieces = []
            a = u0
            remaining = dist
            while remaining > 1e-9:
                b = min(a + remaining, L)
                pieces += [p for _, p, _ in ring.pieces(a, b)]
                remaining -= b - a
                a = 0.0
            return pieces
        # clockwise: walk backwards, emit reversed pieces
        dist = (u0 - u1) % L
        if dist < 1e-9 and abs(u1 - u0) > 1e-9:
            dist = L
        pieces = []
        b = u0 if u0 > 0 else L
        remaining = dist
        while remaining > 1e-9:
            a = max(b - remaining, 0.0)
            chunk = [p for _, p, _ in ring.pieces(a, b)]
            pieces += [p.reversed() for p in reversed(chunk)]
            remaining -= b - a
            b = L
        return pieces


def _ring(xl: float, yb: float, xr: float, yt: float, R: float) -> PlannedPath:
    half_pi = math.pi / 2
    segs = (
        Line(Point(xl + R, yb), Point(xr - R, yb)),
        Arc(Point(xr - R, yb + R), R, -half_pi, half_pi),
        Line(Point(xr, yb + R), Point(xr, yt - R)),
        Arc(Point(xr - R, yt - R), R, 0.0, half_pi),
        Line(Point(xr - R, yt), Point(xl + R, yt)),
        Arc(Point(xl + R, yt - R), R, half_pi, half_pi),
        Line(Point(xl, yt - R), Point(xl, yb + R)),
        Arc(Point(xl + R, yb + R), R, math.pi, half_pi),
    )
    return PlannedPath(segs, tuple(Annotation(Role.HEADLAND) for _ in segs))


@lru_cache(maxsize=256)
def build_layout(spec: FieldSpec) -> Layout:
    """Lanes, headland centerline ring and target region for ``spec``."""
    spec.validate()
    W, H, N, R = spec.working_width, spec.lane_length, spec.lane_count, spec.turn_radius
    xl, yb = -W / 2, -W / 2
    xr, yt = N * W + W / 2, H - W / 2
    lane_x = tuple((i - 0.5) * W for i in range(1, N + 1))
    lanes = tuple(Line(Point(x, yb), Point(x, yt)) for x in lane_x)
    return Layout(
        spec=spec,
        mainfield=(0.0, 0.0, N * W, H - W),
        lane_x=lane_x,
        lane_centerlines=lanes,
        headland=(xl, yb, xr, yt),
        headland_ring=_ring(xl, yb, xr, yt, R),
        target=(xl - W / 2, yb - W / 2, xr + W / 2, yt + W / 2, R + W / 2),
    )


def headland_projection_distance(p, layout: Layout):
    """Minimum distance from ``p`` (Point or ``(x, y)`` arrays) to the headland centerline."""
    if isinstance(p, Point):
        px, py = p.x, p.y
    else:
        px, py = p
    d = None
    for seg in layout.headland_ring.segments:
        di = seg.distance_to(px, py)
        d = di if d is None else np.minimum(d, di)
    if np.ndim(d) == 0:
        return float(d)
    return d
