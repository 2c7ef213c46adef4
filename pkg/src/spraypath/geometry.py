"""Arc/line path primitives and arc-length utilities.

Everything here is immutable; paths are built once and then only queried.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Sequence, Union

import numpy as np

POS_TOL = 1e-6
HEADING_TOL = 1e-6


def wrap_angle(a: float) -> float:
    """Normalize an angle to (-pi, pi]."""
    a = math.fmod(a, 2.0 * math.pi)
    if a <= -math.pi:
        a += 2.0 * math.pi
    elif a > math.pi:
        a -= 2.0 * math.pi
    return a


def angle_diff(a: float, b: float) -> float:
    return abs(wrap_angle(a - b))


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite point ({self.x}, {self.y})")

    def dist(self, other: "Point") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


@dataclass(frozen=True)
class Pose:
    position: Point
    heading: float

    def __post_init__(self):
        object.__setattr__(self, "heading", wrap_angle(self.heading))

    @property
    def x(self) -> float:
        return self.position.x

    @property
    def y(self) -> float:
        return self.position.y

    def matches(self, other: "Pose", pos_tol=POS_TOL, heading_tol=HEADING_TOL) -> bool:
        return (self.position.dist(other.position) <= pos_tol
                and angle_diff(self.heading, other.heading) <= heading_tol)


class Role(str, Enum):
    HEADLAND = "headland"
    LANE = "lane"
    TURN = "turn"
    TRANSFER = "transfer"


@dataclass(frozen=True)
class Line:
    start: Point
    end: Point

    def __post_init__(self):
        if self.start.dist(self.end) <= 0.0:
            raise ValueError("line segment must have positive length")

    @property
    def length(self) -> float:
        return self.start.dist(self.end)

    @property
    def heading(self) -> float:
        return math.atan2(self.end.y - self.start.y, self.end.x - self.start.x)

    @property
    def start_pose(self) -> Pose:
        return Pose(self.start, self.heading)

    @property
    def end_pose(self) -> Pose:
        return Pose(self.end, self.heading)

    def sample(self, t: np.ndarray):
        """Positions and headings at arc-length offsets ``t`` from the start."""
        t = np.asarray(t, dtype=float)
        h = self.heading
        c, s = math.cos(h), math.sin(h)
        x = self.start.x + t * c
        y = self.start.y + t * s
        return x, y, np.full_like(t, h)

    def pose_at(self, t: float) -> Pose:
        x, y, h = self.sample(np.array([t]))
        return Pose(Point(float(x[0]), float(y[0])), float(h[0]))

    def distance_to(self, px, py) -> np.ndarray:
        px = np.asarray(px, dtype=float)
        py = np.asarray(py, dtype=float)
        dx, dy = self.end.x - self.start.x, self.end.y - self.start.y
        L2 = dx * dx + dy * dy
        t = np.clip(((px - self.start.x) * dx + (py - self.start.y) * dy) / L2, 0.0, 1.0)
        return np.hypot(px - (self.start.x + t * dx), py - (self.start.y + t * dy))

    def sub(self, a: float, b: float) -> "Line":
        """Piece between arc-length offsets a < b."""
        p, q = self.pose_at(a), self.pose_at(b)
        return Line(p.position, q.position)

    def reversed(self) -> "Line":
        return Line(self.end, self.start)

    def mirrored(self, mx: Optional[float], my: Optional[float]) -> "Line":
        return Line(_mirror_point(self.start, mx, my), _mirror_point(self.end, mx, my))


@dataclass(frozen=True)
class Arc:
    center: Point
    radius: float
    start_angle: float
    sweep: float  # signed, positive = counter-clockwise (left turn)

    def __post_init__(self):
        if not self.radius > 0.0:
            raise ValueError("arc radius must be positive")
        if self.sweep == 0.0:
            raise ValueError("arc sweep must be non-zero")

    @property
    def length(self) -> float:
        return self.radius * abs(self.sweep)

    @property
    def direction(self) -> float:
        return 1.0 if self.sweep > 0 else -1.0

    def sample(self, t: np.ndarray):
        t = np.asarray(t, dtype=float)
        ang = self.start_angle + self.direction * t / self.radius
        x = self.center.x + self.radius * np.cos(ang)
        y = self.center.y + self.radius * np.sin(ang)
        return x, y, ang + self.direction * (math.pi / 2.0)

    def pose_at(self, t: float) -> Pose:
        x, y, h = self.sample(np.array([t]))
        return Pose(Point(float(x[0]), float(y[0])), float(h[0]))

    @property
    def start_pose(self) -> Pose:
        return self.pose_at(0.0)

    @property
    def end_pose(self) -> Pose:
        return self.pose_at(self.length)

    def _in_span(self, phi: np.ndarray) -> np.ndarray:
        rel = np.mod((phi - self.start_angle) * self.direction, 2.0 * math.pi)
        return rel <= abs(self.sweep) + 1e-12

    def distance_to(self, px, py) -> np.ndarray:
        px = np.asarray(px, dtype=float)
        py = np.asarray(py, dtype=float)
        dx, dy = px - self.center.x, py - self.center.y
        rho = np.hypot(dx, dy)
        inside = self._in_span(np.arctan2(dy, dx))
        p0, p1 = self.start_pose.position, self.end_pose.position
        ends = np.minimum(np.hypot(px - p0.x, py - p0.y), np.hypot(px - p1.x, py - p1.y))
        return np.where(inside, np.abs(rho - self.radius), ends)

    def sub(self, a: float, b: float) -> "Arc":
        return Arc(self.center, self.radius,
                   self.start_angle + self.direction * a / self.radius,
                   self.direction * (b - a) / self.radius)

    def reversed(self) -> "Arc":
        return Arc(self.center, self.radius, self.start_angle + self.sweep, -self.sweep)

    def mirrored(self, mx: Optional[float], my: Optional[float]) -> "Arc":
        a, sweep = self.start_angle, self.sweep
        if mx is not None:
            a, sweep = math.pi - a, -sweep
        if my is not None:
            a, sweep = -a, -sweep
        return Arc(_mirror_point(self.center, mx, my), self.radius, wrap_angle(a), sweep)


Segment = Union[Line, Arc]


def _mirror_point(p: Point, mx: Optional[float], my: Optional[float]) -> Point:
    x = 2.0 * mx - p.x if mx is not None else p.x
    y = 2.0 * my - p.y if my is not None else p.y
    return Point(x, y)


@dataclass(frozen=True)
class Annotation:
    role: Role
    lane: Optional[int] = None


@dataclass(frozen=True)
class PlannedPath:
    """Tangent-continuous chain of segments.

    ``cum_length`` has one more entry than ``segments``: segment k spans
    ``[cum_length[k], cum_length[k + 1]]``.
    """

    segments: tuple = ()
    annotations: tuple = ()
    cum_length: tuple = field(init=False)

    def __post_init__(self):
        segs = tuple(self.segments)
        anns = tuple(self.annotations)
        if len(segs) != len(anns):
            raise ValueError("every segment needs exactly one annotation")
        object.__setattr__(self, "segments", segs)
        object.__setattr__(self, "annotations", anns)
        cum = [0.0]
        for seg in segs:
            cum.append(cum[-1] + seg.length)
        object.__setattr__(self, "cum_length", tuple(cum))
        for k in range(len(segs) - 1):
            a, b = segs[k].end_pose, segs[k + 1].start_pose
            if not a.matches(b):
                raise ValueError(
                    f"discontinuity between segments {k} and {k + 1}: {a} vs {b}")

    @property
    def length(self) -> float:
        return self.cum_length[-1]

    def __len__(self):
        return len(self.segments)

    @property
    def start_pose(self) -> Optional[Pose]:
        return self.segments[0].start_pose if self.segments else None

    @property
    def end_pose(self) -> Optional[Pose]:
        return self.segments[-1].end_pose if self.segments else None

    def roles(self) -> list:
        return [a.role for a in self.annotations]

    def window(self, k: int) -> tuple:
        return self.cum_length[k], self.cum_length[k + 1]

    def locate(self, s: float) -> int:
        """Index of the segment containing arc length ``s`` (last one at the end)."""
        if not self.segments:
            raise IndexError("empty path")
        k = int(np.searchsorted(self.cum_length, s, side="right")) - 1
        return min(max(k, 0), len(self.segments) - 1)

    def pose_at(self, s: float) -> Pose:
        k = self.locate(s)
        seg = self.segments[k]
        return seg.pose_at(min(max(s - self.cum_length[k], 0.0), seg.length))

    def point_at(self, s: float) -> Point:
        return self.pose_at(s).position

    def concat(self, other: "PlannedPath") -> "PlannedPath":
        return PlannedPath(self.segments + other.segments,
                           self.annotations + other.annotations)

    def mirrored(self, mx: Optional[float], my: Optional[float], lane_map=None) -> "PlannedPath":
        anns = self.annotations
        if lane_map is not None:
            anns = tuple(Annotation(a.role, None if a.lane is None else lane_map(a.lane))
                         for a in anns)
        return PlannedPath(tuple(s.mirrored(mx, my) for s in self.segments), anns)

    def pieces(self, s0: float, s1: float):
        """Yield ``(k, segment_piece, s_start)`` covering ``[s0, s1]``."""
        if s1 <= s0 or not self.segments:
            return
        k = self.locate(s0)
        while k < len(self.segments) and self.cum_length[k] < s1:
            a = max(s0 - self.cum_length[k], 0.0)
            b = min(s1 - self.cum_length[k], self.segments[k].length)
            if b - a > 1e-12:
                seg = self.segments[k]
                piece = seg if (a == 0.0 and b == seg.length) else seg.sub(a, b)
                yield k, piece, self.cum_length[k] + a
            k += 1


def path_length(path: PlannedPath) -> float:
    """Sum of segment lengths (equals the last prefix sum)."""
    return path.length


def sample_path(path: PlannedPath, ds: float):
    """Vectorized samples ``(s, x, y, heading)`` with spacing <= ds.

    Both endpoints of every segment are included; shared joints appear once.
    """
    if ds <= 0:
        raise ValueError("ds must be positive")
    s_parts, x_parts, y_parts, h_parts = [], [], [], []
    for k, seg in enumerate(path.segments):
        n = max(1, math.ceil(seg.length / ds - 1e-12))
        t = np.linspace(0.0, seg.length, n + 1)
        if k > 0:
            t = t[1:]
        x, y, h = seg.sample(t)
        s_parts.append(path.cum_length[k] + t)
        x_parts.append(x)
        y_parts.append(y)
        h_parts.append(h)
    if not s_parts:
        empty = np.zeros(0)
        return empty, empty, empty, empty
    return (np.concatenate(s_parts), np.concatenate(x_parts),
            np.concatenate(y_parts), np.concatenate(h_parts))


def discretize(path: PlannedPath, ds: float) -> list:
    """List of ``(s, Pose)`` samples with arc-length spacing <= ds."""
    s, x, y, h = sample_path(path, ds)
    return [(float(si), Pose(Point(float(xi), float(yi)), float(hi)))
            for si, xi, yi, hi in zip(s, x, y, h)]


class PathBuilder:
    """Turtle-style construction of a tangent-continuous path.

    Straights shorter than ``min_length`` are skipped, which happens for the
    degenerate W == 2R transfers.
    """

    def __init__(self, start: Pose, min_length: float = 1e-9):
        self.pose = start
        self.min_length = min_length
        self.segments: list = []
        self.annotations: list = []
        self.s = 0.0

    def _push(self, seg, role: Role, lane: Optional[int]):
        self.segments.append(seg)
        self.annotations.append(Annotation(role, lane))
        self.s += seg.length
        self.pose = seg.end_pose

    def straight(self, length: float, role: Role, lane: Optional[int] = None) -> "PathBuilder":
        if length < -1e-9:
            raise ValueError(f"negative straight length {length}")
        if length > self.min_length:
            p = self.pose.position
            end = Point(p.x + length * math.cos(self.pose.heading),
                        p.y + length * math.sin(self.pose.heading))
            self._push(Line(p, end), role, lane)
        return self

    def turn(self, direction: int, radius: float, angle: float = math.pi / 2,
             role: Role = Role.TURN, lane: Optional[int] = None) -> "PathBuilder":
        """Arc turning left (direction=+1) or right (-1) by ``angle``."""
        h = self.pose.heading
        p = self.pose.position
        nx, ny = -math.sin(h) * direction, math.cos(h) * direction
        center = Point(p.x + radius * nx, p.y + radius * ny)
        start_angle = math.atan2(p.y - center.y, p.x - center.x)
        self._push(Arc(center, radius, start_angle, direction * angle), role, lane)
        return self

    def extend(self, segments: Iterable, role: Role, lane: Optional[int] = None) -> "PathBuilder":
        for seg in segments:
            if not seg.start_pose.matches(self.pose):
                raise ValueError("appended segment does not continue the path")
            self._push(seg, role, lane)
        return self

    def build(self) -> PlannedPath:
        return PlannedPath(tuple(self.segments), tuple(self.annotations))


def joint_errors(path: PlannedPath) -> list:
    """Position and heading mismatch at every joint, as ``(dpos, dheading)``."""
    out = []
    for a, b in zip(path.segments, path.segments[1:]):
        pa, pb = a.end_pose, b.start_pose
        out.append((pa.position.dist(pb.position), angle_diff(pa.heading, pb.heading)))
    return out


def concat_paths(paths: Sequence[PlannedPath]) -> PlannedPath:
    segs, anns = (), ()
    for p in paths:
        segs += p.segments
        anns += p.annotations
    return PlannedPath(segs, anns)
