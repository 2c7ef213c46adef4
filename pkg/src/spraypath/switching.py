"""Spray programs: sorted, disjoint ON intervals in arc-length coordinates."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .coverage import CoverageGrid, in_swath, swath_bbox
from .field import Layout, build_layout, headland_projection_distance
from .geometry import PlannedPath, Role

MERGE_GAP = 1e-9
BISECT_TOL = 1e-6


class InvalidProgram(ValueError):
    pass


@dataclass(frozen=True)
class SwitchEvent:
    s: float
    new_state: bool


@dataclass(frozen=True)
class SprayProgram:
    intervals: tuple = ()
    path_length: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "intervals",
                           tuple((float(a), float(b)) for a, b in self.intervals))
        self.validate()

    def validate(self) -> "SprayProgram":
        prev = -math.inf
        top = math.inf if self.path_length is None else self.path_length + 1e-9
        for a, b in self.intervals:
            if not (0.0 <= a < b <= top):
                raise InvalidProgram(f"interval [{a}, {b}] outside [0, {self.path_length}]")
            if a < prev:
                raise InvalidProgram(f"interval starting at {a} overlaps or is out of order")
            prev = b
        return self

    @classmethod
    def from_intervals(cls, intervals, path_length: Optional[float] = None,
                       merge_gap: float = MERGE_GAP) -> "SprayProgram":
        """Sort, drop empty intervals and merge those separated by less than ``merge_gap``."""
        merged = []
        for a, b in sorted((float(a), float(b)) for a, b in intervals):
            if b - a <= 0.0:
                continue
            if merged and a - merged[-1][1] < merge_gap:
                merged[-1][1] = max(merged[-1][1], b)
            else:
                merged.append([a, b])
        return cls(tuple(map(tuple, merged)), path_length)

    def events(self) -> list:
        out = []
        for a, b in self.intervals:
            out += [SwitchEvent(a, True), SwitchEvent(b, False)]
        return out

    @property
    def on_length(self) -> float:
        return sum(b - a for a, b in self.intervals)

    def is_on(self, s: float) -> bool:
        return any(a <= s < b for a, b in self.intervals)

    def __len__(self):
        return len(self.intervals)

    def to_json(self) -> dict:
        return {"path_length_m": self.path_length,
                "intervals": [{"s_on_m": a, "s_off_m": b} for a, b in self.intervals]}

    @classmethod
    def from_json(cls, doc: dict) -> "SprayProgram":
        return cls(tuple((iv["s_on_m"], iv["s_off_m"]) for iv in doc["intervals"]),
                   doc.get("path_length_m"))


def count_on_states(program: SprayProgram) -> int:
    return len(program.intervals)


class _FreshArea:
    """Which boom points would land on target area nobody has sprayed yet."""

    def __init__(self, layout: Layout, prior: Optional[CoverageGrid], n_boom: int):
        self.layout = layout
        self.W = layout.W
        self.prior = prior
        self.offsets = ((np.arange(n_boom) + 0.5) / n_boom - 0.5) * self.W
        self.sprayed = []    # (piece, bbox)

    def commit(self, piece) -> None:
        self.sprayed.append((piece, swath_bbox(piece, self.W)))

    def fraction(self, seg, t) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, dtype=float))
        x, y, h = seg.sample(t)
        # boom runs across the heading: left normal is (-sin h, cos h)
        bx = x[:, None] - np.sin(h)[:, None] * self.offsets[None, :]
        by = y[:, None] + np.cos(h)[:, None] * self.offsets[None, :]
        fresh = self.layout.in_target(bx, by)
        if self.prior is not None:
            fresh &= self.prior.lookup(bx, by) == 0
        x0, y0, x1, y1 = bx.min(), by.min(), bx.max(), by.max()
        for piece, (a0, b0, a1, b1) in self.sprayed:
            if a0 > x1 or a1 < x0 or b0 > y1 or b1 < y0:
                continue
            fresh &= ~in_swath(piece, self.W, bx, by)
        return fresh.mean(axis=1)

    def is_fresh(self, seg, t: float) -> bool:
        return bool(self.fraction(seg, [t])[0] > 0.0)


def _bisect(f, lo: float, hi: float, tol: float = BISECT_TOL) -> float:
    """Boundary between ``f(lo)`` and ``f(hi)`` (which must differ)."""
    f_lo = f(lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(mid) == f_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _switch_point(seg, is_lane, fresh, layout, lo, hi):
    """Refine a state change located between offsets ``lo`` and ``hi`` on ``seg``."""
    if is_lane:
        half = layout.W / 2.0

        def beyond(t):
            return headland_projection_distance(seg.pose_at(t).position, layout) >= half

        # widen by a step so a crossing sitting exactly on a sample is still bracketed
        step = hi - lo
        a, b = max(lo - step, 0.0), min(hi + step, seg.length)
        if beyond(a) != beyond(b):
            return _bisect(beyond, a, b)
    return _bisect(lambda t: fresh.is_fresh(seg, t), lo, hi)


def reactive_schedule(path: PlannedPath, layout: Layout,
                      prior_coverage: Optional[CoverageGrid] = None, *,
                      s_range: Optional[tuple] = None, step: Optional[float] = None,
                      boom_points: int = 24) -> SprayProgram:
    """Spray whenever any part of the boom is over unsprayed target area.

    Boom sample points sit at cell centres across the width, never on the
    swath edge, so a neighbouring pass that only touches the boom does not
    count as fresh area.  Turns are never sprayed.  Sprayed area is committed segment by segment, so
    a pass never suppresses itself.  On lanes the switch points sit where the
    headland projection distance equals half the working width.
    """
    if not path.segments:
        return SprayProgram((), 0.0)
    s_lo, s_hi = s_range if s_range is not None else (0.0, path.length)
    if step is None:
        # fine enough to land several samples inside the shortest sprayable lane part
        step = min(layout.W / 16.0, (layout.spec.lane_length - layout.W) / 8.0)
    fresh = _FreshArea(layout, prior_coverage, boom_points)
    intervals = []
    for k, seg, s_start in path.pieces(s_lo, s_hi):
        ann = path.annotations[k]
        if ann.role == Role.TURN:
            continue
        n = max(2, int(math.ceil(seg.length / step)))
        mids = (np.arange(n) + 0.5) * (seg.length / n)
        on = fresh.fraction(seg, mids) > 0.0
        if not on.any():
            continue
        is_lane = ann.role == Role.LANE
        edges = np.flatnonzero(np.diff(on.astype(np.int8)))
        t_on = 0.0 if on[0] else None
        runs = []
        for e in edges:
            t = _switch_point(seg, is_lane, fresh, layout, mids[e], mids[e + 1])
            if on[e + 1]:
                t_on = t
            else:
                runs.append((t_on, t))
                t_on = None
        if t_on is not None:
            runs.append((t_on, seg.length))
        for a, b in runs:
            if b - a > 1e-12:
                intervals.append((s_start + a, s_start + b))
                fresh.commit(seg if (a == 0.0 and b == seg.length) else seg.sub(a, b))
    return SprayProgram.from_intervals(intervals, path.length)


def predictive_schedule(plan, prior_coverage: Optional[CoverageGrid] = None) -> SprayProgram:
    """Per pattern: ON over D-E, J-K and A'-M; entrance and exit legs switched reactively."""
    layout = build_layout(plan.spec)
    intervals = []
    for inst in plan.patterns:
        intervals += inst.on_windows()
    for leg in (plan.entrance_leg, plan.exit_leg):
        if leg[1] - leg[0] > 1e-9:
            intervals += reactive_schedule(plan.path, layout, prior_coverage,
                                           s_range=leg).intervals
    return SprayProgram.from_intervals(intervals, plan.path.length)


def schedule_for(plan, prior_coverage: Optional[CoverageGrid] = None) -> SprayProgram:
    """The switching logic that belongs to ``plan``'s method."""
    if plan.method == "alternative":
        return predictive_schedule(plan, prior_coverage)
    return reactive_schedule(plan.path, build_layout(plan.spec), prior_coverage)
