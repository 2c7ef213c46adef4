"""Baseline plan: full headland ring, then lanes 1..N in meander order."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .field import FieldSpec, Layout, build_layout
from .geometry import PathBuilder, PlannedPath, Point, Role

EXIT_MODES = ("diagonal", "entrance")


@dataclass(frozen=True)
class LaneWindow:
    lane: int
    s_enter: float
    s_exit: float


@dataclass(frozen=True)
class BoustrophedonPlan:
    spec: FieldSpec
    path: PlannedPath
    lane_windows: tuple
    headland_window: tuple   # (s_start, s_end) of the initial full ring
    exit_window: tuple       # (s_start, s_end) of the headland return leg
    exit_mode: str = "diagonal"

    method = "boustrophedon"

    @property
    def length(self) -> float:
        return self.path.length


def _return_leg(layout: Layout, b: PathBuilder, lane_ends_top: bool, mode: str):
    """Append the turn off the last lane plus the headland route to the exit corner.

    ``diagonal`` targets the entrance-side corner diagonally opposite the end of
    the last lane; ``entrance`` always targets the entrance corner.  Either way
    the shorter ring direction is used, ties going clockwise.
    """
    xl, yb, xr, yt = layout.headland
    R = layout.R
    ring = layout.headland_ring
    if mode == "entrance" or lane_ends_top:
        target_u = ring.length          # SW tangent point, reached heading east
        target = Point(xl + R, yb)
    else:
        target_u = ring.cum_length[5]   # NW tangent point on the top edge
        target = Point(xl + R, yt)

    x = b.pose.x
    y_edge = yt if lane_ends_top else yb
    heading_north = lane_ends_top
    options = []
    for ccw in (False, True):
        # left turns follow the ring counter-clockwise, right turns clockwise
        direction = 1 if ccw else -1
        # moving north a left turn goes west; moving south a left turn goes east
        dx = -R if (ccw == heading_north) else R
        u_join = layout.ring_param(Point(x + dx, y_edge))
        L = ring.length
        dist = (target_u - u_join) % L if ccw else (u_join - target_u) % L
        options.append((dist, ccw, direction, u_join))
    cw_opt, ccw_opt = options
    chosen = ccw_opt if ccw_opt[0] < cw_opt[0] - 1e-9 else cw_opt
    _, ccw, direction, u_join = chosen
    b.turn(direction, R, role=Role.TURN)
    s_start = b.s
    b.extend(layout.ring_leg(u_join, target_u, ccw=ccw), Role.HEADLAND)
    assert b.pose.position.dist(target) < 1e-6
    return s_start


def plan_boustrophedon(spec: FieldSpec, exit_mode: str = "diagonal") -> BoustrophedonPlan:
    """Ring first, then lanes in adjacent order with headland-mediated transitions."""
    if exit_mode not in EXIT_MODES:
        raise ValueError(f"exit_mode must be one of {EXIT_MODES}")
    layout = build_layout(spec)
    W, H, N, R = spec.working_width, spec.lane_length, spec.lane_count, spec.turn_radius

    b = PathBuilder(layout.entrance_pose)
    b.extend(layout.headland_ring.segments, Role.HEADLAND)
    headland_window = (0.0, b.s)

    b.straight(W - 2 * R, Role.TRANSFER)
    windows = []
    for i in range(1, N + 1):
        north = i % 2 == 1
        # enter lane i: left turn from eastbound when going north, right turn when going south
        b.turn(1 if north else -1, R)
        s_in = b.s
        b.straight(H - 2 * R, Role.LANE, lane=i)
        windows.append(LaneWindow(i, s_in, b.s))
        if i < N:
            b.turn(-1 if north else 1, R)
            b.straight(W - 2 * R, Role.TRANSFER)

    lane_ends_top = N % 2 == 1
    s_exit = windows[-1].s_exit
    _return_leg(layout, b, lane_ends_top, exit_mode)
    path = b.build()

    if spec.entrance != "SW":
        mx, my = layout.mirror_for(spec.entrance)
        lane_map = layout.lane_map_for(spec.entrance)
        path = path.mirrored(mx, my, lane_map)
        windows = [LaneWindow(lane_map(w.lane), w.s_enter, w.s_exit) for w in windows]

    return BoustrophedonPlan(
        spec=spec,
        path=path,
        lane_windows=tuple(windows),
        headland_window=headland_window,
        exit_window=(s_exit, path.length),
        exit_mode=exit_mode,
    )
