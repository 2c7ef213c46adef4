"""Alternative plan built from concatenated two-lane A-M patterns.

One pattern (canonical SW frame, all turns to the left)::

    A-B   bottom headland, eastbound           (first visit, not sprayed)
    B-C   turn into the eastern lane
    C-F   eastern lane northbound, contains D, E
    F-G   turn onto the top headland
    G-H   top headland westbound
    H-I   turn into the western lane
    I-L   western lane southbound, contains J, K
    L-A   turn back onto the bottom headland, landing on A heading east
    A-M   bottom headland eastbound up to the next pattern's A

The last pattern's A-M is prolonged around the ring back to the entrance.
For odd lane counts the last pattern has a single lane; the eastern slot is
taken by the right-most headland edge, which is then driven twice.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .field import FieldSpec, Layout, build_layout
from .geometry import PathBuilder, PlannedPath, Pose, Point, Role

WAYPOINTS = ("A", "B", "C", "D", "E", "F", "G", "H", "I", "J", "K", "L", "A'", "M")
PAIRINGS = ("adjacent", "skip")


class GeometryInfeasible(ValueError):
    pass


class SpecialCase(str, Enum):
    NONE = "none"
    PROLONGED_HEADLAND = "prolonged_headland"
    PROLONGED_REPLACING_LANE = "prolonged_replacing_lane"


@dataclass(frozen=True)
class PatternInstance:
    waypoint_s: dict
    lane_pair: tuple            # (first lane driven, second lane driven); None = replaced
    special_case: SpecialCase = SpecialCase.NONE
    transfer_length: float = 0.0    # G-H
    return_length: float = 0.0      # A'-M

    def on_windows(self) -> list:
        """The pattern's own spray windows: D-E, J-K and A'-M (missing ones skipped)."""
        w = self.waypoint_s
        out = []
        for a, b in (("D", "E"), ("J", "K"), ("A'", "M")):
            if a in w and b in w:
                out.append((w[a], w[b]))
        return out


@dataclass(frozen=True)
class AlternativePlan:
    spec: FieldSpec
    path: PlannedPath
    patterns: tuple
    entrance_leg: tuple
    exit_leg: tuple
    pairing: str = "adjacent"

    method = "alternative"

    @property
    def length(self) -> float:
        return self.path.length


def _lane_sprays(layout: Layout, s_lane_start: float) -> tuple:
    """Arc-length stamps where a lane straight is W/2 away from the headland centerline."""
    W, R, H = layout.W, layout.R, layout.spec.lane_length
    return s_lane_start + (W / 2 - R), s_lane_start + (H - W / 2 - R)


def build_pattern(layout: Layout, lane_pair: tuple, start_pose: Pose, *,
                  advance: Optional[float] = None, s0: float = 0.0):
    """Segments and waypoint stamps of one pattern starting at waypoint A.

    ``lane_pair`` is ``(east_lane, west_lane)`` in driving order; ``east_lane``
    may be None for the odd-count terminal pattern, where the right headland
    edge takes its place.  ``advance`` is the length of the straight A'-M to the
    next pattern's A; ``None`` prolongs A-M along the ring to the entrance.
    Works in the canonical SW frame.
    """
    W, H, R = layout.W, layout.spec.lane_length, layout.R
    xl, yb, xr, yt = layout.headland
    east, west = lane_pair
    if west is None or not 1 <= west <= layout.N:
        raise GeometryInfeasible(f"invalid western lane {west}")
    if abs(start_pose.y - yb) > 1e-6 or abs(start_pose.heading) > 1e-6:
        raise GeometryInfeasible("pattern must start on the bottom headland heading east")
    x_west = layout.lane_x[west - 1]
    if abs(start_pose.x - (x_west + R)) > 1e-6:
        raise GeometryInfeasible("waypoint A must sit one turn radius east of the western lane")
    x_east = layout.lane_x[east - 1] if east is not None else xr
    if east is not None and not (west < east <= layout.N):
        raise GeometryInfeasible(f"eastern lane {east} must lie east of lane {west}")
    if x_east - x_west < 2 * R - 1e-9:
        raise GeometryInfeasible(
            f"lanes {west} and {east} are {x_east - x_west} m apart, need >= 2R = {2 * R}")

    b = PathBuilder(start_pose)
    w = {"A": 0.0}
    b.straight(x_east - R - start_pose.x, Role.HEADLAND)
    w["B"] = b.s
    if east is not None:
        special = SpecialCase.PROLONGED_HEADLAND if advance is None else SpecialCase.NONE
        b.turn(1, R)
        w["C"] = b.s
        w["D"], w["E"] = _lane_sprays(layout, b.s)
        b.straight(H - 2 * R, Role.LANE, lane=east)
        w["F"] = b.s
        b.turn(1, R)
    else:
        special = SpecialCase.PROLONGED_REPLACING_LANE
        b.turn(1, R, role=Role.HEADLAND)
        w["C"] = b.s
        b.straight(H - 2 * R, Role.HEADLAND)
        w["F"] = b.s
        b.turn(1, R, role=Role.HEADLAND)
    w["G"] = b.s
    b.straight(x_east - x_west - 2 * R, Role.HEADLAND)
    w["H"] = b.s
    transfer = w["H"] - w["G"]
    b.turn(1, R)
    w["I"] = b.s
    w["J"], w["K"] = _lane_sprays(layout, b.s)
    b.straight(H - 2 * R, Role.LANE, lane=west)
    w["L"] = b.s
    b.turn(1, R)
    w["A'"] = b.s
    if not b.pose.matches(start_pose):
        raise AssertionError("L-A turn did not close the loop at A")
    if advance is None:
        u = layout.ring_param(b.pose.position)
        b.extend(layout.ring_leg(u, layout.ring_length, ccw=True), Role.HEADLAND)
    else:
        b.straight(advance, Role.HEADLAND)
    w["M"] = b.s

    stamps = {k: s0 + v for k, v in w.items()}
    inst = PatternInstance(stamps, (east, west), special, transfer, w["M"] - w["A'"])
    return b.build(), inst


def _snap_to_joints(inst: PatternInstance, cum_length, tol: float = 1e-9) -> PatternInstance:
    """Replace stamps that sit on a segment joint by the joint's exact arc length."""
    joints = np.asarray(cum_length)
    stamps = {}
    for key, s in inst.waypoint_s.items():
        k = int(np.abs(joints - s).argmin())
        stamps[key] = float(joints[k]) if abs(joints[k] - s) < tol else s
    return PatternInstance(stamps, inst.lane_pair, inst.special_case,
                           inst.transfer_length, inst.return_length)


def lane_pairs(n_lanes: int, pairing: str = "adjacent") -> list:
    """``(east, west)`` lane pairs in driving order; odd counts end with ``(None, N)``."""
    if pairing == "adjacent":
        pairs = [(j + 1, j) for j in range(1, n_lanes, 2)]
        if n_lanes % 2:
            pairs.append((None, n_lanes))
        return pairs
    if pairing == "skip":
        if n_lanes % 4:
            raise GeometryInfeasible("skip pairing needs a lane count divisible by 4")
        pairs = []
        for base in range(1, n_lanes + 1, 4):
            pairs += [(base + 2, base), (base + 3, base + 1)]
        return pairs
    raise ValueError(f"pairing must be one of {PAIRINGS}")


def plan_alternative(spec: FieldSpec, pairing: str = "adjacent") -> AlternativePlan:
    """Entrance leg, concatenated patterns, prolonged final A-M back to the entrance."""
    layout = build_layout(spec)
    R = spec.turn_radius
    pairs = lane_pairs(spec.lane_count, pairing)

    start = layout.entrance_pose
    first_a = layout.lane_x[pairs[0][1] - 1] + R
    b = PathBuilder(start)
    b.straight(first_a - start.x, Role.HEADLAND)
    entrance_leg = (0.0, b.s)
    path = b.build()

    patterns = []
    pose = Pose(Point(first_a, start.y), 0.0)
    for k, pair in enumerate(pairs):
        last = k == len(pairs) - 1
        if last:
            advance = None
        else:
            advance = layout.lane_x[pairs[k + 1][1] - 1] - layout.lane_x[pair[1] - 1]
            if advance <= 0:
                raise GeometryInfeasible("patterns must advance eastwards")
        piece, inst = build_pattern(layout, pair, pose, advance=advance, s0=path.length)
        path = path.concat(piece)
        patterns.append(inst)
        pose = path.end_pose
    exit_leg = (path.length, path.length)

    if spec.entrance != "SW":
        mx, my = layout.mirror_for(spec.entrance)
        lane_map = layout.lane_map_for(spec.entrance)
        path = path.mirrored(mx, my, lane_map)
        patterns = [PatternInstance(p.waypoint_s,
                                    tuple(None if l is None else lane_map(l) for l in p.lane_pair),
                                    p.special_case, p.transfer_length, p.return_length)
                    for p in patterns]
        exit_leg = (path.length, path.length)
    patterns = [_snap_to_joints(p, path.cum_length) for p in patterns]

    return AlternativePlan(spec, path, tuple(patterns), entrance_leg, exit_leg, pairing)
