import math

import pytest

from spraypath import (FieldSpec, GeometryInfeasible, Role, SpecialCase, build_layout,
                       build_pattern, headland_projection_distance, plan_alternative)
from spraypath.alternative import WAYPOINTS, lane_pairs
from spraypath.analytics import pathlength_formula, per_lane_term
from spraypath.geometry import Point, Pose

R = 5.0


def _unit_pattern(spec, pair=(2, 1), advance=24.0):
    layout = build_layout(spec)
    start = Pose(Point(layout.lane_x[pair[1] - 1] + spec.turn_radius, layout.headland[1]), 0.0)
    return layout, start, build_pattern(layout, pair, start, advance=advance)


def test_unit_pattern_has_four_turns(small_even):
    _, _, (path, _) = _unit_pattern(small_even)
    assert sum(a.role == Role.TURN for a in path.annotations) == 4


def test_unit_pattern_closes_loop_at_a(small_even):
    _, start, (path, inst) = _unit_pattern(small_even)
    w = inst.waypoint_s
    assert w["A'"] > w["L"]
    assert path.point_at(w["A'"]).dist(start.position) < 1e-6


def test_waypoints_strictly_increase(small_even):
    _, _, (_, inst) = _unit_pattern(small_even)
    stamps = [inst.waypoint_s[k] for k in WAYPOINTS]
    assert all(a < b for a, b in zip(stamps, stamps[1:]))


def test_spray_waypoints_sit_half_width_from_headland(small_even):
    layout, _, (path, inst) = _unit_pattern(small_even)
    for key in "DEJK":
        d = headland_projection_distance(path.point_at(inst.waypoint_s[key]), layout)
        assert d == pytest.approx(6.0, abs=1e-6)


def test_spray_waypoints_inside_their_lanes(small_even):
    _, _, (path, inst) = _unit_pattern(small_even)
    w = inst.waypoint_s
    first = path.annotations[path.locate((w["D"] + w["E"]) / 2)]
    second = path.annotations[path.locate((w["J"] + w["K"]) / 2)]
    assert (first.role, first.lane) == (Role.LANE, 2)
    assert (second.role, second.lane) == (Role.LANE, 1)


def test_pattern_metadata_lengths(small_even):
    _, _, (_, inst) = _unit_pattern(small_even)
    assert inst.transfer_length == pytest.approx(12.0 - 2 * R)
    assert inst.return_length == pytest.approx(24.0)


def test_lanes_closer_than_two_radii_are_infeasible():
    spec = FieldSpec(12.0, 100.0, 4, 6.0)
    layout = build_layout(spec)
    start = Pose(Point(layout.lane_x[0] + 6.0, layout.headland[1]), 0.0)
    build_pattern(layout, (2, 1), start, advance=24.0)   # spacing 12 == 2R is fine
    narrow = FieldSpec(10.0, 100.0, 4, 4.0)
    lay = build_layout(narrow)
    bad_start = Pose(Point(lay.lane_x[0] + 4.0, lay.headland[1]), 0.0)
    with pytest.raises(GeometryInfeasible):
        build_pattern(lay, (1, 1), bad_start)
    with pytest.raises(GeometryInfeasible):
        build_pattern(lay, (2, 1), Pose(Point(0.0, 0.0), 0.0))


def test_even_plan_length_and_patterns(small_even):
    plan = plan_alternative(small_even)
    assert plan.length == pytest.approx(742, rel=0.02)
    assert len(plan.patterns) == 2
    assert plan.patterns[-1].special_case == SpecialCase.PROLONGED_HEADLAND
    assert plan.patterns[0].special_case == SpecialCase.NONE


def test_odd_plan_length_and_special_case():
    plan = plan_alternative(FieldSpec(36.0, 100.0, 51, R))
    assert plan.length == pytest.approx(10784, rel=0.02)
    assert len(plan.patterns) == 26
    last = plan.patterns[-1]
    assert last.special_case == SpecialCase.PROLONGED_REPLACING_LANE
    assert last.lane_pair == (None, 51)
    assert "D" not in last.waypoint_s


@pytest.mark.parametrize("N", [4, 6, 10, 20])
def test_even_counts(N):
    assert len(plan_alternative(FieldSpec(12.0, 100.0, N, R)).patterns) == N // 2


@pytest.mark.parametrize("W,H", [(12.0, 100.0), (36.0, 500.0)])
@pytest.mark.parametrize("N", [4, 5])
def test_finite_difference_slope(W, H, N):
    a = plan_alternative(FieldSpec(W, H, N, R)).length
    b = plan_alternative(FieldSpec(W, H, N + 2, R)).length
    assert b - a == pytest.approx(2 * per_lane_term("alternative", W, H, R), rel=1e-3)


def test_per_lane_term_value():
    assert per_lane_term("alternative", 12.0, 100.0, R) == pytest.approx(131.708, abs=1e-3)


@pytest.mark.parametrize("N", [4, 5, 8, 9])
def test_measured_length_equals_formula(N):
    plan = plan_alternative(FieldSpec(12.0, 100.0, N, R))
    assert plan.length == pytest.approx(pathlength_formula("alternative", N, 12.0, 100.0, R),
                                        abs=1e-6)


def test_lane_bijection_and_chaining(small_odd):
    plan = plan_alternative(small_odd)
    lanes = [l for p in plan.patterns for l in p.lane_pair if l is not None]
    assert sorted(lanes) == [1, 2, 3, 4, 5]
    for prev, nxt in zip(plan.patterns, plan.patterns[1:]):
        assert plan.path.point_at(prev.waypoint_s["M"]).dist(
            plan.path.point_at(nxt.waypoint_s["A"])) < 1e-6


def test_plan_starts_and_ends_at_entrance(small_odd):
    plan = plan_alternative(small_odd)
    entrance = build_layout(small_odd).entrance_pose
    assert plan.path.start_pose.matches(entrance)
    assert plan.path.end_pose.matches(entrance)
    assert plan.entrance_leg == (0.0, pytest.approx(12.0))
    assert plan.exit_leg[0] == plan.exit_leg[1] == plan.length


def test_odd_right_headland_edge_driven_twice(small_odd):
    plan = plan_alternative(small_odd)
    xr = build_layout(small_odd).headland[2]
    on_edge = [s for s in plan.path.segments
               if hasattr(s, "start") and abs(s.start.x - xr) < 1e-9 and abs(s.end.x - xr) < 1e-9]
    assert len(on_edge) == 2


@pytest.mark.parametrize("entrance", ["SE", "NW", "NE"])
def test_mirrored_entrances(entrance):
    spec = FieldSpec(12.0, 100.0, 5, R, entrance)
    plan = plan_alternative(spec)
    assert plan.length == pytest.approx(plan_alternative(spec.with_entrance("SW")).length)
    assert plan.path.end_pose.matches(plan.path.start_pose)
    lanes = sorted(l for p in plan.patterns for l in p.lane_pair if l is not None)
    assert lanes == [1, 2, 3, 4, 5]


def test_skip_pairing_misses_the_slope():
    # interleaved pairing drives longer headland stretches per lane
    a = plan_alternative(FieldSpec(12.0, 100.0, 8, R), pairing="skip").length
    b = plan_alternative(FieldSpec(12.0, 100.0, 12, R), pairing="skip").length
    slope = (b - a) / 4
    assert abs(slope - per_lane_term("alternative", 12.0, 100.0, R)) > 1e-3 * slope


def test_skip_pairing_needs_multiple_of_four():
    with pytest.raises(GeometryInfeasible):
        lane_pairs(6, "skip")
    assert lane_pairs(8, "skip") == [(3, 1), (4, 2), (7, 5), (8, 6)]
    assert lane_pairs(5) == [(2, 1), (4, 3), (None, 5)]
