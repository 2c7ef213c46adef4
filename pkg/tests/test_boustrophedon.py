import math

import pytest

from spraypath import FieldSpec, InvalidSpec, Role, build_layout, plan_boustrophedon
from spraypath.analytics import pathlength_formula, per_lane_term

R = 5.0


def test_even_length_matches_table(small_even):
    assert plan_boustrophedon(small_even).length == pytest.approx(886, rel=0.02)


def test_large_even_length_matches_table():
    plan = plan_boustrophedon(FieldSpec(36.0, 100.0, 50, R))
    assert plan.length == pytest.approx(12345, rel=0.02)


@pytest.mark.parametrize("W,H", [(12.0, 100.0), (36.0, 500.0)])
@pytest.mark.parametrize("N", [4, 5])
def test_finite_difference_slope(W, H, N):
    a = plan_boustrophedon(FieldSpec(W, H, N, R)).length
    b = plan_boustrophedon(FieldSpec(W, H, N + 2, R)).length
    assert b - a == pytest.approx(2 * per_lane_term("boustrophedon", W, H, R), rel=1e-3)


@pytest.mark.parametrize("parity_start", [4, 5])
def test_residual_constant_per_parity(parity_start):
    residuals = []
    for N in range(parity_start, parity_start + 12, 2):
        measured = plan_boustrophedon(FieldSpec(12.0, 100.0, N, R)).length
        residuals.append(measured - pathlength_formula("boustrophedon", N, 12.0, 100.0, R))
    assert max(residuals) - min(residuals) < 1e-6


def test_odd_residual_is_two_radii_even_is_zero():
    odd = plan_boustrophedon(FieldSpec(12.0, 100.0, 5, R)).length
    even = plan_boustrophedon(FieldSpec(12.0, 100.0, 4, R)).length
    assert odd - pathlength_formula("boustrophedon", 5, 12.0, 100.0, R) == pytest.approx(2 * R)
    assert even - pathlength_formula("boustrophedon", 4, 12.0, 100.0, R) == pytest.approx(0, abs=1e-9)


def test_ring_window_is_one_full_ring(small_odd):
    plan = plan_boustrophedon(small_odd)
    s0, s1 = plan.headland_window
    assert s0 == 0.0
    assert s1 - s0 == pytest.approx(build_layout(small_odd).ring_length, abs=1e-6)


def test_lane_windows_in_order_and_disjoint(small_odd):
    plan = plan_boustrophedon(small_odd)
    assert [w.lane for w in plan.lane_windows] == [1, 2, 3, 4, 5]
    prev = plan.headland_window[1]
    for w in plan.lane_windows:
        assert prev <= w.s_enter < w.s_exit <= plan.length
        assert w.s_exit - w.s_enter == pytest.approx(100.0 - 2 * R)
        prev = w.s_exit


def test_each_lane_segment_driven_once(small_even):
    plan = plan_boustrophedon(small_even)
    lanes = [a.lane for a in plan.path.annotations if a.role == Role.LANE]
    assert sorted(lanes) == [1, 2, 3, 4]


def test_lanes_alternate_direction(small_even):
    plan = plan_boustrophedon(small_even)
    headings = [s.heading for s, a in zip(plan.path.segments, plan.path.annotations)
                if a.role == Role.LANE]
    assert headings == pytest.approx([math.pi / 2, -math.pi / 2] * 2)


def test_starts_at_entrance_and_diagonal_exit(small_even, small_odd):
    layout = build_layout(small_even)
    plan = plan_boustrophedon(small_even)
    assert plan.path.start_pose.matches(layout.entrance_pose)
    end = plan.path.end_pose.position
    xl, yb, xr, yt = layout.headland
    assert (end.x, end.y) == pytest.approx((xl + R, yt))
    odd = plan_boustrophedon(small_odd)
    assert odd.path.end_pose.matches(build_layout(small_odd).entrance_pose)


def test_entrance_exit_mode_returns_home(small_even):
    plan = plan_boustrophedon(small_even, exit_mode="entrance")
    # the shorter way home runs westwards along the bottom edge
    assert plan.path.end_pose.position.dist(plan.path.start_pose.position) < 1e-6
    with pytest.raises(ValueError):
        plan_boustrophedon(small_even, exit_mode="anywhere")


@pytest.mark.parametrize("entrance", ["SE", "NW", "NE"])
def test_other_entrances_mirror_lengths(entrance):
    base = plan_boustrophedon(FieldSpec(12.0, 100.0, 5, R))
    plan = plan_boustrophedon(FieldSpec(12.0, 100.0, 5, R, entrance))
    assert plan.length == pytest.approx(base.length)
    corner = plan.path.start_pose.position
    cx, cy = build_layout(plan.spec).mirror_axes
    assert (corner.x > cx) == (entrance in ("SE", "NE"))
    assert (corner.y > cy) == (entrance in ("NW", "NE"))
    if entrance in ("SE", "NE"):
        assert plan.lane_windows[0].lane == 5


def test_invalid_spec_propagates():
    with pytest.raises(InvalidSpec):
        plan_boustrophedon(FieldSpec(12.0, 100.0, 5, 13.0))
