"""Randomized structural checks over valid field specs."""

import pytest
from hypothesis import given, settings

from spraypath import (Role, build_layout, count_on_states, plan_alternative, plan_boustrophedon,
                       predictive_schedule, reactive_schedule)
from spraypath.analytics import on_count_formula
from spraypath.geometry import joint_errors
from spraypath.verify import sprayed_turn_length

from conftest import field_specs


def _continuous(path):
    return all(d <= 1e-6 and h <= 1e-6 for d, h in joint_errors(path))


@settings(max_examples=200)
@given(field_specs())
def test_alternative_structure(spec):
    plan = plan_alternative(spec)
    assert _continuous(plan.path)
    lanes = [l for p in plan.patterns for l in p.lane_pair if l is not None]
    assert sorted(lanes) == list(range(1, spec.lane_count + 1))
    for prev, nxt in zip(plan.patterns, plan.patterns[1:]):
        assert plan.path.point_at(prev.waypoint_s["M"]).dist(
            plan.path.point_at(nxt.waypoint_s["A"])) <= 1e-6
    prog = predictive_schedule(plan)
    assert sprayed_turn_length(plan.path, prog, (plan.entrance_leg, plan.exit_leg)) == 0.0
    assert count_on_states(prog) == on_count_formula("alternative", spec.lane_count)
    prev_end = 0.0
    for a, b in prog.intervals:
        assert prev_end <= a < b <= plan.length + 1e-9
        prev_end = b


@settings(max_examples=200)
@given(field_specs(max_lanes=8))
def test_boustrophedon_structure(spec):
    plan = plan_boustrophedon(spec)
    assert _continuous(plan.path)
    lanes = [a.lane for a in plan.path.annotations if a.role == Role.LANE]
    assert sorted(lanes) == list(range(1, spec.lane_count + 1))
    prog = reactive_schedule(plan.path, build_layout(spec))
    assert count_on_states(prog) == spec.lane_count + 1
    assert sprayed_turn_length(plan.path, prog) == 0.0


@settings(max_examples=200)
@given(field_specs())
def test_turns_join_lane_and_headland(spec):
    for plan in (plan_boustrophedon(spec), plan_alternative(spec)):
        roles = plan.path.roles()
        for k, role in enumerate(roles):
            if role != Role.TURN:
                continue
            before = roles[k - 1] if k > 0 else None
            after = roles[k + 1] if k + 1 < len(roles) else None
            assert (before == Role.LANE) != (after == Role.LANE)
