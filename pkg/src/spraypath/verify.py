"""Reconcile generated plans against the closed-form formulas and the raster oracle."""

from __future__ import annotations

from typing import Optional

from . import __version__
from .alternative import plan_alternative
from .analytics import on_count_formula, pathlength_formula, per_lane_term
from .boustrophedon import plan_boustrophedon
from .coverage import coverage_report, rasterize
from .field import FieldSpec, build_layout
from .geometry import Role
from .switching import InvalidProgram, SprayProgram, count_on_states, schedule_for

LENGTH_REL_TOL = 0.02
MIN_COVERAGE = 0.995
MAX_OVERLAP = 0.01

PLANNERS = {"boustrophedon": plan_boustrophedon, "alternative": plan_alternative}


def make_plan(spec: FieldSpec, method: str):
    try:
        return PLANNERS[method](spec)
    except KeyError:
        raise ValueError(f"unknown method {method!r}") from None


def length_residual(spec: FieldSpec, method: str, plan=None) -> float:
    """Measured pathlength minus the closed-form value."""
    plan = plan or make_plan(spec, method)
    W, H, N, R = spec.working_width, spec.lane_length, spec.lane_count, spec.turn_radius
    return plan.path.length - pathlength_formula(method, N, W, H, R)


def turn_windows(path) -> list:
    return [path.window(k) for k, a in enumerate(path.annotations) if a.role == Role.TURN]


def sprayed_turn_length(path, program: SprayProgram, exempt=()) -> float:
    """Arc length of turn segments that lie inside ON intervals (outside ``exempt`` ranges)."""
    total = 0.0
    for t0, t1 in turn_windows(path):
        for a, b in program.intervals:
            lo, hi = max(a, t0), min(b, t1)
            for e0, e1 in exempt:
                if e0 <= lo and hi <= e1:
                    lo = hi
            total += max(0.0, hi - lo)
    return total


def verify_method(spec: FieldSpec, method: str, cell: float = 0.25,
                  program: Optional[SprayProgram] = None, raw_intervals=None) -> dict:
    """Report for one method: length and ON-count reconciliation plus raster coverage.

    ``raw_intervals`` (list of pairs) stands in for an externally supplied
    schedule; it is validated here and an invalid one fails the report.
    """
    plan = make_plan(spec, method)
    layout = build_layout(spec)
    W, H, N, R = spec.working_width, spec.lane_length, spec.lane_count, spec.turn_radius
    checks = {}
    problems = []
    if raw_intervals is not None:
        try:
            program = SprayProgram(tuple(tuple(iv) for iv in raw_intervals), plan.path.length)
            checks["schedule_valid"] = True
        except (InvalidProgram, TypeError, ValueError) as exc:
            checks["schedule_valid"] = False
            problems.append(f"schedule invalid: {exc}")
            program = SprayProgram((), plan.path.length)
    if program is None:
        program = schedule_for(plan)

    measured = plan.path.length
    formula = pathlength_formula(method, N, W, H, R)
    residual = measured - formula
    rel = abs(residual) / formula
    # the offset must not drift with N inside one parity class
    bigger = FieldSpec(W, H, N + 2, R, spec.entrance)
    residual_next = length_residual(bigger, method)
    checks["length_within_2pct"] = rel <= LENGTH_REL_TOL
    checks["residual_parity_stable"] = abs(residual_next - residual) <= 1e-6

    on_measured = count_on_states(program)
    on_formula = on_count_formula(method, N)
    checks["on_count_matches"] = on_measured == on_formula

    exempt = ()
    if method == "alternative":
        exempt = (plan.entrance_leg, plan.exit_leg)
        checks["turns_never_sprayed"] = sprayed_turn_length(plan.path, program, exempt) <= 1e-9

    grid = rasterize(plan.path, program, W, cell, layout=layout)
    cov = coverage_report(grid, layout)
    checks["coverage_ratio_ok"] = cov.coverage_ratio >= MIN_COVERAGE
    checks["overlap_ratio_ok"] = cov.overlap_ratio <= MAX_OVERLAP

    for name, ok in checks.items():
        if not ok and name != "schedule_valid":
            problems.append(name)
    return {
        "method": method,
        "length_measured_m": measured,
        "length_formula_m": formula,
        "length_residual_m": residual,
        "length_residual_relative": rel,
        "length_residual_at_N_plus_2_m": residual_next,
        "per_lane_term_m": per_lane_term(method, W, H, R),
        "on_states_measured": on_measured,
        "on_states_formula": on_formula,
        "coverage": cov.to_json(),
        "checks": checks,
        "passed": all(checks.values()),
        "problems": problems,
        "_grid": grid,
    }


def verify_report(spec: FieldSpec, methods, cell: float = 0.25, schedules=None) -> tuple:
    """Report document and per-method grids; ``schedules`` maps method to raw interval lists."""
    schedules = schedules or {}
    results = [verify_method(spec, m, cell, raw_intervals=schedules.get(m)) for m in methods]
    grids = {r["method"]: r.pop("_grid") for r in results}
    report = {
        "version": __version__,
        "field": spec.to_json(),
        "raster_cell_m": cell,
        "thresholds": {"length_relative": LENGTH_REL_TOL, "min_coverage_ratio": MIN_COVERAGE,
                       "max_overlap_ratio": MAX_OVERLAP},
        "assumptions": {
            "headland_corners": "arcs of radius turn_radius",
            "corner_slivers": "outer corner slivers excluded from the target region",
        },
        "methods": results,
        "passed": all(r["passed"] for r in results),
    }
    return report, grids
