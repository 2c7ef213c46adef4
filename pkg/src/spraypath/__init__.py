"""Coverage paths with a headland ring and full-boom spray switching schedules."""

__version__ = "0.1.0"

from .field import FieldSpec, InvalidSpec, Layout, build_layout, headland_projection_distance
from .geometry import (Arc, Line, PlannedPath, Point, Pose, Role, discretize, path_length)
from .boustrophedon import BoustrophedonPlan, plan_boustrophedon
from .alternative import (AlternativePlan, GeometryInfeasible, PatternInstance, SpecialCase,
                          build_pattern, plan_alternative)
from .switching import (SprayProgram, SwitchEvent, count_on_states, predictive_schedule,
                        reactive_schedule)
from .coverage import CellTooCoarse, CoverageGrid, CoverageReport, coverage_report, rasterize
from .analytics import (AnalyticConstants, ComparisonRow, area_ha, build_comparison_table,
                        deltas, on_count_formula, pathlength_formula, time_savings)

__all__ = [
    "AlternativePlan", "AnalyticConstants", "Arc", "BoustrophedonPlan", "CellTooCoarse",
    "ComparisonRow", "CoverageGrid", "CoverageReport", "FieldSpec", "GeometryInfeasible",
    "InvalidSpec", "Layout", "Line", "PatternInstance", "PlannedPath", "Point", "Pose", "Role",
    "SpecialCase", "SprayProgram", "SwitchEvent", "area_ha", "build_comparison_table",
    "build_layout", "build_pattern", "count_on_states", "coverage_report", "deltas",
    "discretize", "headland_projection_distance", "on_count_formula", "path_length",
    "pathlength_formula", "plan_alternative", "plan_boustrophedon", "predictive_schedule",
    "rasterize", "reactive_schedule", "time_savings",
]
