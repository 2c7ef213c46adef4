"""JSON documents for configs, plans and schedules, plus atomic file writes."""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

from .alternative import AlternativePlan, PatternInstance, SpecialCase
from .boustrophedon import BoustrophedonPlan, LaneWindow
from .field import FieldSpec
from .geometry import Annotation, Arc, Line, PlannedPath, Point, Role
from .switching import SprayProgram

PLAN_FORMAT = "spraypath.plan"
SCHEDULE_FORMAT = "spraypath.schedule"
DOC_VERSION = 1

CONFIG_KEYS = {"working_width_m", "lane_length_m", "lane_count", "turn_radius_m",
               "entrance", "method", "raster_cell_m", "outputs"}
CONFIG_METHODS = ("boustrophedon", "alternative", "both")
OUTPUT_FORMATS = ("json", "svg", "geojson", "pgm", "png")


class ConfigError(ValueError):
    pass


def write_atomic(path, data) -> Path:
    """Write ``data`` (str or bytes) to a temp file in the target directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    raw = data.encode("utf-8") if isinstance(data, str) else data
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(raw)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def dump_json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def read_json(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"{path}: file not found") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None


@dataclass(frozen=True)
class RunConfig:
    spec: FieldSpec
    method: str = "both"
    raster_cell: float = 0.25
    outputs: tuple = field(default_factory=lambda: ("json",))

    @property
    def methods(self) -> tuple:
        return ("boustrophedon", "alternative") if self.method == "both" else (self.method,)


def parse_config(doc: dict) -> RunConfig:
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    unknown = sorted(set(doc) - CONFIG_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    missing = [k for k in ("working_width_m", "lane_length_m", "lane_count", "turn_radius_m")
               if k not in doc]
    if missing:
        raise ConfigError(f"missing config keys: {', '.join(missing)}")
    spec = FieldSpec.from_json(doc)
    spec.validate()
    method = doc.get("method", "both")
    if method not in CONFIG_METHODS:
        raise ConfigError(f"method must be one of {CONFIG_METHODS}, got {method!r}")
    cell = doc.get("raster_cell_m", 0.25)
    if isinstance(cell, bool) or not isinstance(cell, (int, float)) or not cell > 0:
        raise ConfigError(f"raster_cell_m must be a positive number, got {cell!r}")
    outputs = doc.get("outputs", ["json"])
    if not isinstance(outputs, list) or any(o not in OUTPUT_FORMATS for o in outputs):
        raise ConfigError(f"outputs must be a list drawn from {OUTPUT_FORMATS}")
    return RunConfig(spec, method, float(cell), tuple(outputs))


def load_config(path) -> RunConfig:
    return parse_config(read_json(path))


def segment_to_json(seg, ann: Annotation) -> dict:
    if isinstance(seg, Line):
        doc = {"type": "line", "start": [seg.start.x, seg.start.y], "end": [seg.end.x, seg.end.y]}
    else:
        doc = {"type": "arc", "center": [seg.center.x, seg.center.y], "radius_m": seg.radius,
               "start_angle_rad": seg.start_angle, "sweep_rad": seg.sweep}
    doc["role"] = ann.role.value
    if ann.lane is not None:
        doc["lane"] = ann.lane
    return doc


def segment_from_json(doc: dict):
    if doc["type"] == "line":
        seg = Line(Point(*doc["start"]), Point(*doc["end"]))
    elif doc["type"] == "arc":
        seg = Arc(Point(*doc["center"]), doc["radius_m"], doc["start_angle_rad"], doc["sweep_rad"])
    else:
        raise ConfigError(f"unknown segment type {doc['type']!r}")
    return seg, Annotation(Role(doc["role"]), doc.get("lane"))


def path_to_json(path: PlannedPath) -> list:
    return [segment_to_json(s, a) for s, a in zip(path.segments, path.annotations)]


def path_from_json(docs: list) -> PlannedPath:
    pairs = [segment_from_json(d) for d in docs]
    return PlannedPath(tuple(p[0] for p in pairs), tuple(p[1] for p in pairs))


def plan_to_json(plan) -> dict:
    doc = {
        "format": PLAN_FORMAT,
        "version": DOC_VERSION,
        "method": plan.method,
        "field": plan.spec.to_json(),
        "length_m": plan.path.length,
        "segments": path_to_json(plan.path),
        "cum_length_m": list(plan.path.cum_length),
    }
    if plan.method == "boustrophedon":
        doc["exit_mode"] = plan.exit_mode
        doc["headland_window_m"] = list(plan.headland_window)
        doc["exit_window_m"] = list(plan.exit_window)
        doc["lane_windows"] = [{"lane": w.lane, "s_enter_m": w.s_enter, "s_exit_m": w.s_exit}
                               for w in plan.lane_windows]
    else:
        doc["pairing"] = plan.pairing
        doc["entrance_leg_m"] = list(plan.entrance_leg)
        doc["exit_leg_m"] = list(plan.exit_leg)
        doc["patterns"] = [{
            "lane_pair": list(p.lane_pair),
            "special_case": p.special_case.value,
            "waypoint_s_m": dict(p.waypoint_s),
            "transfer_length_m": p.transfer_length,
            "return_length_m": p.return_length,
        } for p in plan.patterns]
    return doc


def plan_from_json(doc: dict):
    if doc.get("format") != PLAN_FORMAT:
        raise ConfigError("not a plan document")
    spec = FieldSpec.from_json(doc["field"])
    path = path_from_json(doc["segments"])
    if doc["method"] == "boustrophedon":
        windows = tuple(LaneWindow(w["lane"], w["s_enter_m"], w["s_exit_m"])
                        for w in doc["lane_windows"])
        return BoustrophedonPlan(spec, path, windows, tuple(doc["headland_window_m"]),
                                 tuple(doc["exit_window_m"]), doc.get("exit_mode", "diagonal"))
    if doc["method"] == "alternative":
        patterns = tuple(PatternInstance(dict(p["waypoint_s_m"]), tuple(p["lane_pair"]),
                                         SpecialCase(p["special_case"]),
                                         p["transfer_length_m"], p["return_length_m"])
                         for p in doc["patterns"])
        return AlternativePlan(spec, path, patterns, tuple(doc["entrance_leg_m"]),
                               tuple(doc["exit_leg_m"]), doc.get("pairing", "adjacent"))
    raise ConfigError(f"unknown method {doc['method']!r}")


def load_plan(path):
    return plan_from_json(read_json(path))


def schedule_to_json(program: SprayProgram, method: str, spec: FieldSpec) -> dict:
    doc = program.to_json()
    doc.update({"format": SCHEDULE_FORMAT, "version": DOC_VERSION, "method": method,
                "field": spec.to_json(), "on_states": len(program)})
    return doc


def load_schedule_doc(path) -> dict:
    doc = read_json(path)
    if doc.get("format") != SCHEDULE_FORMAT:
        raise ConfigError(f"{path}: not a schedule document")
    return doc
