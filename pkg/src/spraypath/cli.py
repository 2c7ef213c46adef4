"""Command-line front end.

    spraypath plan|schedule|verify|tables|export [--config PATH] [--method M]
              [--cell METERS] [--strict] [--out DIR]

Exit codes: 0 ok, 1 verification failure under --strict, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import logging
import sys
from pathlib import Path

from . import __version__
from .alternative import GeometryInfeasible
from .analytics import CSV_COLUMNS, build_comparison_table, table_setups
from .coverage import CellTooCoarse
from .field import InvalidSpec
from .io import (ConfigError, RunConfig, dump_json, load_config, load_plan, load_schedule_doc,
                 plan_to_json, schedule_to_json, write_atomic)
from .switching import InvalidProgram, SprayProgram, schedule_for
from .verify import make_plan, verify_report


COMMANDS = ("plan", "schedule", "verify", "tables", "export")
EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spraypath", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"spraypath {__version__}")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", type=Path, help="field configuration JSON")
    p.add_argument("--method", choices=("boustrophedon", "alternative", "both"),
                   help="overrides the config's method")
    p.add_argument("--cell", type=float, help="raster cell size in metres")
    p.add_argument("--strict", action="store_true", help="exit 1 when verification fails")
    p.add_argument("--out", type=Path, default=Path("."), help="output directory")
    p.add_argument("--plan", type=Path, help="plan JSON (schedule, export)")
    p.add_argument("--schedule", type=Path, help="schedule JSON (verify, export)")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _config(args) -> RunConfig:
    if args.config is None:
        raise UsageError(f"{args.command} needs --config")
    cfg = load_config(args.config)
    if args.method:
        cfg = RunConfig(cfg.spec, args.method, cfg.raster_cell, cfg.outputs)
    if args.cell is not None:
        if not args.cell > 0:
            raise UsageError("--cell must be positive")
        cfg = RunConfig(cfg.spec, cfg.method, args.cell, cfg.outputs)
    return cfg


def _name(stem: str, method: str, methods: tuple, ext: str) -> str:
    return f"{stem}.{ext}" if len(methods) == 1 else f"{stem}_{method}.{ext}"


def _write(path: Path, data) -> None:
    write_atomic(path, data)
    print(f"wrote {path}")


def _export_files(plan, program, out: Path, formats) -> None:
    from .export import render_geojson, render_svg
    if "svg" in formats:
        _write(out / f"{plan.method}.svg", render_svg(plan, program))
    if "geojson" in formats:
        _write(out / f"{plan.method}.geojson", dump_json(render_geojson(plan, program)))


def cmd_plan(args) -> int:
    cfg = _config(args)
    for method in cfg.methods:
        plan = make_plan(cfg.spec, method)
        _write(args.out / _name("plan", method, cfg.methods, "json"), dump_json(plan_to_json(plan)))
        if {"svg", "geojson"} & set(cfg.outputs):
            _export_files(plan, schedule_for(plan), args.out, cfg.outputs)
    return EXIT_OK


def _plans(args) -> list:
    if args.plan is not None:
        return [load_plan(args.plan)]
    cfg = _config(args)
    return [make_plan(cfg.spec, m) for m in cfg.methods]


def cmd_schedule(args) -> int:
    plans = _plans(args)
    methods = tuple(p.method for p in plans)
    for plan in plans:
        program = schedule_for(plan)
        doc = schedule_to_json(program, plan.method, plan.spec)
        _write(args.out / _name("schedule", plan.method, methods, "json"), dump_json(doc))
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = _config(args)
    methods = cfg.methods
    schedules = {}
    if args.schedule is not None:
        doc = load_schedule_doc(args.schedule)
        method = doc.get("method")
        if method not in ("boustrophedon", "alternative"):
            raise ConfigError(f"{args.schedule}: unknown method {method!r}")
        try:
            schedules[method] = [(iv["s_on_m"], iv["s_off_m"]) for iv in doc["intervals"]]
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"{args.schedule}: malformed intervals ({exc})") from None
        methods = (method,)
    report, grids = verify_report(cfg.spec, methods, cfg.raster_cell, schedules)
    _write(args.out / "verify.json", dump_json(report))
    for method, grid in grids.items():
        if "pgm" in cfg.outputs:
            grid.to_pgm(args.out / f"coverage_{method}.pgm")
        if "png" in cfg.outputs:
            grid.to_png(args.out / f"coverage_{method}.png")
    for r in report["methods"]:
        cov = r["coverage"]
        status = "PASS" if r["passed"] else "FAIL"
        print(f"{status} {r['method']}: L={r['length_measured_m']:.2f} m "
              f"(formula {r['length_formula_m']:.2f}, residual {r['length_residual_m']:+.3f}), "
              f"N_ON={r['on_states_measured']} (formula {r['on_states_formula']}), "
              f"coverage={cov['coverage_ratio']:.4f}, overlap={cov['overlap_ratio']:.4f}")
        for problem in r["problems"]:
            print(f"  - {problem}")
    if args.strict and not report["passed"]:
        return EXIT_FAILED
    return EXIT_OK


def table_csv(parity: str) -> str:
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in build_comparison_table(table_setups(parity)):
        values = row.rounded()
        values["area_ha"] = f"{values['area_ha']:.1f}"
        writer.writerow([values[c] for c in CSV_COLUMNS])
    return buf.getvalue()


def cmd_tables(args) -> int:
    from .plots import comparison_figure
    for parity in ("odd", "even"):
        _write(args.out / f"table_{parity}.csv", table_csv(parity))
        _write(args.out / f"fig_{parity}.png", comparison_figure(parity))
    meta = {
        "version": __version__,
        "turn_radius_m": 5.0,
        "files": ["table_odd.csv", "table_even.csv", "fig_odd.png", "fig_even.png"],
        "rounding": "lengths to integer metres, area to 0.1 ha, half away from zero",
        "area_ha_formula": "(N + 1) * W * H / 10000",
        "area_ha_is_derived_fit": True,
    }
    _write(args.out / "tables_meta.json", dump_json(meta))
    return EXIT_OK


def cmd_export(args) -> int:
    plans = _plans(args)
    for plan in plans:
        if args.schedule is not None:
            doc = load_schedule_doc(args.schedule)
            program = SprayProgram.from_json(doc)
        else:
            program = schedule_for(plan)
        _export_files(plan, program, args.out, ("svg", "geojson"))
    return EXIT_OK


HANDLERS = {"plan": cmd_plan, "schedule": cmd_schedule, "verify": cmd_verify,
            "tables": cmd_tables, "export": cmd_export}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return HANDLERS[args.command](args)
    except (UsageError, ConfigError, InvalidSpec, InvalidProgram, CellTooCoarse,
            GeometryInfeasible) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
