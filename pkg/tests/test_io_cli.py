import csv
import json
import subprocess
import sys

import pytest

from spraypath import FieldSpec
from spraypath.cli import main
from spraypath.io import (ConfigError, dump_json, parse_config, plan_from_json, plan_to_json,
                          write_atomic)
from spraypath.verify import make_plan

R = 5.0


@pytest.fixture
def config(tmp_path):
    def _write(**overrides):
        doc = {"working_width_m": 12, "lane_length_m": 100, "lane_count": 4,
               "turn_radius_m": 5, "entrance": "SW"}
        doc.update(overrides)
        path = tmp_path / "field.json"
        path.write_text(json.dumps(doc))
        return path
    return _write


@pytest.mark.parametrize("method", ["boustrophedon", "alternative"])
@pytest.mark.parametrize("N", [4, 5])
def test_plan_roundtrip_exact(method, N):
    plan = make_plan(FieldSpec(12.0, 100.0, N, R, "NE"), method)
    again = plan_from_json(json.loads(dump_json(plan_to_json(plan))))
    assert len(again.path.cum_length) == len(plan.path.cum_length)
    assert max(abs(a - b) for a, b in zip(again.path.cum_length, plan.path.cum_length)) <= 1e-12
    assert plan_to_json(again) == plan_to_json(plan)


def test_config_rejects_unknown_keys():
    with pytest.raises(ConfigError, match="colour"):
        parse_config({"working_width_m": 12, "lane_length_m": 100, "lane_count": 4,
                      "turn_radius_m": 5, "colour": "red"})


def test_config_rejects_bad_method_and_cell():
    base = {"working_width_m": 12, "lane_length_m": 100, "lane_count": 4, "turn_radius_m": 5}
    with pytest.raises(ConfigError):
        parse_config({**base, "method": "spiral"})
    with pytest.raises(ConfigError):
        parse_config({**base, "raster_cell_m": 0})
    with pytest.raises(ConfigError):
        parse_config({"working_width_m": 12})


def test_atomic_write_leaves_no_temp_files(tmp_path):
    write_atomic(tmp_path / "a" / "x.txt", "hello")
    assert [p.name for p in (tmp_path / "a").iterdir()] == ["x.txt"]


def test_plan_alternative_even_has_half_n_patterns(config, tmp_path):
    out = tmp_path / "out"
    assert main(["plan", "--config", str(config()), "--method", "alternative",
                 "--out", str(out)]) == 0
    doc = json.loads((out / "plan.json").read_text())
    assert len(doc["patterns"]) == 2
    assert doc["segments"][1]["type"] == "arc" or doc["segments"][0]["type"] == "line"


def test_plan_is_byte_stable(config, tmp_path):
    cfg = str(config())
    main(["plan", "--config", cfg, "--method", "alternative", "--out", str(tmp_path / "a")])
    main(["plan", "--config", cfg, "--method", "alternative", "--out", str(tmp_path / "b")])
    assert (tmp_path / "a" / "plan.json").read_bytes() == (tmp_path / "b" / "plan.json").read_bytes()


def test_plan_both_writes_two_documents(config, tmp_path):
    assert main(["plan", "--config", str(config()), "--method", "both", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "plan_boustrophedon.json").exists()
    assert (tmp_path / "plan_alternative.json").exists()


def test_plan_with_large_radius_exits_2(config, tmp_path, capsys):
    assert main(["plan", "--config", str(config(turn_radius_m=7)), "--out", str(tmp_path)]) == 2
    assert "turn_radius" in capsys.readouterr().err


def test_missing_config_exits_2(tmp_path):
    assert main(["plan", "--out", str(tmp_path)]) == 2
    assert main(["plan", "--config", str(tmp_path / "none.json")]) == 2
    assert main(["frobnicate"]) == 2


@pytest.mark.parametrize("N,expected", [(4, {"boustrophedon": 5, "alternative": 7}),
                                        (5, {"boustrophedon": 6, "alternative": 9})])
def test_verify_reports_on_counts(config, tmp_path, N, expected):
    assert main(["verify", "--config", str(config(lane_count=N)), "--cell", "0.25",
                 "--strict", "--out", str(tmp_path)]) == 0
    report = json.loads((tmp_path / "verify.json").read_text())
    assert {m["method"]: m["on_states_measured"] for m in report["methods"]} == expected
    for m in report["methods"]:
        assert "length_residual_m" in m and "length_formula_m" in m
        assert m["coverage"]["coverage_ratio"] >= 0.995


def test_verify_strict_fails_on_corrupted_schedule(config, tmp_path):
    cfg = str(config())
    assert main(["schedule", "--config", cfg, "--method", "alternative", "--out", str(tmp_path)]) == 0
    doc = json.loads((tmp_path / "schedule.json").read_text())
    doc["intervals"] = doc["intervals"][1:]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    args = ["verify", "--config", cfg, "--schedule", str(bad), "--out", str(tmp_path / "v")]
    assert main(args) == 0
    assert main(args + ["--strict"]) == 1


def test_verify_strict_fails_on_overlapping_schedule(config, tmp_path):
    cfg = str(config())
    main(["schedule", "--config", cfg, "--method", "boustrophedon", "--out", str(tmp_path)])
    doc = json.loads((tmp_path / "schedule.json").read_text())
    doc["intervals"][1]["s_on_m"] = 1.0
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    assert main(["verify", "--config", cfg, "--schedule", str(bad), "--strict",
                 "--out", str(tmp_path / "v")]) == 1


def test_tables_match_published_rows(tmp_path):
    assert main(["tables", "--out", str(tmp_path)]) == 0
    odd = list(csv.reader((tmp_path / "table_odd.csv").open()))
    even = list(csv.reader((tmp_path / "table_even.csv").open()))
    assert odd[0] == ["W", "H", "area_ha", "N", "L_b", "NON_b", "L_a", "NON_a", "dL", "dNON"]
    assert len(odd) == 9 and len(even) == 9
    assert odd[1] == ["12", "100", "0.7", "5", "1020", "6", "982", "9", "-38", "3"]
    assert even[8] == ["36", "500", "91.8", "50", "33545", "51", "31249", "76", "-2296", "25"]
    meta = json.loads((tmp_path / "tables_meta.json").read_text())
    assert meta["area_ha_is_derived_fit"] is True
    assert (tmp_path / "fig_odd.png").read_bytes()[:4] == b"\x89PNG"


def test_tables_are_byte_stable(tmp_path):
    main(["tables", "--out", str(tmp_path / "a")])
    main(["tables", "--out", str(tmp_path / "b")])
    for name in ("table_odd.csv", "table_even.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_export_svg_and_geojson(config, tmp_path):
    cfg = str(config())
    main(["plan", "--config", cfg, "--method", "alternative", "--out", str(tmp_path)])
    assert main(["export", "--plan", str(tmp_path / "plan.json"), "--out", str(tmp_path)]) == 0
    svg = (tmp_path / "alternative.svg").read_text()
    assert svg.count('<g class="spray-on"') == 7
    gj = json.loads((tmp_path / "alternative.geojson").read_text())
    plan = json.loads((tmp_path / "plan.json").read_text())
    assert len(gj["features"]) == len(plan["segments"]) + 1
    assert gj["features"][-1]["geometry"]["type"] == "Polygon"
    kinds = {f["geometry"]["type"] for f in gj["features"][:-1]}
    assert kinds == {"LineString"}


def test_export_with_empty_schedule(config, tmp_path):
    cfg = str(config())
    main(["plan", "--config", cfg, "--method", "alternative", "--out", str(tmp_path)])
    empty = {"format": "spraypath.schedule", "version": 1, "method": "alternative",
             "intervals": [], "path_length_m": None}
    (tmp_path / "empty.json").write_text(json.dumps(empty))
    assert main(["export", "--plan", str(tmp_path / "plan.json"), "--schedule",
                 str(tmp_path / "empty.json"), "--out", str(tmp_path / "e")]) == 0
    assert '<g class="spray-on"' not in (tmp_path / "e" / "alternative.svg").read_text()


def test_export_missing_plan_exits_2(tmp_path):
    assert main(["export", "--plan", str(tmp_path / "missing.json")]) == 2


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "spraypath", "tables", "--out", str(tmp_path)],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert (tmp_path / "table_even.csv").exists()
