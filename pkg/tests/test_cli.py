import csv
import io
import json
import math
import os
import subprocess
import sys
from importlib import resources

import pytest

from hypersf.cli import RunRecord, main

AREA_SPEC = str(resources.files("hypersf").joinpath("data/hyperboloid_area.json"))
PRODUCT_SPEC = str(resources.files("hypersf").joinpath("data/product_2f1.json"))
GEOM = ["-a", "1.2", "-b", "1", "-c", "2"]


def run(*args, env=None):
    full_env = dict(os.environ)
    full_env.pop("HYPERSF_TOL", None)
    full_env.update(env or {})
    return subprocess.run([sys.executable, "-m", "hypersf", *args], capture_output=True,
                          text=True, env=full_env, timeout=120)


def test_area_all_methods_agree():
    r = run("area", *GEOM, "-H", "1", "--method", "all", "--json")
    assert r.returncode == 0, r.stderr
    rec = json.loads(r.stdout)
    out = rec["outputs"]
    assert float(out["area_closed"]) == pytest.approx(7.2838221256187081, rel=1e-12)
    for key in ("rel_err_closed_triple", "rel_err_closed_oracle", "rel_err_triple_oracle"):
        assert float(out[key]) <= 1e-6
    assert out["region_ok"] == "true"


def test_area_text_output():
    r = run("area", *GEOM, "-H", "1")
    assert r.returncode == 0
    assert "output area = 7.283822125618" in r.stdout


def test_determinism():
    args = ("area", *GEOM, "-H", "1", "--method", "all", "--json")
    first, second = run(*args), run(*args)
    assert first.stdout == second.stdout
    assert first.stdout.encode() == second.stdout.encode()


def test_record_round_trip():
    rec = RunRecord("area", {"a": "1.2"}, {"area": "7.28382212561871"}, {"area": "7.28382212561871"}, "0")
    assert RunRecord.from_json(rec.to_json()) == rec
    assert RunRecord.from_json(rec.to_json()).to_json() == rec.to_json()


def test_usage_errors_exit_2():
    assert run("area", "-a", "1", "-b", "1.2", "-c", "2", "-H", "1").returncode == 2
    assert run("area", "-a", "1", "-b", "1", "-c", "2", "-H", "1").returncode == 2
    assert run("area", *GEOM).returncode == 2
    assert run("frobnicate").returncode == 2
    assert run("area", *GEOM, "-H", "one").returncode == 2


def test_circular_flag():
    r = run("area", "-a", "1", "-b", "1", "-c", "2", "-H", "1", "--allow-circular", "--json")
    assert r.returncode == 0
    assert float(json.loads(r.stdout)["outputs"]["area"]) == pytest.approx(6.5965856151281433, rel=1e-10)


def test_out_of_region_strict_exit_3():
    r = run("area", "-a", "10", "-b", "1", "-c", "1", "-H", "1", "--method", "closed", "--strict")
    assert r.returncode == 3
    assert "|x3|" in r.stderr


def test_out_of_region_falls_back():
    r = run("area", "-a", "10", "-b", "1", "-c", "1", "-H", "1", "--json")
    assert r.returncode == 0
    out = json.loads(r.stdout)["outputs"]
    assert out["method_used"] == "oracle" and out["region_ok"] == "false"
    assert out["failed"] == "|x3| = 50 >= 1"


def test_non_convergence_exit_4():
    r = run("eval", "pfq", "--upper", "1,1", "--lower", "2", "-z", "-1", "--path", "series")
    assert r.returncode == 4


def test_domain_error_exit_3():
    r = run("eval", "theorem3", "--lambda", "0.5", "--s", "0")
    assert r.returncode == 3


def test_volume():
    r = run("volume", "-a", "1", "-b", "1", "-c", "1", "-H", "1", "--allow-circular", "--json")
    assert r.returncode == 0
    assert float(json.loads(r.stdout)["outputs"]["V"]) == pytest.approx(4 * math.pi / 3, rel=1e-13)
    r = run("volume", "-a", "2", "-b", "1", "-c", "1", "-H", "1", "--json")
    out = json.loads(r.stdout)["outputs"]
    assert float(out["V"]) == pytest.approx(8 * math.pi / 3, rel=1e-13)
    assert {"V", "V_b", "V_c"} <= set(out)


def test_volume_degenerate_cap_warns():
    r = run("volume", *GEOM, "-H", "0", "--json")
    assert r.returncode == 0
    assert "degenerate cap" in r.stderr
    assert float(json.loads(r.stdout)["outputs"]["V"]) == 0.0


def test_eval_2f1():
    r = run("eval", "2f1", "-a", "1", "-b", "1", "-c", "2", "-z", "0.5", "--json")
    assert r.returncode == 0
    out = json.loads(r.stdout)["outputs"]
    value = float(next(v for k, v in out.items() if k.startswith("value")))
    assert value == pytest.approx(2 * math.log(2), rel=1e-13)


def test_eval_theorem1_all_paths():
    r = run("eval", "theorem1", "--sigma", "2", "--lambda", "1", "--s", "1", "--path", "all", "--json")
    assert r.returncode == 0
    rec = json.loads(r.stdout)
    assert float(rec["outputs"]["value_closed"]) == pytest.approx(5 * math.pi / 4, rel=1e-12)
    assert float(rec["outputs"]["value_quad"]) == pytest.approx(5 * math.pi / 4, rel=1e-10)
    assert float(rec["agreement"]) < 1e-9


def test_eval_sd_at_origin():
    r = run("eval", "sd", "--spec", AREA_SPEC, "--x", "0,0,0", "--json")
    assert r.returncode == 0
    out = json.loads(r.stdout)["outputs"]
    assert float(next(v for k, v in out.items() if k.startswith("value"))) == 1.0


def test_classify():
    rec = json.loads(run("classify", "--spec", AREA_SPEC, "--json").stdout)
    assert rec["outputs"]["case"] == "II" and rec["outputs"]["deltas"] == "0,0,0"
    rec = json.loads(run("classify", "--spec", PRODUCT_SPEC, "--json").stdout)
    assert rec["outputs"]["case"] == "IIb"


def test_classify_case_one(tmp_path):
    spec = {"variables": 1, "upper_global": [], "lower_global": [],
            "upper_per_variable": [[]], "lower_per_variable": [[{"value": "2", "shift": 1}]]}
    path = tmp_path / "one.json"
    path.write_text(json.dumps(spec))
    rec = json.loads(run("classify", "--spec", str(path), "--json").stdout)
    assert rec["outputs"]["case"] == "I"


def test_missing_spec_file():
    assert run("classify", "--spec", "/nonexistent/spec.json").returncode == 2


def _sweep_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_sweep_csv():
    r = run("sweep", "--param", "H", "--from", "0.1", "--to", "1", "--steps", "10", *GEOM)
    assert r.returncode == 0, r.stderr
    assert r.stdout.splitlines()[0] == "param,value,area_closed,area_oracle,rel_err,volume"
    rows = _sweep_rows(r.stdout)
    assert len(rows) == 10
    areas = [float(row["area_closed"]) for row in rows]
    assert all(x < y for x, y in zip(areas, areas[1:]))
    assert all(float(row["rel_err"]) <= 1e-6 for row in rows)


def test_single_step_sweep_equals_area():
    sweep = _sweep_rows(run("sweep", "--param", "H", "--from", "1", "--to", "1", "--steps", "1", *GEOM).stdout)
    area = json.loads(run("area", *GEOM, "-H", "1", "--json").stdout)["outputs"]
    assert sweep[0]["area_closed"] == area["area"]


def test_sweep_json_to_file(tmp_path):
    out = tmp_path / "sweep.json"
    r = run("sweep", "--param", "c", "--from", "1.5", "--to", "3", "--steps", "4", "-a", "1.2",
            "-b", "1", "-H", "1", "--out", "json", "--output", str(out))
    assert r.returncode == 0
    records = json.loads(out.read_text())
    assert len(records) == 4 and all(rec["command"] == "sweep" for rec in records)


@pytest.mark.parametrize("args", [
    ("--from", "1", "--to", "0.5", "--steps", "3"),
    ("--from", "0.1", "--to", "1", "--steps", "0"),
])
def test_sweep_malformed_range(args):
    assert run("sweep", "--param", "H", *args, *GEOM).returncode == 2


def test_env_tolerance_override():
    r = run("area", *GEOM, "-H", "1", "--json", env={"HYPERSF_TOL": "1e-6"})
    assert json.loads(r.stdout)["inputs"]["tol"] == "1e-06"
    r = run("area", *GEOM, "-H", "1", "--json")
    assert json.loads(r.stdout)["inputs"]["tol"] == "1e-10"


def test_main_in_process(capsys):
    assert main(["volume", "-a", "2", "-b", "1", "-c", "1", "-H", "1"]) == 0
    assert "8.37758040957278" in capsys.readouterr().out
    assert main(["area", "-a", "1"]) == 2
