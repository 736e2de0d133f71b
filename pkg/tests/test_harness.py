"""Configuration, reports and the command line."""

import csv
import json
import math
import subprocess
import sys

import pytest

from fraclab.harness import ExperimentConfig, VerificationReport, load_config, parse_config_text
from fraclab.harness.cli import main
from fraclab.harness.report import CONSTANT_KEYS

from reference_values import LEAST_RADIUS


def run(argv, capsys):
    rc = main(argv)
    return rc, capsys.readouterr().out


def strip_runtime(d):
    for c in d["checks"]:
        c.pop("runtime", None)
    return d


# -- configuration -------------------------------------------------------------
def test_config_file_format(tmp_path):
    f = tmp_path / "run.cfg"
    f.write_text("# comment\ntheorem = thm13\nn = 2\nsigma = 0.25  # inline\nlambda_grid = 1, 5\n"
                 "quad.rel_tol = 1e-9\n\n")
    cfg = load_config(str(f))
    assert (cfg.theorem, cfg.n, cfg.sigma, cfg.lambda_grid) == ("thm13", 2, 0.25, (1.0, 5.0))
    assert cfg.quad_config().rel_tol == 1e-9


def test_flags_override_the_file(tmp_path):
    f = tmp_path / "run.cfg"
    f.write_text("n = 2\nsigma = 0.25\n")
    cfg = load_config(str(f), n=1, sigma=None)
    assert cfg.n == 1 and cfg.sigma == 0.25


@pytest.mark.parametrize("text", ["colour = red", "quad.speed = 3", "n 2", "sigma = 1.5",
                                  "j_grid = 4, 2", "index_method = spline"])
def test_bad_configuration_is_rejected(tmp_path, text):
    f = tmp_path / "bad.cfg"
    f.write_text(text + "\n")
    with pytest.raises(ValueError):
        load_config(str(f))


def test_config_hash_ignores_output_locations():
    a = ExperimentConfig(out="a.json")
    assert a.config_hash() == ExperimentConfig(out="b.json", csv_dir="x").config_hash()
    assert a.config_hash() != ExperimentConfig(sigma=0.25).config_hash()
    assert parse_config_text("") == {}


# -- reports -----------------------------------------------------------------------
def test_report_requires_citations_and_fills_constants():
    rep = VerificationReport("demo", {})
    with pytest.raises(ValueError):
        rep.add("x", "", 1.0, 1.0, True, 0.0)
    rep.add("x", "reason", 1.0, 2.0, True, 1.0)
    rep.timed("boom", "reason", lambda: 1 / 0)
    d = json.loads(rep.to_json())
    assert set(d["constants"]) == set(CONSTANT_KEYS)
    assert [c["pass"] for c in d["checks"]] == [True, False]
    assert not rep.passed
    assert "runtime" in d["checks"][0]
    assert "runtime" not in json.loads(rep.to_json(with_runtime=False))["checks"][0]


# -- command line ------------------------------------------------------------------
def test_eval_of_a_constant_is_zero(capsys):
    rc, out = run(["eval", "--field", "constant:1", "--x", "0.3"], capsys)
    v, err = map(float, out.split())
    assert rc == 0 and abs(v) <= 1e-12


def test_eval_of_the_poisson_field(capsys):
    rc, out = run(["eval", "--field", "poisson", "--x", "2"], capsys)
    assert float(out.split()[0]) == pytest.approx(-3 / 25, rel=1e-8)


@pytest.mark.parametrize("argv", [["eval", "--field", "nonsense"], ["eval", "--x", "1,2"],
                                  ["thm12", "--sigma", "1.5"], ["thm13", "--lambda", "0.5"],
                                  ["eval", "--quad", "speed=3"], ["frobnicate"]])
def test_bad_arguments_exit_with_status_two(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_failing_check_gives_status_one(capsys, tmp_path):
    out = tmp_path / "short.json"
    rc, _ = run(["thm12", "--j", "4", "--out", str(out)], capsys)
    d = json.loads(out.read_text())
    assert rc == 1 and not all(c["pass"] for c in d["checks"])


def test_choose_r_output(capsys):
    rc, out = run(["choose-r", "--p", "1", "--q", "1", "--lambda", "1"], capsys)
    lines = out.splitlines()
    assert rc == 0
    assert float(lines[0].split("=")[1]) == pytest.approx(LEAST_RADIUS[(1, 0.5, 1, 1, 1)], abs=1e-8)
    assert float(lines[1].split("=")[1]) >= 0 and float(lines[2].split("=")[1]) >= 0


@pytest.mark.parametrize("suite,tables", [("oracles", []), ("thm12", ["F_table", "v_j_trace"]),
                                          ("estimate-b", ["F_table"]), ("thm13", ["K_samples"])])
def test_report_schema_and_tables(suite, tables, tmp_path, capsys):
    out = tmp_path / f"{suite}.json"
    rc, _ = run([suite, "--out", str(out), "--csv-dir", str(tmp_path / "csv")], capsys)
    assert rc == 0
    d = json.loads(out.read_text())
    assert {"meta", "constants", "checks"} <= set(d)
    assert {"n", "sigma", "p", "q", "config_hash"} <= set(d["meta"])
    assert set(CONSTANT_KEYS) <= set(d["constants"])
    for c in d["checks"]:
        assert {"name", "citation", "computed", "bound", "pass", "margin"} <= set(c)
        assert c["citation"] and c["pass"] is True
    for t in tables:
        with open(tmp_path / "csv" / f"{suite}_{t}.csv") as fh:
            rows = list(csv.reader(fh))
        assert len(rows) >= 2 and all(math.isfinite(float(v)) for v in rows[1])


def test_repeated_runs_give_identical_reports(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        run(["estimate-b", "--n", "1", "--sigma", "0.75", "--out", str(out)], capsys)
    assert strip_runtime(json.loads(a.read_text())) == strip_runtime(json.loads(b.read_text()))


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "fraclab.harness.cli", "eval", "--field", "gaussian"],
                         capture_output=True, text=True, timeout=60)
    assert res.returncode == 0 and len(res.stdout.split()) == 2
