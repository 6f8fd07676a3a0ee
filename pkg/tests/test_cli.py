import csv
import json
import subprocess
import sys

import pytest

from sasano_mpd.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, build_config, main, trial_rng


def run(args, tmp_path, name="out"):
    out = tmp_path / name
    code = main(list(args) + ["-o", str(out)])
    return code, out.read_bytes() if out.exists() else b""


def test_check_poisson_rational(tmp_path):
    code, data = run(["check-poisson", "--n", "2", "--mode", "rational", "--trials", "50"], tmp_path)
    rep = json.loads(data)
    assert code == EXIT_OK and rep["passed"] and len(rep["trials"]) == 50
    assert rep["max_deviation"] == 0


def test_check_poisson_n1_and_float(tmp_path):
    code, data = run(["check-poisson", "--n", "1", "--trials", "5"], tmp_path)
    assert code == EXIT_OK and json.loads(data)["n"] == 1
    code, data = run(["check-poisson", "--n", "3", "--mode", "float", "--trials", "5"], tmp_path)
    rep = json.loads(data)
    assert code == EXIT_OK and rep["max_deviation"] <= 1e-9


@pytest.mark.parametrize("argv", [
    ["roundtrip", "--t-start", "0.97", "--t-end", "0.99"],
    ["roundtrip", "--t-start", "0.4", "--t-end", "0.3"],
    ["roundtrip", "--t-start", "abc"],
    ["laplace-chain", "--n", "3"],
    ["check-poisson", "--mode", "symbolic"],
    ["frobnicate"],
])
def test_usage_errors(argv, capsys):
    assert main(argv) == EXIT_USAGE


def test_roundtrip_n2(tmp_path):
    report = tmp_path / "summary.json"
    code, data = run(["roundtrip", "--n", "2", "--seed", "3", "--report", str(report)], tmp_path)
    summary = json.loads(report.read_text())
    assert code == EXIT_OK and summary["max_deviation"] <= 1e-6
    rows = list(csv.reader(data.decode().splitlines()))
    assert rows[0][:3] == ["t", "lambda_1_re", "lambda_1_im"]
    assert len(rows) == 12 and all(len(r) == len(rows[0]) for r in rows)


def test_roundtrip_n1_reports_pvi_gap(tmp_path):
    report = tmp_path / "summary.json"
    code, _ = run(["roundtrip", "--n", "1", "--report", str(report)], tmp_path)
    summary = json.loads(report.read_text())
    assert code == EXIT_OK and summary["pvi_reduction_gap"] == 0


def test_roundtrip_zero_length(tmp_path):
    report = tmp_path / "summary.json"
    code, data = run(["roundtrip", "--t-start", "0.35", "--t-end", "0.35", "--report", str(report)],
                     tmp_path)
    assert code == EXIT_OK and json.loads(report.read_text())["max_deviation"] == 0
    assert len(data.decode().splitlines()) == 2


def test_laplace_chain_report(tmp_path):
    code, data = run(["laplace-chain", "--points", "2", "--seed", "1"], tmp_path)
    rep = json.loads(data)
    assert code == EXIT_OK and rep["passed"]
    assert rep["spectral_type"] == {"0": "31", "t": "22", "1": "22", "inf": "1111"}
    pt = rep["points"][0]
    assert pt["det"][0] == "1" and len(pt["det"]) == 5
    assert pt["literal_det_identity"] is False


def test_laplace_chain_q2_pole(tmp_path):
    code, data = run(["laplace-chain", "--point", "1/2,1,2,3,5/2"], tmp_path)
    rep = json.loads(data)
    assert code == EXIT_FAIL
    assert rep["points"][0]["failed_stage"] == "chain_to_so8"


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n": 1, "trials": 3, "seed": 9}))
    c = build_config(["check-poisson", "--config", str(cfg), "--trials", "4"])
    assert (c.n, c.trials, c.seed) == (1, 4, 9)
    cfg.write_text(json.dumps({"bogus": 1}))
    assert main(["check-poisson", "--config", str(cfg)]) == EXIT_USAGE


def test_trial_streams_independent():
    a = trial_rng(5, 0).integers(0, 10**9, 4)
    b = trial_rng(5, 1).integers(0, 10**9, 4)
    assert list(a) != list(b)
    assert list(a) == list(trial_rng(5, 0).integers(0, 10**9, 4))


@pytest.mark.parametrize("argv", [
    ["check-poisson", "--n", "2", "--trials", "10"],
    ["roundtrip", "--n", "1", "--samples", "5"],
    ["laplace-chain", "--points", "2"],
])
def test_deterministic_output(argv, tmp_path):
    _, first = run(argv, tmp_path, "a")
    _, second = run(argv, tmp_path, "b")
    _, parallel = run(argv + ["--jobs", "2"], tmp_path, "c")
    assert first == second == parallel and first


def test_console_entry_point(tmp_path):
    out = tmp_path / "r.json"
    proc = subprocess.run([sys.executable, "-m", "sasano_mpd.cli", "check-poisson", "--n", "1",
                           "--trials", "2", "-o", str(out)], capture_output=True)
    assert proc.returncode == 0 and json.loads(out.read_text())["passed"]
