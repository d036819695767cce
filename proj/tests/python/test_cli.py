"""End-to-end checks of the command-line tool (path via LPINFER_BIN)."""

import json
import math
import os
import subprocess

import pytest

BIN = os.environ.get("LPINFER_BIN")

pytestmark = pytest.mark.skipif(BIN is None, reason="LPINFER_BIN not set")


def run(*args, expect_ok=True):
    proc = subprocess.run([BIN, *args], capture_output=True, text=True)
    if expect_ok:
        assert proc.returncode == 0, proc.stdout + proc.stderr
    return proc


@pytest.fixture()
def data_csv(tmp_path):
    import lpinfer as lp

    x, y = lp.draw_sample("npreg", 400, seed=99)
    path = tmp_path / "data.csv"
    with open(path, "w") as f:
        f.write("x,y\n")
        for xi, yi in zip(x, y):
            f.write(f"{xi!r},{yi!r}\n")
    return str(path)


def test_ci_json_schema_and_determinism(data_csv):
    args = ["ci", data_csv, "--point", "-0.333", "--bandwidth", "0.25",
            "--kernel", "epanechnikov", "--method", "mplp", "--seed", "42"]
    a = run(*args)
    b = run(*args)
    assert a.stdout == b.stdout  # byte-identical report
    rep = json.loads(a.stdout)
    assert rep["schema_version"] == 1
    assert rep["request"]["command"] == "ci"
    (iv,) = rep["intervals"]
    assert iv["method"] == "mplp"
    for key in ("lower", "upper", "estimate", "bias_correction", "se"):
        assert isinstance(iv[key], float) and math.isfinite(iv[key])
    assert iv["lower"] < iv["upper"]
    diag = rep["diagnostics"]
    assert diag["n_eff"] > 0
    assert math.isfinite(diag["q_n"])

    # numeric fields survive a json round trip exactly
    assert json.loads(json.dumps(rep)) == rep


def test_ci_csv_and_text_formats(data_csv):
    csv_out = run("ci", data_csv, "--point", "-0.333", "--bandwidth", "0.25",
                  "--format", "csv").stdout
    header, *rows = csv_out.strip().splitlines()
    assert header == "method,lower,upper,estimate,bias_correction,se,alpha"
    assert len(rows) == 6
    text_out = run("ci", data_csv, "--point", "-0.333", "--bandwidth", "0.25",
                   "--format", "text").stdout
    assert "mplp" in text_out


def test_structured_errors(data_csv, tmp_path):
    proc = run("ci", data_csv, "--point", "9.0", "--bandwidth", "0.05",
               expect_ok=False)
    assert proc.returncode != 0
    err = json.loads(proc.stdout)
    assert err["error"]["code"] == "insufficient_local_data"

    bad = tmp_path / "bad.csv"
    bad.write_text("x,y\n0.1,oops\n")
    proc = run("ci", str(bad), "--point", "0.0", "--bandwidth", "0.5",
               expect_ok=False)
    assert json.loads(proc.stdout)["error"]["code"] == "parse_error"

    mism = tmp_path / "mism.csv"
    mism.write_text("x,y,d\n0.5,1.0,0\n-0.5,0.0,0\n")
    proc = run("rdd", str(mism), "--cutoff", "0.0", "--bandwidth", "0.8",
               expect_ok=False)
    assert json.loads(proc.stdout)["error"]["code"] == "design_mismatch"


def test_rdd_roundtrip(tmp_path):
    import lpinfer as lp

    x, y = lp.draw_sample("rdd1", 1500, seed=5)
    path = tmp_path / "rdd.csv"
    with open(path, "w") as f:
        f.write("x,y,d\n")
        for xi, yi in zip(x, y):
            f.write(f"{xi!r},{yi!r},{1 if xi >= 0 else 0}\n")
    rep = json.loads(run("rdd", str(path), "--cutoff", "0", "--bandwidth",
                         "0.12").stdout)
    assert rep["request"]["command"] == "rdd"
    assert abs(rep["estimate"] - (-3.45)) < 0.5
    methods = [iv["method"] for iv in rep["intervals"]]
    assert "mplp" in methods and "rbc_pgp" in methods


def test_constants_and_grid(tmp_path):
    rep = json.loads(run("constants", "--kernel", "epanechnikov", "--region",
                         "interior").stdout)
    (row,) = rep["reports"]
    assert row["table"]["k_plp"] == 0.85
    assert row["table"]["k_rbc"] == 1.25
    assert row["table"]["length_ratio"] == 0.83

    grid = tmp_path / "grid.csv"
    run("constants", "--kernel", "triangular", "--region", "boundary",
        "--emit-grid", str(grid), "--grid-step", "0.1")
    lines = grid.read_text().strip().splitlines()
    assert lines[0] == "u,w_plp,w_mplp,w_rbc"
    assert len(lines) > 20


def test_simulate_csv(tmp_path):
    out = tmp_path / "sim.csv"
    run("simulate", "--table", "4", "--eval", "int", "--n", "300", "--reps",
        "40", "--seed", "2", "--oracle", "--out", str(out))
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "dgp,n,rule,hbar,method,coverage,length,failures"
    assert len(lines) == 5
    assert lines[1].startswith("npreg_int,300,oracle,")


def test_config_file(data_csv, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("point=-0.333\nbandwidth=0.25\nmethod=rbc_pgp\n")
    rep = json.loads(run("ci", data_csv, "--config", str(cfg)).stdout)
    (iv,) = rep["intervals"]
    assert iv["method"] == "rbc_pgp"
    # flags override the file
    rep2 = json.loads(run("ci", data_csv, "--config", str(cfg), "--method",
                          "plp").stdout)
    assert rep2["intervals"][0]["method"] == "plp"
