import json
import subprocess
import sys

import pytest

from shalika_padic.cli import run


def report(path):
    return json.loads(path.read_text())


def test_weight_analyze(tmp_path):
    out = tmp_path / "r.json"
    assert run(["--report", str(out), "weight", "analyze", "--mu", "3,1,0,-2", "--p", "5", "--beta", "2"]) == 0
    res = report(out)["result"]
    assert res["purity_weight"] == 1 and res["crit"] == [0, 1] and res["mu_vee_tp"]["2"] == "625"


def test_impure_weight_is_input_error(tmp_path):
    assert run(["--report", str(tmp_path / "r.json"), "weight", "analyze", "--mu", "3,1,0,0"]) == 2


def test_bad_arguments(tmp_path):
    assert run(["--report", str(tmp_path / "r.json"), "cosets", "verify", "--n", "1"]) == 2
    assert run(["--report", str(tmp_path / "r.json"), "cosets", "verify", "--n", "0", "--q", "2"]) == 2
    assert run(["--report", str(tmp_path / "r.json"), "measure", "check", str(tmp_path / "none.json")]) == 2


def test_ci_mode_requires_seed(tmp_path):
    argv = ["--ci", "--report", str(tmp_path / "r.json"), "rep", "manin-check", "--mu", "1,0",
            "--p", "5", "--beta", "1", "--samples", "3"]
    assert run(argv) == 2


def test_rep_manin_small(tmp_path):
    out = tmp_path / "r.json"
    argv = ["--report", str(out), "rep", "manin-check", "--mu", "4,0", "--p", "3", "--beta", "2",
            "--samples", "20", "--seed", "7"]
    assert run(argv) == 0
    first = out.read_bytes()
    assert run(argv) == 0
    assert out.read_bytes() == first


@pytest.mark.slow
def test_rep_manin_spec_example(tmp_path):
    argv = ["--report", str(tmp_path / "r.json"), "rep", "manin-check", "--mu", "3,1,0,-2", "--p", "5",
            "--beta", "3", "--samples", "200", "--seed", "7"]
    assert run(argv) == 0


def test_hecke_and_zeta(tmp_path):
    r = str(tmp_path / "r.json")
    assert run(["--report", r, "hecke", "charpoly", "--n", "1", "--q", "3", "--alphas", "2,5/3"]) == 0
    assert run(["--report", r, "hecke", "regular", "--n", "2", "--q", "2", "--alphas", "1,2,4,8",
                "--tau", "3,4", "--eta", "1"]) == 0
    assert run(["--report", r, "hecke", "regular", "--n", "2", "--q", "2", "--alphas", "1,2,3,4",
                "--tau", "3,4", "--eta", "1"]) == 1
    assert run(["--report", r, "hecke", "ordinary", "--mu", "2,1,0,-1", "--q", "2",
                "--valuations", "3,2,0,0", "--no-strip"]) == 0
    assert report(tmp_path / "r.json")["result"]["tau"] == [3, 4]
    assert run(["--report", r, "zeta", "verify", "--q", "5", "--alphas", "2,1/3", "--beta", "2",
                "--j", "1"]) == 0
    assert run(["--report", r, "cosets", "verify", "--n", "1", "--q", "3"]) == 0


def test_regular_failure_writes_checkable_witness(tmp_path):
    r = tmp_path / "r.json"
    assert run(["--report", str(r), "hecke", "regular", "--n", "2", "--q", "2", "--alphas", "1,2,3,4",
                "--tau", "3,4", "--eta", "1"]) == 1
    w = tmp_path / "r.witness.json"
    assert w.exists()
    assert run(["--report", str(tmp_path / "v.json"), "verify-witness", str(w)]) == 0


def test_measure_workflow(tmp_path):
    r = str(tmp_path / "r.json")
    mdir = tmp_path / "m"
    assert run(["--report", r, "symbols", "tower", "--form", "Delta", "--p", "11", "--prec", "4",
                "--beta-max", "3", "--j", "5", "--measure-dir", str(mdir)]) == 0
    f = mdir / "measure_j5.json"
    assert run(["--report", r, "measure", "check", str(f)]) == 0
    assert run(["--report", r, "measure", "twist", str(f), "--k", "2",
                "--output", str(tmp_path / "t.json")]) == 0
    assert report(tmp_path / "r.json")["result"]["distribution_preserved"]
    assert run(["--report", r, "measure", "push", str(f), "--output", str(tmp_path / "p.json")]) == 0
    assert json.loads((tmp_path / "p.json").read_text())["levels"] == json.loads(f.read_text())["levels"]
    assert run(["--report", r, "measure", "certify", str(f), "--M", "9"]) == 0
    cert = report(tmp_path / "r.json")["result"]
    assert cert["bound"] is not None and len(cert["vanishing"]) <= cert["bound"]

    d = json.loads(f.read_text())
    for level in d["levels"]:
        level["coeffs"] = [0] * len(level["coeffs"])
    z = tmp_path / "zero.json"
    z.write_text(json.dumps(d))
    assert run(["--report", r, "measure", "certify", str(z)]) == 3

    d = json.loads(f.read_text())
    d["levels"][1]["coeffs"][3] += 11 ** 3
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(d))
    rb = tmp_path / "bad_report.json"
    assert run(["--report", str(rb), "measure", "check", str(bad)]) == 1
    assert run(["--report", r, "verify-witness", str(tmp_path / "bad_report.witness.json")]) == 0


def test_symbols_and_interp(tmp_path):
    r = str(tmp_path / "r.json")
    assert run(["--report", r, "symbols", "build", "--form", "11a"]) == 0
    assert run(["--report", r, "symbols", "stabilize", "--form", "11a", "--p", "3", "--prec", "6"]) == 0
    assert run(["--report", r, "symbols", "stabilize", "--form", "11a", "--p", "11"]) == 2
    assert run(["--report", r, "symbols", "build", "--form", "nonsense"]) == 2
    assert run(["--report", r, "interp", "check", "--p", "11", "--j", "0,5"]) == 0
    assert run(["--report", r, "interp", "check", "--p", "11", "--j", "10", "--prec", "11"]) == 3


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "shalika_padic.cli", "--report", str(tmp_path / "r.json"),
                           "weight", "analyze", "--mu", "10,0"], capture_output=True, text=True)
    assert proc.returncode == 0 and "Crit = [0, 1, 2" in proc.stdout
