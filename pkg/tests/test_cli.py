import json
import subprocess
import sys

from cohomeq.cli import main

PROB = {"system": {"n": 3, "succ": [1, 2, 1]}, "gamma": ["1/1", "2/1", "-2/1"]}


def run_cli(args, capsys):
    code = main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def test_solve_finite(tmp_path, capsys):
    path = write(tmp_path, "p.json", PROB)
    code, out, _ = run_cli(["solve-finite", "--input", path, "--method", "preperiodic"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["phi"] == ["-2/1", "-1/1", "1/1"]
    assert doc["residual_zero"] is True
    assert doc["kernel_dim"] == 1


def test_solve_finite_unsolvable_is_domain_error(tmp_path, capsys):
    bad = {"system": {"n": 1, "succ": [0]}, "gamma": ["1/1"]}
    path = write(tmp_path, "bad.json", bad)
    code, out, _ = run_cli(["solve-finite", "--input", path], capsys)
    assert code == 1
    doc = json.loads(out)
    assert doc["error"] == "NotSolvable"
    assert doc["module"] == "discrete_solver"


def test_solve_rotation_tnc_error(tmp_path, capsys):
    req = {"h": {"real": True, "coeffs": [{"l": 0, "re": 1.0, "im": 0.0}]},
           "alpha": {"quadratic": [-1, 1, 2, 5]}}
    path = write(tmp_path, "rot.json", req)
    code, out, _ = run_cli(["solve-rotation", "--input", path], capsys)
    assert code == 1
    assert json.loads(out)["error"] == "TNCViolated"


def test_solve_rotation_success(tmp_path, capsys):
    req = {"h": {"real": True, "coeffs": [
        {"l": -1, "re": 0.5, "im": 0.0}, {"l": 1, "re": 0.5, "im": 0.0}]},
        "alpha": {"quadratic": [-1, 1, 2, 5]}}
    path = write(tmp_path, "rot.json", req)
    code, out, _ = run_cli(["solve-rotation", "--input", path, "--grid", "2000"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["residual_grid_sup"] < 1e-10
    assert doc["backend"] == "double"


def test_unknown_fields_exit_2(tmp_path, capsys):
    path = write(tmp_path, "junk.json", {**PROB, "junk": 1})
    code, out, err = run_cli(["solve-finite", "--input", path], capsys)
    assert code == 2
    assert "unknown fields" in json.loads(err)["message"]


def test_oracle_check_deterministic(tmp_path, capsys):
    code1, out1, _ = run_cli(["oracle-check", "--seed", "7", "--count", "60"], capsys)
    code2, out2, _ = run_cli(["oracle-check", "--seed", "7", "--count", "60"], capsys)
    assert code1 == code2 == 0
    assert out1 == out2
    doc = json.loads(out1)
    assert doc["agree"] == 60 and doc["disagree"] == 0


def test_series_probe_csv(tmp_path, capsys):
    req = {"kind": "finite", "problem": PROB, "x": 0}
    path = write(tmp_path, "probe.json", req)
    code, out, _ = run_cli(["series-probe", "--input", path, "--N", "6",
                            "--format", "csv"], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "x,n,s_n,sigma_n,sup_neg_s_n"
    assert len(lines) == 8


def test_alpha_profile_csv(tmp_path, capsys):
    path = write(tmp_path, "a.json", {"quadratic": [-1, 1, 2, 5]})
    code, out, _ = run_cli(["alpha-profile", "--input", path, "--N", "5",
                            "--format", "csv"], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "n,dist,denom"
    assert len(lines) == 6


def test_power_probe(tmp_path, capsys):
    req = {"q": 3,
           "h": {"real": True, "coeffs": [
               {"l": -1, "re": 0.0, "im": 0.5}, {"l": 1, "re": 0.0, "im": -0.5}]},
           "grid": 50, "N": 200, "precision_bits": 96}
    path = write(tmp_path, "pp.json", req)
    code, out, _ = run_cli(["power-probe", "--input", path], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["overall_max"] > 0
    assert "100" in doc["growth"]


def test_measures_json(tmp_path, capsys):
    path = write(tmp_path, "m.json", {"n": 2, "succ": [1, 0]})
    code, out, _ = run_cli(["measures", "--input", path, "--N", "50"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["projector"]["P"] == [["1/2", "1/2"], ["1/2", "1/2"]]
    assert doc["measures"][0]["support"] == [0, 1]


def test_console_entry_point(tmp_path):
    path = tmp_path / "p.json"
    path.write_text(json.dumps(PROB))
    proc = subprocess.run(
        [sys.executable, "-m", "cohomeq.cli", "solve-finite", "--input", str(path)],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["residual_zero"] is True
