import csv
import json
import math

import pytest

from qwthermo.cli import main

PI4 = "0.7853981633974483"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_evolve_localized_tail(tmp_path):
    out = tmp_path / "traj.csv"
    argv = ["evolve", "--init", "localized", "--gamma", "0", "--phi", "0", "--theta", PI4, "--steps", "5000", "--out", str(out)]
    assert main(argv) == 0
    rows = read_csv(out)
    assert len(rows) == 5001
    tail = [float(r["re_q"]) for r in rows[4000:]]
    assert sum(tail) / len(tail) == pytest.approx(0.1464, abs=0.005)
    assert {"lambda_plus", "lambda_minus", "entropy_bits"} <= rows[0].keys()
    meta = json.loads((tmp_path / "traj.csv.meta.json").read_text())
    assert meta["command"] == "evolve" and meta["config"]["steps"] == 5000 and "version" in meta


def test_evolve_zero_steps(capsys):
    code, out, err = run(capsys, "evolve", "--steps", "0")
    assert code == 0
    assert len(out.strip().splitlines()) == 2
    assert json.loads(err)["command"] == "evolve"


def test_evolve_gaussian(tmp_path):
    out = tmp_path / "g.csv"
    argv = ["evolve", "--init", "gaussian", "--sigma0", "10", "--gamma", "1.0471975511965976",
            "--phi", "0.9553166181245093", "--theta", PI4, "--steps", "1000", "--out", str(out)]
    assert main(argv) == 0
    rows = read_csv(out)
    assert max(abs(float(r["re_q"]) - 0.25) for r in rows[200:]) < 0.01


def test_evolve_is_deterministic(tmp_path):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        assert main(["evolve", "--gamma", "1.2", "--phi", "0.4", "--steps", "200", "--out", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_thermo_chi(capsys):
    code, out, _ = run(capsys, "thermo", "--chi", "0.0428932")
    assert code == 0
    assert json.loads(out)["temperature"] == pytest.approx(2.26918, abs=1e-5)


def test_thermo_localized(capsys):
    code, out, _ = run(capsys, "thermo", "--localized", "--gamma", PI4, "--phi", "0")
    rec = json.loads(out)
    assert code == 0 and rec["t_ratio"] == pytest.approx(0.656, abs=1e-3)


def test_thermo_distributed(capsys):
    code, out, _ = run(capsys, "thermo", "--distributed", "--gamma", "1.0471975511965976", "--theta", PI4)
    rec = json.loads(out)
    assert code == 0 and rec["beta"] == pytest.approx(0.881374, abs=1e-6)


def test_thermo_infinite_and_table(capsys):
    code, out, _ = run(capsys, "thermo", "--chi", "0")
    assert code == 0 and json.loads(out)["temperature"] == "inf"
    code, out, _ = run(capsys, "thermo", "--table", "5")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 6 and lines[0].startswith("chi,")


def test_thermo_validation(capsys):
    code, _, err = run(capsys, "thermo", "--chi", "0.3")
    assert code == 2 and "chi" in err
    code, _, err = run(capsys, "thermo", "--distributed", "--gamma", "0.5235987755982988", "--theta", "1.0471975511965976")
    assert code == 2 and "cos gamma" in err
    code, _, _ = run(capsys, "thermo")
    assert code == 2


def test_isotherms(tmp_path):
    out = tmp_path / "iso.csv"
    assert main(["isotherms", "--mode", "localized", "--levels", "1.0", "--samples", "16", "--out", str(out)]) == 0
    rows = read_csv(out)
    assert {r["branch_id"] for r in rows} == {"0", "1", "2", "3", "4"}
    levels = "6.5,3.2,2.2,1.6,1.3,1.1,0.9,0.8,0.7,0.68,0.66"
    assert main(["isotherms", "--levels", levels, "--samples", "16", "--out", str(out)]) == 0
    assert len({r["t_ratio_or_T"] for r in read_csv(out)}) == 11
    assert main(["isotherms", "--mode", "distributed", "--levels", "0.5,1,2,5", "--samples", "16", "--out", str(out)]) == 0
    rows = read_csv(out)
    for level in ("0.5", "1", "2", "5"):
        assert {r["branch_id"] for r in rows if r["t_ratio_or_T"] == level} == {"0", "1"}


def test_isotherms_unreachable(capsys):
    code, _, err = run(capsys, "isotherms", "--levels", "0.5")
    assert code == 2 and "outside" in err


def test_transient_gaussian_negligible(capsys, tmp_path):
    env = tmp_path / "env.csv"
    code, out, _ = run(capsys, "transient", "--init", "gaussian", "--gamma", "1.0471975511965976",
                       "--theta", PI4, "--steps", "1000", "--envelope", str(env))
    rec = json.loads(out)
    assert code == 0 and rec["negligible_transient"] is True


def test_transient_localized(tmp_path):
    out, env = tmp_path / "fit.json", tmp_path / "env.csv"
    argv = ["transient", "--gamma", PI4, "--phi", str(math.pi / 8), "--steps", "3000",
            "--out", str(out), "--envelope", str(env)]
    assert main(argv) == 0
    rec = json.loads(out.read_text())
    assert rec["exponent_c"] == pytest.approx(0.5, abs=0.06)
    assert set(rec) >= {"exponent_c", "amplitude_K", "residual_rms", "window", "n_peaks"}
    rows = read_csv(env)
    assert {r["branch"] for r in rows} == {"upper", "lower"}


def test_master_closed_form(tmp_path):
    out = tmp_path / "m.csv"
    argv = ["master", "--K", "0", "--d", "0.1", "--w-a", "0.2", "--w-b", "0.2", "--lambda-plus", "0.5",
            "--t0", "1", "--t1", "20", "--out", str(out)]
    assert main(argv) == 0
    rows = read_csv(out)
    assert list(rows[0]) == ["t", "lambda_plus_numeric", "lambda_plus_closed", "abs_err"]
    assert max(float(r["abs_err"]) for r in rows) < 1e-8


def test_master_defaults_and_balance(capsys):
    code, out, _ = run(capsys, "master")
    assert code == 0 and out.startswith("t,lambda_plus_numeric,lambda_plus_closed,abs_err")
    code, _, err = run(capsys, "master", "--w-a", "0.2", "--w-b", "0.2", "--lambda-plus", "0.7")
    assert code == 2 and "detailed balance" in err
    code, _, err = run(capsys, "master", "--K", "3")
    assert code == 2 and "negative" in err


def test_resource_limit(capsys):
    code, _, _ = run(capsys, "evolve", "--steps", "100", "--max-sites", "50")
    assert code == 3


def test_io_error(capsys, tmp_path):
    code, _, _ = run(capsys, "thermo", "--chi", "0.1", "--out", str(tmp_path / "missing" / "x.json"))
    assert code == 4


def test_chigrid_small(capsys):
    code, out, _ = run(capsys, "chigrid", "--n", "3", "--steps", "600", "--tail", "200")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 10
    assert max(float(line.split(",")[-1]) for line in lines[1:]) < 0.01


def test_exponents_small(capsys):
    code, out, _ = run(capsys, "exponents", "--samples", "2", "--steps", "600", "--format", "json")
    assert code == 0 and len(json.loads(out)) >= 1
