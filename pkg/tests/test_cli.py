import csv
import json

import numpy as np
import pytest

from gqarch.cli import main
from gqarch.models import sp500_fixture, spec_to_dict
from gqarch.simulate import SimConfig, simulate

Q2_DOC = {"model": spec_to_dict(sp500_fixture("Q2", n_trunc=2000)),
          "simulation": {"n": 2000, "burn_in": 100, "seed": 5, "trunc": 2000}}
ASYM_DOC = {"model": {"type": "asym_garch11", "a": 0.1, "b": 0.5, "c": 0.2, "gamma": 0.3},
            "simulation": {"n": 5000, "burn_in": 200, "seed": 2},
            "experiment": {"replicates": 3, "targets": ["m2", "rho"], "lags": 2}}


def write(tmp_path, doc, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def test_check_q2_table(tmp_path, capsys):
    assert main(["--config", write(tmp_path, Q2_DOC), "check"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0].split() == ["condition", "lhs", "rhs", "verdict"]
    assert all(line.split()[-1] in ("ok", "FAIL") for line in out.splitlines()[1:])


def test_check_json(tmp_path, capsys):
    assert main(["check", "--fixture", "G", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["model"]["type"] == "garch11" and doc["conditions"]


def test_usage_errors(tmp_path, capsys):
    assert main(["frobnicate"]) == 2
    assert main([]) == 2
    assert main(["--config", str(tmp_path / "missing.json"), "check"]) == 2
    assert main(["check"]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["--config", str(bad), "check"]) == 2
    assert main(["simulate", "--fixture", "G"]) == 2   # no length given


def test_help_exits_zero(capsys):
    assert main(["--help"]) == 0


def test_mc_condition_failure(tmp_path, capsys):
    doc = dict(ASYM_DOC, model={**ASYM_DOC["model"], "b": 1.2})
    assert main(["--config", write(tmp_path, doc), "mc"]) == 1
    err = capsys.readouterr().err
    assert "condition garch11_variance violated" in err


def test_mc_report(tmp_path, capsys):
    out = tmp_path / "run"
    assert main(["--config", write(tmp_path, ASYM_DOC), "--seed", "4", "mc", "--out", str(out)]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert set(rep["records"]) == {"m2", "rho[1]", "rho[2]"}
    assert rep["metadata"]["seed"] == 4
    assert json.loads((out / "report.json").read_text())["records"] == rep["records"]


def test_simulate_outputs(tmp_path):
    out = tmp_path / "sim"
    assert main(["--config", write(tmp_path, Q2_DOC), "--out", str(out), "simulate", "--n", "300"]) == 0
    with open(out / "series.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["t", "r", "sigma_sq"] and len(rows) == 301
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["seed"] == 5 and manifest["config"]["n"] == 300
    # the CSV reproduces the library trajectory exactly
    traj = simulate(sp500_fixture("Q2", n_trunc=2000),
                    cfg=SimConfig(n=300, burn_in=100, seed=5, trunc=2000))
    assert np.array_equal(np.array([float(r[1]) for r in rows[1:]]), traj.r)


def test_moments_output(tmp_path, capsys):
    doc = {"model": ASYM_DOC["model"]}
    assert main(["--config", write(tmp_path, doc), "--out", str(tmp_path), "moments", "--lags", "3"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["theory"]["m2"] == pytest.approx(1 / 9, rel=1e-14)
    rows = (tmp_path / "rho.csv").read_text().splitlines()
    assert rows[0] == "t,value" and len(rows) == 4
    assert float(rows[2].split(",")[1]) == pytest.approx(0.00607256, rel=1e-5)


def test_leverage_output(tmp_path, capsys):
    doc = {"model": {"type": "asym_garch11", "a": 0.1, "b": 0.25, "c": 0.2, "gamma": 0.1}}
    args = ["--config", write(tmp_path, doc), "leverage", "--T", "50", "--out", str(tmp_path)]
    assert main(args) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["classification"] == "positive_k"
    rows = (tmp_path / "leverage.csv").read_text().splitlines()
    assert rows[0] == "t,h_t" and len(rows) == 51


def test_estimate_from_csv(tmp_path, capsys):
    traj = simulate(sp500_fixture("G"), cfg=SimConfig(n=2000, burn_in=200, seed=1))
    path = tmp_path / "returns.csv"
    np.savetxt(path, np.column_stack([np.arange(traj.n), traj.r]), delimiter=",",
               header="t,r", comments="", fmt=["%d", "%.17g"])
    assert main(["estimate", str(path), "--family", "garch11", "--out", str(tmp_path)]) == 0
    fit = json.loads(capsys.readouterr().out)
    assert fit == json.loads((tmp_path / "fit.json").read_text())
    assert main(["estimate", str(tmp_path / "nope.csv")]) == 2


def test_estimate_degenerate_series(tmp_path, capsys):
    path = tmp_path / "flat.csv"
    path.write_text("\n".join(["0.0"] * 100))
    assert main(["estimate", str(path), "--family", "garch11"]) == 1


def test_hist_output(tmp_path, capsys):
    args = ["--config", write(tmp_path, Q2_DOC), "--out", str(tmp_path / "h"),
            "hist", "--gammas", "0", "0.5", "--n", "3000"]
    assert main(args) == 0
    rep = json.loads(capsys.readouterr().out)
    assert set(rep) == {"0.0", "0.5"}
    rows = (tmp_path / "h" / "density_gamma_0.5.csv").read_text().splitlines()
    assert rows[0] == "sigma,density"
    assert main(args[:4] + ["hist", "--gammas", "1.0", "--n", "100"]) == 1
