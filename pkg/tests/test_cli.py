import json

import pytest

from qgraph.cli import emit, main
from qgraph.config import ConfigError, RunConfig


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def test_config_round_trip(tmp_path):
    cfg = RunConfig(samples=123, format="csv", workers=3)
    path = tmp_path / "cfg.json"
    cfg.save(path)
    assert RunConfig.load(path) == cfg
    assert RunConfig.from_json(json.loads(cfg.dumps())) == cfg


def test_config_validation_and_env():
    with pytest.raises(ConfigError):
        RunConfig(samples=0)
    with pytest.raises(ConfigError):
        RunConfig(format="xml")
    with pytest.raises(ConfigError):
        RunConfig.from_json({"bogus": 1})
    assert RunConfig().with_env({"QGRAPH_THREADS": "6"}).workers == 6
    assert RunConfig().with_env({}).workers == 1
    with pytest.raises(ConfigError):
        RunConfig().with_env({"QGRAPH_THREADS": "many"})


def test_classify_examples(capsys):
    code, rep = run_json(capsys, "classify", "place=Qp:3; diag=1,1")
    assert code == 0 and rep["schema"] == 1
    assert rep["verdict"] == "anisotropic" and rep["coloring"]["colors"] == 81
    code, rep = run_json(capsys, "classify", "place=R; diag=1,-1")
    assert rep["verdict"] == "isotropic"
    assert [r["T"] for r in rep["bound_table"]] == [5, 10, 20, 40]
    assert rep["bound_table"][1]["analytic_bound"] == pytest.approx(2.5666, abs=1e-4)
    code, rep = run_json(capsys, "classify", "place=Q; diag=1,1")
    assert rep["witness_place"] == "R"


def test_classify_parse_error_has_position(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["classify", "place=R; diag=1,x"])
    assert exc.value.code == 2
    assert "position 16" in capsys.readouterr().err


def test_bound_examples(capsys):
    code, rep = run_json(capsys, "bound", "--place", "R", "--T", "10", "--no-search")
    assert rep["analytic_bound"] == pytest.approx(2.5666, abs=1e-4)
    code, rep = run_json(capsys, "bound", "--place", "Qp:3", "--T", "2")
    assert code == 0 and rep["analytic_bound"] == 2.25 and rep["floor_ok"]
    with pytest.raises(SystemExit) as exc:
        main(["bound", "--place", "Qp:2", "--T", "2"])
    assert exc.value.code == 2
    assert "odd prime" in capsys.readouterr().err


def test_fourier_examples(capsys):
    code, rep = run_json(capsys, "fourier", "--place", "R", "--T", "5", "--x", "0", "--y", "0")
    assert rep["mu_hat"] == pytest.approx(1) and rep["method"] == "quadrature"
    code, rep = run_json(capsys, "fourier", "--place", "Qp:3", "--T", "2", "--x", "1", "--y", "0", "--check")
    assert rep["mu_hat_exact"] == "1/2" and rep["check"] == "exact == oracle"
    code, rep = run_json(capsys, "fourier", "--place", "Qp:5", "--T", "2", "--check", "--seed", "11")
    assert code == 0 and rep["check"] == "exact == oracle"


def test_color_and_control(capsys):
    code, rep = run_json(capsys, "color", "verify", "--form", "place=R; diag=1,1", "--samples", "3000", "--control")
    assert code == 0
    assert rep["verification"]["violations"] == 0 and rep["control"]["detected"]
    code, rep = run_json(capsys, "color", "build", "--form", "place=Qp:3; diag=1,1")
    assert rep["scheme"]["colors"] == 81


def test_violations_set_exit_code(capsys, monkeypatch):
    from qgraph import coloring
    monkeypatch.setattr(coloring, "build_box_coloring",
                        lambda radii, n, m=None: coloring.ColoringScheme("real-box", n, 1, 1 / radii.c1, radii=radii))
    code, rep = run_json(capsys, "color", "verify", "--form", "place=R; diag=1,1", "--samples", "100")
    assert code == 1 and rep["ok"] is False


def test_clique_regular_table(capsys):
    code, rep = run_json(capsys, "clique", "--n", "4")
    assert rep["certificate"]["size"] == 5 and rep["sharp"]
    code, rep = run_json(capsys, "regular", "cn", "--n", "2")
    assert rep["C_n"] == 7
    code, rep = run_json(capsys, "regular", "check", "--samples", "200")
    assert code == 0 and rep["failures"] == 0
    code, out = run(capsys, "table", "--max-p", "11", "--format", "csv")
    assert out.splitlines() == ["p,m,colors", "3,1,81", "7,1,2401", "11,1,14641"]


def test_outputs_are_reproducible(capsys, tmp_path):
    argv = ["color", "verify", "--form", "place=Qp:3; diag=1,1", "--samples", "300", "--seed", "5", "--control"]
    _, a = run(capsys, *argv)
    _, b = run(capsys, *argv, "--workers", "1")
    assert a == b
    cfg = tmp_path / "c.json"
    RunConfig(grid_resolution=31, grid_lo=-10, grid_hi=10, refine_starts=1).save(cfg)
    _, c = run(capsys, "bound", "--place", "R", "--T", "5", "--config", str(cfg))
    _, d = run(capsys, "bound", "--place", "R", "--T", "5", "--config", str(cfg))
    assert c == d and json.loads(c)["search"]["resolution"] == 31


def test_emit_formats():
    rep = {"a": 1, "rows": [{"x": 1, "y": [1, 2]}]}
    assert json.loads(emit(rep, "json"))["schema"] == 1
    assert emit(rep, "csv", "rows").splitlines() == ["x,y", '1,"[1, 2]"']
    assert "a: 1" in emit(rep, "text")
    assert "seconds" not in emit({"search": {"seconds": 1.0}}, "json")
