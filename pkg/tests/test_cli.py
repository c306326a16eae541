import json

import pytest

from hstumor.cli import main
from hstumor.experiment import read_csv

CFG = """\
name = tiny
[grid]
geometry = interval1d
extent = -2, 2
cells = 40
[model]
gamma = 20
[initial]
kind = tanh_slab
halfwidth = 0.5
[time]
dt = 1e-4
t_end = 0.02
front_every = 50
[compare]
oracle = ball
"""


def test_benchmark_to_file(tmp_path):
    out = tmp_path / "ball.csv"
    assert main(["benchmark", "ball", "--t-end", "0.5", "--every", "1000", "--out", str(out)]) == 0
    data = read_csv(out)
    assert data["R"][-1] == pytest.approx(0.8 * 2.718281828459045**0.25, rel=1e-12)


def test_benchmark_stdout(capsys):
    assert main(["benchmark", "annulus", "--t-end", "0.1", "--every", "500"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "t,r_minus,r_plus"
    assert len(lines) == 4


def test_simulate_and_compare(tmp_path, monkeypatch, capsys):
    cfg = tmp_path / "tiny.cfg"
    cfg.write_text(CFG)
    monkeypatch.setenv("HELESHAW_OUT", str(tmp_path / "out"))
    assert main(["simulate", str(cfg)]) == 0
    run = tmp_path / "out" / "tiny"
    assert (run / "summary.json").exists()
    capsys.readouterr()
    assert main(["compare", str(run / "front.csv"), str(run / "oracle.csv"), "--tol", "0.1"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["labels"] == ["R"]
    assert report["within_tol"] is True


def test_simulate_jobs(tmp_path, monkeypatch):
    cfgs = []
    for name in ("one", "two"):
        p = tmp_path / f"{name}.cfg"
        p.write_text(CFG.replace("name = tiny", f"name = {name}"))
        cfgs.append(str(p))
    monkeypatch.setenv("HELESHAW_OUT", str(tmp_path / "out"))
    assert main(["simulate", *cfgs, "--jobs", "2"]) == 0
    for name in ("one", "two"):
        assert (tmp_path / "out" / name / "front.csv").exists()


def test_bad_config_exit_code(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text(CFG.replace("dt = 1e-4", "dt = 2"))
    assert main(["simulate", str(cfg)]) == 2
    assert "1/G_m" in capsys.readouterr().err


def test_unknown_figure(capsys):
    assert main(["paper", "fig42"]) == 2
    assert "fig1" in capsys.readouterr().err


def test_paper_runs_shipped_figure(tmp_path, monkeypatch):
    monkeypatch.setenv("HELESHAW_OUT", str(tmp_path))
    assert main(["paper", "fig9"]) == 0
    summary = json.loads((tmp_path / "fig9" / "summary.json").read_text())
    assert summary["ok"] and summary["steps"] == 2000
