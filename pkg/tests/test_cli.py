import json
import subprocess
import sys

import pytest

from eibounds.cli import main
from eibounds.data import read_csv


@pytest.fixture
def sim(tmp_path):
    def make(example="1", seed=0, p=400, *extra):
        out = tmp_path / f"ex{example}-{seed}.csv"
        assert main(["simulate", "--example", example, "--p", str(p), "--seed", str(seed), "--output", str(out), *extra]) == 0
        return out
    return make


def test_simulate_header_and_reload(sim):
    path = sim("4", 3)
    first = path.read_text()
    assert first.startswith("# example=ex4 p=400 n=150 seed=3")
    ds = read_csv(path)
    assert len(ds) == 400 and ds.has_ground_truth


def test_simulate_params(sim, capsys):
    assert main(["simulate", "--example", "ex1", "--p", "50", "--param", "T=0.5", "--param", "tau=0.1"]) == 0
    out = capsys.readouterr().out
    assert '"T": 0.5' in out and '"tau": 0.1' in out


def test_analyze_json(sim, capsys):
    path = sim("1")
    assert main(["analyze", "--input", str(path), "--x", "0", "1"]) == 0
    body = json.loads(capsys.readouterr().out)
    assert body["config"]["lambda"] == 1.0 and body["config"]["lu"] == "auto"
    rep = body["reports"][0]
    assert set(rep["ci"]) == {"0", "1"}
    assert rep["selection"]["selected"] in (True, False)


def test_analyze_csv_and_white(sim, tmp_path):
    path = sim("2")
    out = tmp_path / "a.csv"
    assert main(["analyze", "--input", str(path), "--format", "csv", "--white", "--prop", "3", "--output", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("dataset,x,lo,hi")
    assert len(lines) == 1 + 9


def test_evaluate_glob_and_workers(sim, tmp_path, capsys):
    for s in range(3):
        sim("1", s)
    pattern = str(tmp_path / "ex1-*.csv")
    assert main(["evaluate", "--glob", pattern, "--format", "csv"]) == 0
    serial = capsys.readouterr().out
    assert main(["evaluate", "--glob", pattern, "--format", "csv", "--workers", "2"]) == 0
    assert capsys.readouterr().out == serial
    assert main(["evaluate", "--glob", pattern, "--records", "--heuristic2"]) == 0
    body = json.loads(capsys.readouterr().out)
    assert body["n_datasets"] == 3 and len(body["records"]) == 3
    assert body["config"]["heuristic2"] is True


def test_exit_codes(tmp_path, capsys):
    assert main(["analyze", "--input", str(tmp_path / "missing.csv")]) == 2
    bad = tmp_path / "bad.csv"
    bad.write_text("id,n,x,t\np1,10,2.0,0.1\n")
    assert main(["analyze", "--input", str(bad)]) == 1
    assert "x" in capsys.readouterr().err
    assert main(["evaluate", "--glob", str(tmp_path / "none-*.csv")]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["analyze", "--input", str(bad), "--lambda", "x"])
    assert exc.value.code == 1
    assert main(["analyze", "--input", str(bad), "--lambda", "1.5"]) == 1
    assert main(["simulate", "--example", "9"]) == 1


def test_evaluate_without_truth(tmp_path):
    f = tmp_path / "nt.csv"
    f.write_text("id,n,x,t\n" + "".join(f"p{i},100,{0.1 + 0.08 * i},{0.3}\n" for i in range(10)))
    assert main(["evaluate", "--input", str(f)]) == 1


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "eibounds.cli", "simulate", "--example", "3", "--p", "5"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.splitlines()[1] == "id,n,x,t,beta_b,beta_w"
