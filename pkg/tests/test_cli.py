import json
import subprocess
import sys

import pytest

from hide_de.cli import main


def test_run_writes_trace_and_is_deterministic(tmp_path, capsys):
    args = ["run", "--algo", "hide", "--fn", "f1", "--dim", "3", "--seed", "7",
            "--generations", "20", "--np", "10"]
    assert main(args + ["--out", str(tmp_path / "a")]) == 0
    out_a = capsys.readouterr().out
    assert main(args + ["--out", str(tmp_path / "b")]) == 0
    out_b = capsys.readouterr().out
    name = "run_hide_f1_d3_s7.csv"
    a, b = (tmp_path / "a" / name).read_bytes(), (tmp_path / "b" / name).read_bytes()
    assert a == b
    assert a.splitlines()[0] == b"generation,best_so_far" and len(a.splitlines()) == 22
    assert out_a.splitlines()[0] == out_b.splitlines()[0]
    assert out_a.startswith("best ")


def test_run_param_override(tmp_path, capsys):
    assert main(["run", "--algo", "hide", "--fn", "sphere", "--dim", "2", "--generations", "5",
                 "--np", "8", "--param", "crossover='hierarchical'", "--param", "N_l=2",
                 "--out", str(tmp_path)]) == 0
    assert main(["run", "--algo", "de", "--fn", "f1", "--param", "G=1", "--out", str(tmp_path)]) == 1
    assert "bad parameters" in capsys.readouterr().err


def test_bench_list_and_probe(capsys):
    assert main(["bench", "list", "--dim", "10"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 30 and lines[0].split("\t")[:2] == ["f1", "unimodal"]
    assert main(["bench", "probe", "--fn", "f21", "--dim", "10", "--at", "optimum"]) == 0
    assert float(capsys.readouterr().out) == 2100.0
    assert main(["bench", "probe", "--fn", "sphere", "--dim", "2", "--at", "3,4"]) == 0
    assert float(capsys.readouterr().out) == 25.0


def test_runtime_errors_exit_1(capsys):
    assert main(["bench", "probe", "--fn", "f99", "--at", "optimum"]) == 1
    assert main(["bench", "probe", "--fn", "sphere", "--dim", "2", "--at", "1,2,3"]) == 1
    assert main(["bench", "probe", "--fn", "sphere", "--dim", "2", "--at", "a,b"]) == 1
    err = capsys.readouterr().err
    assert err.count("hide-de: error:") == 3


def test_usage_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["run", "--algo", "simplex", "--fn", "f1"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_compare_and_report(tmp_path, capsys):
    cfg = {
        "algorithms": [{"name": "HIDE", "algorithm": "hide", "params": {"NP": 10, "N_l": 2}},
                       {"name": "DE", "algorithm": "de", "params": {"NP": 10}}],
        "functions": ["f1", "f11"], "dim": 10, "runs": 5, "termination": {"max_generations": 50},
    }
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    out = tmp_path / "res"
    assert main(["compare", "--config", str(path), "--runs", "2", "--generations", "10",
                 "--out", str(out)]) == 0
    printed = capsys.readouterr().out
    assert "w/t/l" in printed
    report = json.loads((out / "report.json").read_text())
    assert report["config"]["runs"] == 2
    assert report["config"]["termination"]["max_generations"] == 10
    assert (out / "traces" / "f11_d10.csv").exists()
    assert main(["report", "--in", str(out / "report.json")]) == 0
    assert capsys.readouterr().out == (out / "tables.txt").read_text()


def test_compare_bad_config_and_report(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"algorithms": []}')
    assert main(["compare", "--config", str(bad)]) == 1
    assert main(["compare", "--config", str(tmp_path / "missing.json")]) == 1
    bad.write_text('{"x": 1}')
    assert main(["report", "--in", str(bad)]) == 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hide_de", "bench", "probe", "--fn", "f1",
                           "--dim", "10", "--at", "optimum"], capture_output=True, text=True)
    assert proc.returncode == 0 and float(proc.stdout) == 100.0
    proc = subprocess.run([sys.executable, "-m", "hide_de", "frobnicate"], capture_output=True, text=True)
    assert proc.returncode == 2
