import csv
import json
import logging
from pathlib import Path

import numpy as np
import pytest

from hide_de import harness
from hide_de.core import Termination
from hide_de.errors import AggregationError, ConfigurationError
from hide_de.harness import (
    AlgorithmEntry,
    ExperimentConfig,
    ExperimentReport,
    RunStats,
    compute_wtl,
    export_traces,
    format_table,
    run_experiment,
    sample_indices,
    wtl_from_table,
    write_outputs,
)

PUBLISHED = Path(__file__).parent / "data" / "published_d30.csv"
ALGOS = ("DE", "JADE", "PSODE", "HIDE")


def published(metric="best", functions=None):
    with open(PUBLISHED) as fh:
        rows = list(csv.DictReader(fh))
    return {
        r["function"]: {a: float(r[f"{a}_{metric}"]) for a in ALGOS}
        for r in rows
        if functions is None or r["function"] in functions
    }


def small_config(**kw):
    base = dict(
        algorithms=[AlgorithmEntry("HIDE", "hide", {"NP": 10, "N_l": 2}),
                    AlgorithmEntry("DE", "de", {"NP": 10})],
        functions=["f1", "f5"], dim=3, runs=3, termination=Termination(15), trace_stride=4,
    )
    base.update(kw)
    return ExperimentConfig(**base)


def test_wtl_on_published_rows():
    s = wtl_from_table(published("best", {"f1", "f21", "f22"}))
    assert s.outcomes["f1"]["HIDE"] == "w"
    assert s.outcomes["f21"]["HIDE"] == "w"
    assert s.outcomes["f22"] == {"DE": "l", "JADE": "w", "PSODE": "l", "HIDE": "l"}


def test_wtl_full_published_hide_row():
    assert wtl_from_table(published("best")).counts["HIDE"] == (15, 2, 13)
    s = wtl_from_table(published("best"))
    assert s.outcomes["f2"]["JADE"] == s.outcomes["f2"]["HIDE"] == "t"
    assert s.outcomes["f28"]["JADE"] == s.outcomes["f28"]["HIDE"] == "t"


def test_wtl_tolerance_and_errors():
    t = {"a": {"X": 1.0, "Y": 1.0 + 1e-9}, "b": {"X": 2.0, "Y": 1.0}}
    s = wtl_from_table(t)
    assert s.counts == {"X": (0, 1, 1), "Y": (1, 1, 0)}
    assert wtl_from_table(t, tolerance=0.0).outcomes["a"] == {"X": "w", "Y": "l"}
    with pytest.raises(AggregationError):
        wtl_from_table({"a": {"X": 1.0, "Y": 2.0}, "b": {"X": 1.0}})
    with pytest.raises(AggregationError):
        wtl_from_table({"a": {"X": 1.0}})


def test_run_stats_population_std():
    s = RunStats.from_finals([1.0, 3.0])
    assert (s.best, s.mean, s.std) == (1.0, 2.0, 1.0)


def test_sample_indices_keep_first_and_last():
    assert sample_indices(11, 4) == [0, 4, 8, 10]
    assert sample_indices(9, 4) == [0, 4, 8]
    assert sample_indices(1, 5) == [0]


def test_config_round_trip_and_validation(tmp_path):
    cfg = small_config()
    path = tmp_path / "c.json"
    path.write_text(json.dumps(cfg.to_dict()))
    back = ExperimentConfig.load(path)
    assert back.to_dict() == cfg.to_dict()
    with pytest.raises(ConfigurationError):
        ExperimentConfig.from_dict({**cfg.to_dict(), "bogus": 1})
    with pytest.raises(ConfigurationError):
        small_config(functions=["f99"]).validate()
    with pytest.raises(ConfigurationError):
        small_config(algorithms=[AlgorithmEntry("X", "nelder-mead")]).validate()
    with pytest.raises(ConfigurationError):
        small_config(algorithms=[AlgorithmEntry("X", "de", {"F": 9.0})]).validate()
    path.write_text("{not json")
    with pytest.raises(ConfigurationError):
        ExperimentConfig.load(path)


def test_shipped_configs_load():
    root = Path(__file__).parent.parent / "configs"
    for p in root.glob("*.json"):
        ExperimentConfig.load(p).validate()


def test_run_experiment_seeds_stats_and_budget():
    report = run_experiment(small_config())
    assert report.algorithms == ["HIDE", "DE"] and report.functions == ["f1", "f5"]
    cell = report.cell("DE", "f5")
    assert [r.seed for r in cell.runs] == [0, 1, 2]
    assert cell.stats.best == min(r.final for r in cell.runs)
    assert cell.runs[0].trace_generations == [0, 4, 8, 12, 15]
    assert all(r.evaluations == 10 + 15 * 10 for r in cell.runs)
    single = harness.run_algorithm("de", harness.get_function("f5", 3), {"NP": 10}, Termination(15), 1)
    assert cell.runs[1].final == single.best_fitness


def _strip_times(report):
    d = report.to_dict()
    for c in d["cells"]:
        for r in c["runs"]:
            r["wall_time"] = 0.0
    return d


def test_parallel_matches_serial():
    serial = run_experiment(small_config(jobs=1))
    parallel = run_experiment(small_config(jobs=2))
    assert _strip_times(serial)["cells"] == _strip_times(parallel)["cells"]


def test_failed_runs_are_excluded(monkeypatch, caplog):
    real = harness.ALGORITHMS["de"]

    def flaky(space, params, f, termination, seed, **kw):
        if seed == 1:
            raise RuntimeError("boom")
        return real[1](space, params, f, termination, seed, **kw)

    monkeypatch.setitem(harness.ALGORITHMS, "de", (real[0], flaky))
    with caplog.at_level(logging.WARNING):
        report = run_experiment(small_config())
    cell = report.cell("DE", "f1")
    assert cell.failures == 1 and len(cell.stats.per_run_finals) == 2
    assert "1 of 3 runs failed" in caplog.text


def test_report_json_round_trip(tmp_path):
    report = run_experiment(small_config(runs=2))
    path = report.save(tmp_path / "r.json")
    assert ExperimentReport.load(path) == report


def test_compute_wtl_on_report_and_mismatch():
    report = run_experiment(small_config(runs=2))
    s = compute_wtl(report, "mean")
    assert sum(sum(c) for c in s.counts.values()) >= 2 * len(report.functions)
    report.cells = report.cells[:-1]
    with pytest.raises(AggregationError):
        compute_wtl(report)
    with pytest.raises(ConfigurationError):
        compute_wtl(report, "median")


def test_export_traces(tmp_path):
    report = run_experiment(small_config(runs=2))
    paths = export_traces(report, tmp_path / "traces")
    assert sorted(p.name for p in paths) == ["f1_d3.csv", "f5_d3.csv"]
    raw = paths[0].read_bytes()
    assert b"\r\n" not in raw
    rows = list(csv.reader(raw.decode().splitlines()))
    assert rows[0] == ["generation", "HIDE", "DE"]
    assert [int(r[0]) for r in rows[1:]] == [0, 4, 8, 12, 15]
    de_mean = np.mean([r.trace for r in report.cell("DE", "f1").runs], axis=0)
    assert np.allclose([float(r[2]) for r in rows[1:]], de_mean)


def test_write_outputs_and_table(tmp_path):
    report = run_experiment(small_config(runs=2))
    paths = write_outputs(report, tmp_path)
    text = paths["tables"].read_text()
    assert "w/t/l" in text and text == format_table(report)
    assert paths["report"].exists() and len(paths["traces"]) == 2
