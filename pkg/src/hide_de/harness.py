"""Experiment campaigns: many algorithms x many functions x many seeded runs.

Run ``r`` of every (algorithm, function) cell uses seed ``base_seed + r``,
whatever the execution order or the number of worker processes, so a report
depends only on its configuration (wall times aside).

Config files are JSON::

    {
      "algorithms": [{"name": "HIDE", "algorithm": "hide", "params": {"HC": 0.27}},
                     {"name": "DE", "algorithm": "de"}],
      "functions": ["f1", "f5", "f21"],
      "dim": 30,
      "runs": 100,
      "termination": {"max_generations": 1000},
      "base_seed": 0,
      "suite_seed": 2017,
      "trace_stride": 10,
      "jobs": 1,
      "tolerance": 1e-8,
      "output_dir": "results"
    }
"""

from __future__ import annotations

import csv
import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Optional

import numpy as np

from .baselines import JADEParams, PSODEParams, run_jade, run_psode
from .benchmarks import SUITE_SEED, get_function
from .core import Termination
from .de import DEParams, run_de
from .errors import AggregationError, CatalogError, ConfigurationError, HideError
from .hide import HIDEParams, run_hide

logger = logging.getLogger(__name__)

ALGORITHMS = {
    "de": (DEParams, run_de),
    "hide": (HIDEParams, run_hide),
    "jade": (JADEParams, run_jade),
    "psode": (PSODEParams, run_psode),
}
DEFAULT_TOLERANCE = 1e-8


def make_params(algorithm: str, params: Optional[dict] = None):
    try:
        cls = ALGORITHMS[algorithm][0]
    except KeyError:
        raise ConfigurationError(f"unknown algorithm {algorithm!r}; known: {sorted(ALGORITHMS)}") from None
    params = dict(params or {})
    for key in ("F_range", "CR_range"):
        if key in params:
            params[key] = tuple(params[key])
    try:
        return cls(**params)
    except TypeError as exc:
        raise ConfigurationError(f"bad parameters for {algorithm}: {exc}") from None


def run_algorithm(algorithm: str, f, params=None, termination: Optional[Termination] = None,
                  seed: int = 0, **kwargs):
    """Run one registered algorithm on objective ``f`` (which carries its space)."""
    if params is None or isinstance(params, dict):
        params = make_params(algorithm, params)
    runner = ALGORITHMS[algorithm][1]
    return runner(f.space, params, f, termination or Termination(), seed, **kwargs)


@dataclass(frozen=True)
class AlgorithmEntry:
    name: str
    algorithm: str
    params: dict = field(default_factory=dict)

    def build(self):
        return make_params(self.algorithm, self.params)


@dataclass
class ExperimentConfig:
    algorithms: list
    functions: list
    dim: int = 10
    runs: int = 100
    termination: Termination = field(default_factory=Termination)
    base_seed: int = 0
    suite_seed: int = SUITE_SEED
    trace_stride: int = 1
    jobs: int = 1
    tolerance: float = DEFAULT_TOLERANCE
    output_dir: Optional[str] = None

    def validate(self):
        if self.runs < 1:
            raise ConfigurationError("runs must be >= 1")
        if self.trace_stride < 1:
            raise ConfigurationError("trace_stride must be >= 1")
        if self.jobs < 1:
            raise ConfigurationError("jobs must be >= 1")
        if not self.algorithms or not self.functions:
            raise ConfigurationError("config needs at least one algorithm and one function")
        names = [a.name for a in self.algorithms]
        if len(set(names)) != len(names):
            raise ConfigurationError(f"algorithm names must be unique, got {names}")
        for a in self.algorithms:
            a.build()
        for fid in self.functions:
            try:
                get_function(fid, self.dim, self.suite_seed)
            except CatalogError as exc:
                raise ConfigurationError(str(exc)) from None

    def to_dict(self) -> dict:
        return {
            "algorithms": [asdict(a) for a in self.algorithms],
            "functions": list(self.functions),
            "dim": self.dim,
            "runs": self.runs,
            "termination": self.termination.to_dict(),
            "base_seed": self.base_seed,
            "suite_seed": self.suite_seed,
            "trace_stride": self.trace_stride,
            "jobs": self.jobs,
            "tolerance": self.tolerance,
            "output_dir": self.output_dir,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(d) - known
        if unknown:
            raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
        try:
            algos = [
                AlgorithmEntry(a.get("name", a["algorithm"]), a["algorithm"], dict(a.get("params", {})))
                for a in d["algorithms"]
            ]
            term = Termination(**d.get("termination", {}))
        except (KeyError, TypeError) as exc:
            raise ConfigurationError(f"malformed config: {exc}") from None
        rest = {k: v for k, v in d.items() if k not in ("algorithms", "termination")}
        try:
            return cls(algorithms=algos, termination=term, **rest)
        except TypeError as exc:
            raise ConfigurationError(f"malformed config: {exc}") from None

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        try:
            return cls.from_dict(json.loads(Path(path).read_text()))
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"{path}: invalid JSON ({exc})") from None


@dataclass
class RunRecord:
    seed: int
    final: Optional[float]
    trace: list
    trace_generations: list
    evaluations: int = 0
    generations: int = 0
    faults: int = 0
    wall_time: float = 0.0
    error: Optional[str] = None

    @property
    def failed(self) -> bool:
        return self.error is not None


@dataclass
class RunStats:
    best: float
    mean: float
    std: float
    per_run_finals: list

    @classmethod
    def from_finals(cls, finals) -> "RunStats":
        v = np.asarray(finals, dtype=float)
        return cls(float(v.min()), float(v.mean()), float(v.std()), v.tolist())


@dataclass
class Cell:
    algorithm: str
    function: str
    dim: int
    runs: list
    stats: Optional[RunStats] = None

    @property
    def failures(self) -> int:
        return sum(r.failed for r in self.runs)


@dataclass
class ExperimentReport:
    config: dict
    cells: list

    @property
    def algorithms(self) -> list[str]:
        return list(dict.fromkeys(c.algorithm for c in self.cells))

    @property
    def functions(self) -> list[str]:
        return list(dict.fromkeys(c.function for c in self.cells))

    def cell(self, algorithm: str, function: str, dim: Optional[int] = None) -> Cell:
        for c in self.cells:
            if c.algorithm == algorithm and c.function == function and (dim is None or c.dim == dim):
                return c
        raise KeyError((algorithm, function, dim))

    def to_dict(self) -> dict:
        return {"config": self.config, "cells": [asdict(c) for c in self.cells]}

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentReport":
        cells = []
        for c in d["cells"]:
            runs = [RunRecord(**r) for r in c["runs"]]
            stats = RunStats(**c["stats"]) if c.get("stats") is not None else None
            cells.append(Cell(c["algorithm"], c["function"], c["dim"], runs, stats))
        return cls(d["config"], cells)

    def save(self, path) -> Path:
        path = Path(path)
        path.write_text(json.dumps(self.to_dict(), indent=1))
        return path

    @classmethod
    def load(cls, path) -> "ExperimentReport":
        return cls.from_dict(json.loads(Path(path).read_text()))


def sample_indices(n: int, stride: int) -> list[int]:
    """Every ``stride``-th generation from 0, plus the last one."""
    idx = list(range(0, n, stride))
    if idx[-1] != n - 1:
        idx.append(n - 1)
    return idx


@lru_cache(maxsize=64)
def _cached_function(fid: str, dim: int, suite_seed: int):
    return get_function(fid, dim, suite_seed)


def _execute(task) -> RunRecord:
    algorithm, params, fid, dim, suite_seed, term, seed, stride = task
    start = time.perf_counter()
    try:
        f = _cached_function(fid, dim, suite_seed)
        result = run_algorithm(algorithm, f, make_params(algorithm, params), Termination(**term), seed)
    except Exception as exc:  # a failed run is recorded, not fatal
        logger.warning("run failed: %s on %s seed %d: %r", algorithm, fid, seed, exc)
        return RunRecord(seed, None, [], [], wall_time=time.perf_counter() - start, error=repr(exc))
    idx = sample_indices(len(result.trace), stride)
    return RunRecord(
        seed=seed,
        final=result.best_fitness,
        trace=[float(result.trace[i]) for i in idx],
        trace_generations=idx,
        evaluations=result.evaluations_used,
        generations=result.generations,
        faults=result.faults,
        wall_time=time.perf_counter() - start,
    )


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    config.validate()
    keys, tasks = [], []
    for entry in config.algorithms:
        for fid in config.functions:
            keys.append((entry, fid))
            for r in range(config.runs):
                tasks.append((entry.algorithm, entry.params, fid, config.dim, config.suite_seed,
                              config.termination.to_dict(), config.base_seed + r, config.trace_stride))
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            records = list(pool.map(_execute, tasks, chunksize=max(1, len(tasks) // (4 * config.jobs))))
    else:
        records = [_execute(t) for t in tasks]

    cells = []
    for k, (entry, fid) in enumerate(keys):
        runs = records[k * config.runs:(k + 1) * config.runs]
        ok = [r.final for r in runs if not r.failed]
        if len(ok) < len(runs):
            logger.warning("%s on %s: %d of %d runs failed and are excluded",
                           entry.name, fid, len(runs) - len(ok), len(runs))
        stats = RunStats.from_finals(ok) if ok else None
        cells.append(Cell(entry.name, fid, config.dim, runs, stats))
    return ExperimentReport(config.to_dict(), cells)


# --- win / tie / loss ---------------------------------------------------------

@dataclass
class WTLSummary:
    metric: str
    tolerance: float
    counts: dict
    outcomes: dict

    def winners(self, function: str) -> list[str]:
        marks = self.outcomes[function]
        return [a for a, m in marks.items() if m in ("w", "t")]


def wtl_from_table(table: dict, tolerance: float = DEFAULT_TOLERANCE, metric: str = "best") -> WTLSummary:
    """Score ``{function: {algorithm: value}}`` (lower is better).

    Per function, every algorithm within ``tolerance`` of the minimum is in
    the best group: a group of one gets a win, a larger group gets ties, the
    rest lose.
    """
    algos = None
    for fn, row in table.items():
        if algos is None:
            algos = list(row)
        elif set(row) != set(algos):
            raise AggregationError(f"function {fn} covers {sorted(row)}, expected {sorted(algos)}")
    if algos is None or len(algos) < 2:
        raise AggregationError("w/t/l needs at least two algorithms")
    counts = {a: [0, 0, 0] for a in algos}
    outcomes = {}
    for fn, row in table.items():
        vals = {a: (np.inf if v is None or np.isnan(v) else float(v)) for a, v in row.items()}
        m = min(vals.values())
        group = [a for a in algos if vals[a] - m <= tolerance]
        mark = "w" if len(group) == 1 else "t"
        outcomes[fn] = {a: (mark if a in group else "l") for a in algos}
        for a in algos:
            counts[a]["wtl".index(outcomes[fn][a])] += 1
    return WTLSummary(metric, tolerance, {a: tuple(c) for a, c in counts.items()}, outcomes)


def metric_table(report: ExperimentReport, metric: str = "best") -> dict:
    if metric not in ("best", "mean"):
        raise ConfigurationError(f"metric must be 'best' or 'mean', got {metric!r}")
    table: dict = {}
    by_alg: dict = {}
    for c in report.cells:
        value = getattr(c.stats, metric) if c.stats is not None else None
        table.setdefault(c.function, {})[c.algorithm] = value
        by_alg.setdefault(c.algorithm, set()).add(c.function)
    sets = list(by_alg.values())
    if any(s != sets[0] for s in sets):
        raise AggregationError("algorithms were run on different function sets")
    return table


def compute_wtl(report: ExperimentReport, metric: str = "best",
                tolerance: float = DEFAULT_TOLERANCE) -> WTLSummary:
    return wtl_from_table(metric_table(report, metric), tolerance, metric)


# --- output -------------------------------------------------------------------

def _mean_trace(runs: list, length: int) -> np.ndarray:
    rows = []
    for r in runs:
        t = np.asarray(r.trace, dtype=float)
        if t.size < length:
            t = np.concatenate([t, np.full(length - t.size, t[-1])])
        rows.append(t)
    return np.mean(rows, axis=0)


def export_traces(report: ExperimentReport, output_dir) -> list[Path]:
    """One CSV per (function, dim): generation index, then the mean
    best-so-far of every algorithm across its successful runs."""
    out = Path(output_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create trace directory {out}: {exc}") from exc
    groups: dict = {}
    for c in report.cells:
        groups.setdefault((c.function, c.dim), []).append(c)
    paths = []
    for (fid, dim), cells in groups.items():
        columns, gens = [], []
        for c in cells:
            ok = [r for r in c.runs if not r.failed]
            if ok:
                longest = max(ok, key=lambda r: len(r.trace))
                if len(longest.trace_generations) > len(gens):
                    gens = longest.trace_generations
        for c in cells:
            ok = [r for r in c.runs if not r.failed]
            columns.append(_mean_trace(ok, len(gens)) if ok else np.full(len(gens), np.nan))
        path = out / f"{fid}_d{dim}.csv"
        try:
            with open(path, "w", newline="") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(["generation"] + [c.algorithm for c in cells])
                for k, g in enumerate(gens):
                    w.writerow([g] + [repr(float(col[k])) for col in columns])
        except OSError as exc:
            raise OSError(f"cannot write {path}: {exc}") from exc
        paths.append(path)
    return paths


def write_run_trace(path, trace) -> Path:
    path = Path(path)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["generation", "best_so_far"])
        for g, v in enumerate(trace):
            w.writerow([g, repr(float(v))])
    return path


def _fmt(v) -> str:
    if v is None:
        return "-"
    return f"{v:.6g}" if abs(v) < 1e7 else f"{v:.4e}"


def format_table(report: ExperimentReport, tolerance: float = DEFAULT_TOLERANCE) -> str:
    """Plain-text best/mean table per function with w/t/l rows."""
    algos = report.algorithms
    best = compute_wtl(report, "best", tolerance)
    mean = compute_wtl(report, "mean", tolerance)
    width = 14
    head = "f_id".ljust(8) + "".join(f"{a + ' best':>{width}}{a + ' mean':>{width}}" for a in algos)
    lines = [f"dimension {report.cells[0].dim}", head, "-" * len(head)]
    for fid in report.functions:
        row = fid.ljust(8)
        for a in algos:
            s = report.cell(a, fid).stats
            b = _fmt(s.best if s else None) + ("*" if best.outcomes[fid][a] != "l" else " ")
            m = _fmt(s.mean if s else None) + ("*" if mean.outcomes[fid][a] != "l" else " ")
            row += f"{b:>{width}}{m:>{width}}"
        lines.append(row)
    lines.append("-" * len(head))
    row = "w/t/l".ljust(8)
    for a in algos:
        row += f"{'/'.join(map(str, best.counts[a])):>{width}}{'/'.join(map(str, mean.counts[a])):>{width}}"
    lines.append(row)
    return "\n".join(lines) + "\n"


def write_outputs(report: ExperimentReport, output_dir, tolerance: float = DEFAULT_TOLERANCE) -> dict:
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {"report": report.save(out / "report.json")}
    if len(report.algorithms) >= 2:
        paths["tables"] = out / "tables.txt"
        paths["tables"].write_text(format_table(report, tolerance))
    paths["traces"] = export_traces(report, out / "traces")
    return paths


__all__ = [
    "ALGORITHMS", "AlgorithmEntry", "Cell", "ExperimentConfig", "ExperimentReport", "HideError",
    "RunRecord", "RunStats", "WTLSummary", "compute_wtl", "export_traces", "format_table",
    "make_params", "run_algorithm", "run_experiment", "wtl_from_table", "write_outputs",
]
