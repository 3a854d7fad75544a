"""A small comparison campaign with win/tie/loss counts and trace export.

Uses the same machinery as ``hide-de compare``. Results go to
``results/demo`` (the report JSON, a text table and per-function trace CSVs).

    python3 demos/03_campaign.py
"""

from hide_de import ExperimentConfig, compute_wtl, run_experiment
from hide_de.harness import format_table, write_outputs

cfg = ExperimentConfig.from_dict({
    "algorithms": [
        {"name": "HIDE", "algorithm": "hide"},
        {"name": "DE", "algorithm": "de"},
        {"name": "JADE", "algorithm": "jade"},
    ],
    "functions": ["f1", "f5", "f11", "f21"],
    "dim": 10,
    "runs": 5,
    "termination": {"max_generations": 150},
    "trace_stride": 10,
})

report = run_experiment(cfg)
print(format_table(report))

# Per-function outcome under the best-of-runs metric.
best = compute_wtl(report, "best")
for fid, marks in best.outcomes.items():
    print(fid, marks)

paths = write_outputs(report, "results/demo")
print("\nwrote", paths["report"], "and", len(paths["traces"]), "trace files")
