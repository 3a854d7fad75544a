"""Command-line entry point: ``hide-de run | compare | bench | report``.

Exit status is 0 on success, 1 on a runtime failure (with a one-line
diagnostic on stderr) and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import ast
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .benchmarks import SUITE_SEED, catalog, get_function
from .core import Termination
from .errors import HideError
from .harness import (
    ALGORITHMS,
    DEFAULT_TOLERANCE,
    ExperimentConfig,
    ExperimentReport,
    format_table,
    make_params,
    run_algorithm,
    run_experiment,
    write_outputs,
    write_run_trace,
)


def _param(text: str):
    key, sep, value = text.partition("=")
    if not sep or not key:
        raise argparse.ArgumentTypeError(f"expected KEY=VALUE, got {text!r}")
    try:
        value = ast.literal_eval(value)
    except (ValueError, SyntaxError):
        pass
    return key, value


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hide-de", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="one seeded run of one algorithm on one function")
    r.add_argument("--algo", required=True, choices=sorted(ALGORITHMS))
    r.add_argument("--fn", required=True, help="f1..f30 or a base function name")
    r.add_argument("--dim", type=_positive, default=10)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--generations", type=_positive, default=1000)
    r.add_argument("--np", dest="NP", type=_positive, default=100)
    r.add_argument("--param", type=_param, action="append", default=[], metavar="KEY=VALUE",
                   help="algorithm parameter override, repeatable (e.g. CR=0.45)")
    r.add_argument("--suite-seed", type=int, default=SUITE_SEED)
    r.add_argument("--out", default=".", help="directory for the trace CSV")

    c = sub.add_parser("compare", help="run an experiment campaign from a JSON config")
    c.add_argument("--config", required=True)
    c.add_argument("--runs", type=_positive)
    c.add_argument("--generations", type=_positive)
    c.add_argument("--dim", type=_positive)
    c.add_argument("--jobs", type=_positive)
    c.add_argument("--seed", type=int, help="base seed")
    c.add_argument("--out", help="output directory (overrides the config)")

    b = sub.add_parser("bench", help="inspect the benchmark suite")
    bsub = b.add_subparsers(dest="bench_command", required=True)
    bl = bsub.add_parser("list", help="list the suite functions")
    bl.add_argument("--dim", type=_positive, default=10)
    bl.add_argument("--suite-seed", type=int, default=SUITE_SEED)
    bp = bsub.add_parser("probe", help="evaluate a function at a point")
    bp.add_argument("--fn", required=True)
    bp.add_argument("--dim", type=_positive, default=10)
    bp.add_argument("--at", required=True, help="'optimum' or comma-separated coordinates")
    bp.add_argument("--suite-seed", type=int, default=SUITE_SEED)

    rep = sub.add_parser("report", help="print tables from a saved report.json")
    rep.add_argument("--in", dest="path", required=True)
    rep.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    return p


def cmd_run(args) -> int:
    params = dict(args.param)
    params["NP"] = args.NP
    f = get_function(args.fn, args.dim, args.suite_seed)
    result = run_algorithm(args.algo, f, make_params(args.algo, params),
                           Termination(max_generations=args.generations), args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    path = write_run_trace(out / f"run_{args.algo}_{args.fn}_d{args.dim}_s{args.seed}.csv", result.trace)
    print(f"best {result.best_fitness!r}")
    print(f"error {result.best_fitness - f.optimum[1]!r}")
    print(f"evaluations {result.evaluations_used}")
    print(f"trace {path}")
    return 0


def cmd_compare(args) -> int:
    cfg = ExperimentConfig.load(args.config)
    if args.runs is not None:
        cfg.runs = args.runs
    if args.generations is not None:
        cfg.termination = Termination(max_generations=args.generations,
                                      max_evaluations=cfg.termination.max_evaluations,
                                      target_fitness=cfg.termination.target_fitness)
    if args.dim is not None:
        cfg.dim = args.dim
    if args.jobs is not None:
        cfg.jobs = args.jobs
    if args.seed is not None:
        cfg.base_seed = args.seed
    out = args.out or cfg.output_dir or "results"
    cfg.output_dir = out
    report = run_experiment(cfg)
    paths = write_outputs(report, out, cfg.tolerance)
    if "tables" in paths:
        print(paths["tables"].read_text(), end="")
    print(f"report {paths['report']}")
    return 0


def cmd_bench(args) -> int:
    if args.bench_command == "list":
        for fid, category, description in catalog(args.dim, args.suite_seed):
            print(f"{fid}\t{category}\t{description}")
        return 0
    f = get_function(args.fn, args.dim, args.suite_seed)
    if args.at == "optimum":
        x = f.optimum[0]
    else:
        try:
            x = np.array([float(t) for t in args.at.split(",")])
        except ValueError:
            raise HideError(f"--at expects 'optimum' or comma-separated numbers, got {args.at!r}") from None
    print(repr(f(x)))
    return 0


def cmd_report(args) -> int:
    try:
        report = ExperimentReport.load(args.path)
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise HideError(f"{args.path}: not a report file ({exc})") from None
    print(format_table(report, args.tolerance), end="")
    return 0


COMMANDS = {"run": cmd_run, "compare": cmd_compare, "bench": cmd_bench, "report": cmd_report}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (HideError, OSError, ValueError) as exc:
        print(f"hide-de: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
