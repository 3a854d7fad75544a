"""Hierarchical differential evolution (HIDE) with DE, JADE and PSO-DE
baselines, a CEC-2017-style benchmark suite and an experiment harness."""

from .baselines import JADEParams, PSODEParams, run_jade, run_psode
from .benchmarks import ObjectiveFunction, get_function, suite, suite_function
from .core import (
    Evaluator,
    Individual,
    Population,
    RngStream,
    RunResult,
    SearchSpace,
    Termination,
)
from .de import DEParams, run_de
from .errors import (
    AggregationError,
    CatalogError,
    ConfigurationError,
    ContractError,
    DimensionError,
    HideError,
    ParseError,
    ValidationError,
)
from .harness import ExperimentConfig, ExperimentReport, compute_wtl, run_algorithm, run_experiment
from .hide import HIDEParams, HierarchyState, run_hide

__version__ = "0.1.0"

__all__ = [
    "AggregationError", "CatalogError", "ConfigurationError", "ContractError", "DEParams",
    "DimensionError", "Evaluator", "ExperimentConfig", "ExperimentReport", "HIDEParams",
    "HideError", "HierarchyState", "Individual", "JADEParams", "ObjectiveFunction", "PSODEParams",
    "ParseError", "Population", "RngStream", "RunResult", "SearchSpace", "Termination",
    "ValidationError", "compute_wtl", "get_function", "run_algorithm", "run_de", "run_experiment",
    "run_hide", "run_jade", "run_psode", "suite", "suite_function",
]
