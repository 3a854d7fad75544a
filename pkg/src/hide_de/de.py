"""Classical differential evolution, DE/rand/1/bin.

Random draws per generation, in order:

1. ``random((NP, NP))`` donor keys. Row ``i`` with entry ``i`` masked out is
   argsorted; the first three indices are r1, r2, r3.
2. ``integers(0, d, size=NP)`` forced crossover dimensions.
3. ``random((NP, d))`` crossover uniforms.

Trials are compared against the generation-start population (synchronous
update), so the member processing order does not matter.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    Evaluator,
    Population,
    RngStream,
    RunResult,
    SearchSpace,
    Termination,
    as_evaluator,
    drive,
    greedy_mask,
    repair,
    validate_probability,
    validate_weight,
)
from .errors import ConfigurationError, DimensionError


@dataclass(frozen=True)
class DEParams:
    F: float = 0.5
    CR: float = 0.9
    NP: int = 100
    boundary: str = "clip"

    def __post_init__(self):
        validate_weight("F", self.F)
        validate_probability("CR", self.CR)
        if self.NP < 4:
            raise ConfigurationError(f"DE/rand/1 needs NP >= 4 for three distinct donors, got {self.NP}")


def draw_donors(pop_size: int, rng: RngStream, count: int = 3, exclude=None) -> np.ndarray:
    """Distinct donor indices for every member, drawn without replacement.

    Returns an ``(pop_size, count)`` array; row ``i`` never contains ``i``.
    With ``exclude`` given (a single member index) only that row is drawn and
    a 1-D array is returned.
    """
    if pop_size - 1 < count:
        raise ConfigurationError(f"need at least {count + 1} members to draw {count} donors")
    if exclude is not None:
        keys = rng.random(pop_size)
        keys[exclude] = np.inf
        return np.argsort(keys, kind="stable")[:count]
    keys = rng.random((pop_size, pop_size))
    np.fill_diagonal(keys, np.inf)
    return np.argsort(keys, axis=1, kind="stable")[:, :count]


def rand1(base, a, b, F: float) -> np.ndarray:
    """``base + F * (a - b)``."""
    return np.asarray(base, dtype=float) + F * (np.asarray(a, dtype=float) - np.asarray(b, dtype=float))


def mutate_rand1(population: Population, i: int, F: float, rng: RngStream,
                 space: SearchSpace, boundary: str = "clip") -> np.ndarray:
    """Mutant vector for member ``i`` from three random distinct donors."""
    if population.size < 4:
        raise ConfigurationError(f"DE/rand/1 needs NP >= 4, got {population.size}")
    r1, r2, r3 = draw_donors(population.size, rng, 3, exclude=i)
    X = population.positions
    return repair(rand1(X[r1], X[r2], X[r3], F), space, boundary)


def binomial_crossover(u, x, CR: float, rng: RngStream) -> np.ndarray:
    """Dimension-wise mix of mutant ``u`` and target ``x``.

    Coordinate j comes from ``u`` when a uniform draw is below ``CR`` or j is
    the forced index k, otherwise from ``x``. Accepts single vectors or
    ``(n, d)`` stacks (one k per row); for stacks ``CR`` may be a length-n
    vector of per-row rates. Draw order: k first, then the uniforms.
    """
    u = np.asarray(u, dtype=float)
    x = np.asarray(x, dtype=float)
    if u.shape != x.shape:
        raise DimensionError(f"mutant shape {u.shape} differs from target shape {x.shape}")
    if u.ndim not in (1, 2) or u.shape[-1] < 1:
        raise DimensionError(f"expected a vector or a stack of vectors, got shape {u.shape}")
    CR = np.asarray(CR, dtype=float)
    if CR.ndim > 1 or (CR.ndim == 1 and (u.ndim != 2 or CR.shape[0] != u.shape[0])):
        raise DimensionError(f"CR of shape {CR.shape} does not match {u.shape[0]} rows")
    if not np.all((CR >= 0.0) & (CR <= 1.0)):
        raise ConfigurationError(f"CR must lie in [0, 1], got {CR}")
    d = u.shape[-1]
    if u.ndim == 1:
        k = rng.integers(0, d)
        mask = rng.random(d) < CR
        mask[k] = True
    else:
        n = u.shape[0]
        k = rng.integers(0, d, size=n)
        mask = rng.random((n, d)) < (CR[:, None] if CR.ndim == 1 else CR)
        mask[np.arange(n), k] = True
    return np.where(mask, u, x)


def init_population(space: SearchSpace, pop_size: int, evaluator: Evaluator,
                    rng: RngStream) -> Population:
    X = space.uniform(rng, pop_size)
    return Population(X, evaluator(X), 0)


def de_generation(population: Population, params: DEParams, f, rng: RngStream) -> Population:
    """One synchronous DE/rand/1/bin generation; returns a new population."""
    ev = as_evaluator(f)
    NP = population.size
    if NP < 4:
        raise ConfigurationError(f"DE/rand/1 needs NP >= 4, got {NP}")
    X = population.positions
    donors = draw_donors(NP, rng, 3)
    V = rand1(X[donors[:, 0]], X[donors[:, 1]], X[donors[:, 2]], params.F)
    V = repair(V, ev.space, params.boundary)
    trials = binomial_crossover(V, X, params.CR, rng)
    ft = ev(trials)
    accept = greedy_mask(population.fitness, ft)
    return Population(
        np.where(accept[:, None], trials, X),
        np.where(accept, ft, population.fitness),
        population.generation + 1,
    )


def run_de(space: SearchSpace, params: DEParams, f, termination: Termination,
           seed: int, callback=None) -> RunResult:
    """Full DE run.

    Budget: ``NP`` evaluations at initialisation plus ``NP`` per generation.
    ``callback(G, population)`` is invoked after every generation.
    """
    rng = RngStream(seed)
    ev = as_evaluator(f, space)
    pop = init_population(space, params.NP, ev, rng)
    horizon = termination.horizon(params.NP)
    state = {"pop": pop}

    def step(g):
        state["pop"] = de_generation(state["pop"], params, ev, rng)
        if callback is not None:
            callback(g, state["pop"])

    trace, gens = drive(termination, horizon, ev, params.NP,
                        lambda: float(state["pop"].fitness.min()), step)
    pop = state["pop"]
    return RunResult(pop.best(), trace, ev.evaluations, seed, gens, ev.faults, pop)
