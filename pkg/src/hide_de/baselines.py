"""Comparison optimisers: JADE and a PSO/DE hybrid.

JADE (Zhang & Sanderson, 2009)
    current-to-pbest/1/bin with an optional archive of replaced parents.
    Each member draws ``F_i ~ Cauchy(mu_F, 0.1)`` (redrawn while
    non-positive, truncated at 1) and ``CR_i ~ N(mu_CR, 0.1)`` clipped to
    [0, 1]. After selection ``mu_CR`` moves toward the arithmetic mean and
    ``mu_F`` toward the Lehmer mean of the successful values, at rate ``c``.

    Draw order per generation: Cauchy (plus redraws), normal, pbest picks
    ``integers(0, n_p, NP)``, r1 keys ``random((NP, NP))``, r2 keys
    ``random((NP, NP + |A|))``, crossover (k then uniforms), and finally
    ``random(|A|)`` eviction keys when the archive overflows.

PSO-DE (after Liu, Cai & Wang, 2010)
    A constriction-style PSO step on the particles followed by a
    DE/rand/1/bin step applied to the personal-best set. The DE step draws
    one ``F`` from ``F_range`` and one ``CR`` from ``CR_range`` per
    generation. Velocities start at zero and are limited to half the box
    width per dimension.

    Draw order per generation: ``random((NP, d))`` twice (cognitive, social),
    ``random()`` for F, ``random()`` for CR, donor keys, crossover.

Both use clipping for boundary repair, like DE and HIDE.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    Population,
    RngStream,
    RunResult,
    SearchSpace,
    Termination,
    as_evaluator,
    drive,
    greedy_mask,
    repair,
)
from .de import binomial_crossover, draw_donors, init_population, rand1
from .errors import ConfigurationError


@dataclass(frozen=True)
class JADEParams:
    p: float = 0.05
    c: float = 0.1
    NP: int = 100
    archive_enabled: bool = True
    mu_F: float = 0.5
    mu_CR: float = 0.5
    boundary: str = "clip"

    def __post_init__(self):
        if not 0.0 < self.p <= 1.0:
            raise ConfigurationError(f"p must lie in (0, 1], got {self.p}")
        if not 0.0 <= self.c <= 1.0:
            raise ConfigurationError(f"c must lie in [0, 1], got {self.c}")
        if self.NP < 5:
            raise ConfigurationError(f"JADE needs NP >= 5, got {self.NP}")
        if not 0.0 < self.mu_F <= 1.0 or not 0.0 <= self.mu_CR <= 1.0:
            raise ConfigurationError("initial mu_F must lie in (0, 1] and mu_CR in [0, 1]")

    @property
    def pbest_size(self) -> int:
        return max(1, int(round(self.p * self.NP)))


@dataclass
class JADEState:
    mu_F: float
    mu_CR: float
    archive: np.ndarray


def lehmer_mean(values) -> float:
    v = np.asarray(values, dtype=float)
    return float(np.sum(v * v) / np.sum(v))


def _sample_F(mu_F: float, n: int, rng: RngStream) -> np.ndarray:
    F = mu_F + 0.1 * rng.cauchy(n)
    bad = F <= 0.0
    while bad.any():
        F[bad] = mu_F + 0.1 * rng.cauchy(int(bad.sum()))
        bad = F <= 0.0
    return np.minimum(F, 1.0)


def jade_generation(population: Population, state: JADEState, params: JADEParams, f,
                    rng: RngStream):
    """One JADE generation; returns ``(population, state)``."""
    ev = as_evaluator(f)
    X = population.positions
    NP, d = X.shape
    if NP < 5:
        raise ConfigurationError(f"JADE needs NP >= 5, got {NP}")
    F = _sample_F(state.mu_F, NP, rng)
    CR = np.clip(state.mu_CR + 0.1 * rng.normal(NP), 0.0, 1.0)

    n_p = min(max(1, int(round(params.p * NP))), NP)
    order = np.argsort(population.fitness, kind="stable")
    pbest = order[rng.integers(0, n_p, size=NP)]

    rows = np.arange(NP)
    keys = rng.random((NP, NP))
    keys[rows, rows] = np.inf
    r1 = np.argmin(keys, axis=1)

    archive = state.archive if params.archive_enabled else np.empty((0, d))
    pool = np.vstack([X, archive]) if len(archive) else X
    keys = rng.random((NP, pool.shape[0]))
    keys[rows, rows] = np.inf
    keys[rows, r1] = np.inf
    r2 = np.argmin(keys, axis=1)

    Fc = F[:, None]
    V = X + Fc * (X[pbest] - X) + Fc * (X[r1] - pool[r2])
    V = repair(V, ev.space, params.boundary)
    trials = binomial_crossover(V, X, CR, rng)
    ft = ev(trials)
    win = greedy_mask(population.fitness, ft)

    new_archive = state.archive
    if params.archive_enabled and win.any():
        new_archive = np.vstack([state.archive, X[win]])
        if len(new_archive) > NP:
            keep = np.sort(np.argsort(rng.random(len(new_archive)), kind="stable")[:NP])
            new_archive = new_archive[keep]

    mu_F, mu_CR = state.mu_F, state.mu_CR
    if win.any():
        c = params.c
        mu_CR = (1.0 - c) * mu_CR + c * float(np.mean(CR[win]))
        mu_F = (1.0 - c) * mu_F + c * lehmer_mean(F[win])

    pop = Population(
        np.where(win[:, None], trials, X),
        np.where(win, ft, population.fitness),
        population.generation + 1,
    )
    return pop, JADEState(mu_F, mu_CR, new_archive)


def run_jade(space: SearchSpace, params: JADEParams, f, termination: Termination,
             seed: int, callback=None) -> RunResult:
    """Full JADE run; ``NP`` evaluations at start plus ``NP`` per generation."""
    rng = RngStream(seed)
    ev = as_evaluator(f, space)
    pop = init_population(space, params.NP, ev, rng)
    cur = {"pop": pop, "state": JADEState(params.mu_F, params.mu_CR, np.empty((0, space.dim)))}

    def step(g):
        cur["pop"], cur["state"] = jade_generation(cur["pop"], cur["state"], params, ev, rng)
        if callback is not None:
            callback(g, cur["pop"], cur["state"])

    trace, gens = drive(termination, termination.horizon(params.NP), ev, params.NP,
                        lambda: float(cur["pop"].fitness.min()), step)
    pop = cur["pop"]
    return RunResult(pop.best(), trace, ev.evaluations, seed, gens, ev.faults, pop)


@dataclass(frozen=True)
class PSODEParams:
    w: float = 0.7298
    phi_p: float = 1.49618
    phi_g: float = 1.49618
    F_range: tuple = (0.9, 1.0)
    CR_range: tuple = (0.95, 1.0)
    NP: int = 100
    v_max_fraction: float = 0.5
    boundary: str = "clip"

    def __post_init__(self):
        for name in ("F_range", "CR_range"):
            lo, hi = getattr(self, name)
            if not lo <= hi:
                raise ConfigurationError(f"{name} must satisfy low <= high, got {(lo, hi)}")
            object.__setattr__(self, name, (float(lo), float(hi)))
        if not (0.0 <= self.CR_range[0] and self.CR_range[1] <= 1.0):
            raise ConfigurationError(f"CR_range must lie within [0, 1], got {self.CR_range}")
        if self.F_range[0] < 0.0:
            raise ConfigurationError(f"F_range must be non-negative, got {self.F_range}")
        if self.NP < 4:
            raise ConfigurationError(f"PSO-DE needs NP >= 4 for its DE step, got {self.NP}")
        if not self.v_max_fraction > 0:
            raise ConfigurationError("v_max_fraction must be positive")


@dataclass
class Swarm:
    positions: np.ndarray
    velocities: np.ndarray
    fitness: np.ndarray
    pbest: np.ndarray
    pbest_fitness: np.ndarray
    generation: int = 0

    @property
    def size(self) -> int:
        return self.positions.shape[0]

    @property
    def gbest_index(self) -> int:
        return int(np.argmin(self.pbest_fitness))

    @property
    def gbest(self) -> np.ndarray:
        return self.pbest[self.gbest_index]

    def as_population(self) -> Population:
        return Population(self.pbest, self.pbest_fitness, self.generation)


def init_swarm(space: SearchSpace, params: PSODEParams, f, rng: RngStream) -> Swarm:
    ev = as_evaluator(f, space)
    X = space.uniform(rng, params.NP)
    fit = ev(X)
    return Swarm(X, np.zeros_like(X), fit, X.copy(), fit.copy(), 0)


def psode_generation(swarm: Swarm, params: PSODEParams, f, rng: RngStream) -> Swarm:
    """PSO move of the particles, then a DE/rand/1/bin pass over personal bests."""
    ev = as_evaluator(f)
    space = ev.space
    X, Vel = swarm.positions, swarm.velocities
    NP, d = X.shape
    g = swarm.gbest
    rp = rng.random((NP, d))
    rg = rng.random((NP, d))
    Vel = params.w * Vel + params.phi_p * rp * (swarm.pbest - X) + params.phi_g * rg * (g - X)
    vmax = params.v_max_fraction * space.width
    Vel = np.clip(Vel, -vmax, vmax)
    X = repair(X + Vel, space, params.boundary)
    fit = ev(X)
    better = greedy_mask(swarm.pbest_fitness, fit)
    P = np.where(better[:, None], X, swarm.pbest)
    Pf = np.where(better, fit, swarm.pbest_fitness)

    F = params.F_range[0] + (params.F_range[1] - params.F_range[0]) * rng.random()
    CR = params.CR_range[0] + (params.CR_range[1] - params.CR_range[0]) * rng.random()
    donors = draw_donors(NP, rng, 3)
    M = repair(rand1(P[donors[:, 0]], P[donors[:, 1]], P[donors[:, 2]], F), space, params.boundary)
    trials = binomial_crossover(M, P, CR, rng)
    ft = ev(trials)
    win = greedy_mask(Pf, ft)
    P = np.where(win[:, None], trials, P)
    Pf = np.where(win, ft, Pf)
    return Swarm(X, Vel, fit, P, Pf, swarm.generation + 1)


def run_psode(space: SearchSpace, params: PSODEParams, f, termination: Termination,
              seed: int, callback=None) -> RunResult:
    """Full PSO-DE run; ``NP`` evaluations at start plus ``2 * NP`` per generation.

    When only an evaluation budget is given the horizon is
    ``max_evaluations // (2 * NP)``.
    """
    rng = RngStream(seed)
    ev = as_evaluator(f, space)
    cur = {"swarm": init_swarm(space, params, ev, rng)}
    per_gen = 2 * params.NP
    horizon = termination.horizon(per_gen)

    def step(g):
        cur["swarm"] = psode_generation(cur["swarm"], params, ev, rng)
        if callback is not None:
            callback(g, cur["swarm"])

    trace, gens = drive(termination, horizon, ev, per_gen,
                        lambda: float(cur["swarm"].pbest_fitness.min()), step)
    pop = cur["swarm"].as_population()
    return RunResult(pop.best(), trace, ev.evaluations, seed, gens, ev.faults, pop)
