"""Hierarchy influenced differential evolution (HIDE).

The population is steered by a two-level hierarchy: one global leader and
``N_l`` local leaders. Every member follows its nearest local leader. For the
first ``HC * G_t`` generations trials are built around the global leader::

    u = g_L + F * (x_L - x_r)

afterwards around the member's own local leader::

    u = x_L + F * (x_i - x_r)

``u`` is repaired into the box and recombined with the member by binomial
crossover, then kept on strict improvement. Once all members are processed
each local leader takes the best member of its cluster (if that member beats
it) and the global leader takes the best local leader (if it beats it).

Random draws per generation, in order:

1. ``integers(0, NP - 1, size=NP)`` random partner r for each member (values
   ``>= i`` are shifted up by one so that ``r != i``).
2. the crossover draws: ``integers(0, d, size=NP)`` then ``random((NP, d))``
   for binomial mode, or only ``random((NP, d))`` for hierarchical mode.

Initialisation draws ``random(d)`` for the global leader, then
``normal((N_l, d))`` and ``normal((NP, d))`` for the leader and member
offsets.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional

import numpy as np

from .core import (
    Individual,
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
from .de import binomial_crossover
from .errors import ConfigurationError, ContractError, DimensionError

GLOBAL_PHASE = "global"
LOCAL_PHASE = "local"
CROSSOVER_MODES = ("binomial", "hierarchical")


@dataclass(frozen=True)
class HIDEParams:
    """HIDE settings.

    ``crossover="binomial"`` recombines with probability ``CR`` (HC acts only
    as the phase switch). ``crossover="hierarchical"`` instead keeps each
    target coordinate with probability ``HC`` and takes the mutant otherwise,
    with no forced dimension.

    ``init_spread`` is the standard deviation of the normal offsets used at
    initialisation; ``None`` means 10% of the mean box width.
    """

    HC: float = 0.27
    F: float = 0.48
    CR: float = 0.9
    N_l: int = 5
    NP: int = 100
    init_spread: Optional[float] = None
    crossover: str = "binomial"
    boundary: str = "clip"

    def __post_init__(self):
        validate_probability("HC", self.HC)
        validate_weight("F", self.F)
        validate_probability("CR", self.CR)
        if self.NP < 2:
            raise ConfigurationError(f"HIDE needs NP >= 2 to draw a partner r != i, got {self.NP}")
        if not 1 <= self.N_l <= self.NP:
            raise ConfigurationError(f"N_l must lie in [1, NP={self.NP}], got {self.N_l}")
        if self.init_spread is not None and not self.init_spread > 0:
            raise ConfigurationError(f"init_spread must be positive, got {self.init_spread}")
        if self.crossover not in CROSSOVER_MODES:
            raise ConfigurationError(f"crossover must be one of {CROSSOVER_MODES}, got {self.crossover!r}")

    def spread(self, space: SearchSpace) -> float:
        if self.init_spread is not None:
            return float(self.init_spread)
        return 0.1 * float(np.mean(space.width))


@dataclass
class HierarchyState:
    """Leaders of one HIDE run.

    ``assignment[i]`` is the index of the leader member ``i`` followed in the
    most recent generation (or, right after initialisation, its nearest
    leader). ``origin[i]`` records which leader member ``i`` was sampled
    around at initialisation.
    """

    global_leader: Individual
    leader_positions: np.ndarray
    leader_fitness: np.ndarray
    assignment: np.ndarray
    origin: np.ndarray = field(default=None, repr=False)
    phase: str = "init"

    @property
    def local_leaders(self) -> list[Individual]:
        return [Individual(p, float(f)) for p, f in zip(self.leader_positions, self.leader_fitness)]

    @property
    def n_leaders(self) -> int:
        return self.leader_positions.shape[0]

    def to_record(self, generation: int) -> dict:
        return {
            "generation": generation,
            "phase": self.phase,
            "global_leader": {
                "position": self.global_leader.position.tolist(),
                "fitness": self.global_leader.fitness,
            },
            "local_leaders": [
                {"position": p.tolist(), "fitness": float(f)}
                for p, f in zip(self.leader_positions, self.leader_fitness)
            ],
            "assignment": self.assignment.tolist(),
        }


def phase_switch_generation(HC: float, total_generations: int) -> int:
    """First generation that uses the local-leader rule.

    The global-leader rule applies while ``G < HC * G_t``. HC is taken at its
    shortest decimal representation so that e.g. ``0.07 * 100`` switches at
    exactly 7 rather than at a binary-rounding artefact.
    """
    return math.ceil(Fraction(repr(float(HC))) * total_generations)


def phase_for(G: int, HC: float, total_generations: int) -> str:
    return GLOBAL_PHASE if G < phase_switch_generation(HC, total_generations) else LOCAL_PHASE


def _leader_matrix(leaders) -> np.ndarray:
    if isinstance(leaders, np.ndarray):
        L = np.atleast_2d(np.asarray(leaders, dtype=float))
    else:
        L = np.array([np.asarray(getattr(l, "position", l), dtype=float) for l in leaders])
    if L.size == 0:
        raise ContractError("nearest_leader needs at least one leader")
    return L


def nearest_leaders(X, leaders) -> np.ndarray:
    """Index of the closest leader (Euclidean) for each row of ``X``.

    Ties go to the lowest leader index.
    """
    L = _leader_matrix(leaders)
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[1] != L.shape[1]:
        raise DimensionError(f"members have dim {X.shape[1]}, leaders have dim {L.shape[1]}")
    d2 = ((X[:, None, :] - L[None, :, :]) ** 2).sum(axis=2)
    return np.argmin(d2, axis=1)


def nearest_leader(member, leaders) -> int:
    x = np.asarray(getattr(member, "position", member), dtype=float)
    return int(nearest_leaders(x[None, :], leaders)[0])


def init_hierarchy(space: SearchSpace, params: HIDEParams, f, rng: RngStream):
    """Global leader, local leaders around it, members around the leaders.

    Member ``i`` is sampled around leader ``i % N_l``. Costs
    ``1 + N_l + NP`` evaluations.
    """
    ev = as_evaluator(f, space)
    sigma = params.spread(space)
    d = space.dim
    g = space.uniform(rng)
    L = repair(g + sigma * rng.normal((params.N_l, d)), space, params.boundary)
    origin = np.arange(params.NP) % params.N_l
    X = repair(L[origin] + sigma * rng.normal((params.NP, d)), space, params.boundary)

    g_fit = float(ev(g))
    L_fit = ev(L)
    X_fit = ev(X)
    state = HierarchyState(
        global_leader=Individual(g, g_fit),
        leader_positions=L,
        leader_fitness=L_fit,
        assignment=nearest_leaders(X, L),
        origin=origin,
    )
    return state, Population(X, X_fit, 0)


def _partners(pop_size: int, rng: RngStream) -> np.ndarray:
    r = rng.integers(0, pop_size - 1, size=pop_size)
    return r + (r >= np.arange(pop_size))


def _mutants(X, r, assignment, state: HierarchyState, F: float, phase: str) -> np.ndarray:
    XL = state.leader_positions[assignment]
    if phase == GLOBAL_PHASE:
        return state.global_leader.position + F * (XL - X[r])
    return XL + F * (X - X[r])


def _recombine(U, X, params: HIDEParams, rng: RngStream) -> np.ndarray:
    if params.crossover == "binomial":
        return binomial_crossover(U, X, params.CR, rng)
    keep = rng.random(X.shape) < params.HC
    return np.where(keep, X, U)


def hide_trials(population: Population, state: HierarchyState, params: HIDEParams,
                G: int, G_t: int, rng: RngStream, space: SearchSpace):
    """Trial vectors for the whole population.

    Returns ``(trials, assignment, phase)``.
    """
    NP = population.size
    if NP < 2:
        raise ConfigurationError(f"HIDE needs NP >= 2, got {NP}")
    X = population.positions
    assignment = nearest_leaders(X, state.leader_positions)
    phase = phase_for(G, params.HC, G_t)
    r = _partners(NP, rng)
    U = repair(_mutants(X, r, assignment, state, params.F, phase), space, params.boundary)
    return _recombine(U, X, params, rng), assignment, phase


def hide_trial(i: int, population: Population, state: HierarchyState, params: HIDEParams,
               G: int, G_t: int, rng: RngStream, space: SearchSpace) -> np.ndarray:
    """Trial vector for a single member ``i``.

    Draws one partner index then the crossover randoms for one vector.
    """
    NP = population.size
    if NP < 2:
        raise ConfigurationError(f"HIDE needs NP >= 2, got {NP}")
    X = population.positions
    xL = state.leader_positions[nearest_leader(X[i], state.leader_positions)]
    r = int(rng.integers(0, NP - 1))
    r += r >= i
    if phase_for(G, params.HC, G_t) == GLOBAL_PHASE:
        u = state.global_leader.position + params.F * (xL - X[r])
    else:
        u = xL + params.F * (X[i] - X[r])
    u = repair(u, space, params.boundary)
    if params.crossover == "binomial":
        return binomial_crossover(u, X[i], params.CR, rng)
    keep = rng.random(X.shape[1]) < params.HC
    return np.where(keep, X[i], u)


def update_leaders(population: Population, state: HierarchyState,
                   assignment: np.ndarray) -> HierarchyState:
    """Cluster-best feedback to local leaders, then leader-best to the global leader.

    A leader is replaced only on strict improvement; a cluster with no members
    keeps its leader.
    """
    L = state.leader_positions.copy()
    Lf = state.leader_fitness.copy()
    fit = population.fitness
    for c in range(L.shape[0]):
        members = np.flatnonzero(assignment == c)
        if members.size == 0:
            continue
        j = members[np.argmin(fit[members])]
        if fit[j] < Lf[c]:
            L[c] = population.positions[j]
            Lf[c] = fit[j]
    g = state.global_leader
    c = int(np.argmin(Lf))
    if Lf[c] < g.fitness:
        g = Individual(L[c].copy(), float(Lf[c]))
    return replace(state, global_leader=g, leader_positions=L, leader_fitness=Lf,
                   assignment=assignment)


def hide_generation(population: Population, state: HierarchyState, params: HIDEParams,
                    f, G: int, G_t: int, rng: RngStream):
    """One HIDE generation; returns ``(population, state)``."""
    ev = as_evaluator(f)
    trials, assignment, phase = hide_trials(population, state, params, G, G_t, rng, ev.space)
    ft = ev(trials)
    accept = greedy_mask(population.fitness, ft)
    pop = Population(
        np.where(accept[:, None], trials, population.positions),
        np.where(accept, ft, population.fitness),
        population.generation + 1,
    )
    new_state = update_leaders(pop, state, assignment)
    new_state.phase = phase
    return pop, new_state


def _best_of(population: Population, state: HierarchyState) -> Individual:
    i = population.best_index()
    if population.fitness[i] < state.global_leader.fitness:
        return Individual(population.positions[i].copy(), float(population.fitness[i]))
    return state.global_leader.copy()


def run_hide(space: SearchSpace, params: HIDEParams, f, termination: Termination,
             seed: int, callback=None, state_log=None) -> RunResult:
    """Full HIDE run.

    Budget: ``1 + N_l + NP`` evaluations at initialisation plus ``NP`` per
    generation. The phase horizon G_t is ``termination.horizon(NP)``.

    ``callback(G, population, state)`` runs after every generation;
    ``state.phase`` tells which rule was used. ``state_log`` is an optional
    text stream receiving one JSON line per generation with the leader
    positions and member assignments.
    """
    rng = RngStream(seed)
    ev = as_evaluator(f, space)
    state, pop = init_hierarchy(space, params, ev, rng)
    horizon = termination.horizon(params.NP)
    cur = {"pop": pop, "state": state}
    if state_log is not None:
        state_log.write(json.dumps(state.to_record(0)) + "\n")

    def step(g):
        cur["pop"], cur["state"] = hide_generation(cur["pop"], cur["state"], params, ev, g, horizon, rng)
        if callback is not None:
            callback(g, cur["pop"], cur["state"])
        if state_log is not None:
            state_log.write(json.dumps(cur["state"].to_record(g + 1)) + "\n")

    def best():
        return min(float(cur["pop"].fitness.min()), cur["state"].global_leader.fitness)

    trace, gens = drive(termination, horizon, ev, params.NP, best, step)
    pop = cur["pop"]
    return RunResult(_best_of(pop, cur["state"]), trace, ev.evaluations, seed, gens, ev.faults, pop)
