"""Shared domain model: search spaces, individuals, populations, randomness,
termination and run results.

All algorithms minimise. Positions are stored as float64 numpy arrays; a
population keeps its members as one ``(NP, dim)`` matrix so a generation can
be evaluated in a single vectorised call.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import ConfigurationError, ContractError, DimensionError

logger = logging.getLogger(__name__)

BOUNDARY_MODES = ("clip", "reflect")


@dataclass(frozen=True, eq=False)
class SearchSpace:
    """Box-bounded continuous domain."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.atleast_1d(np.asarray(self.lower, dtype=float)).copy()
        upper = np.atleast_1d(np.asarray(self.upper, dtype=float)).copy()
        if lower.ndim != 1 or lower.shape != upper.shape:
            raise DimensionError(
                f"bounds must be 1-D of equal length, got {lower.shape} and {upper.shape}"
            )
        if lower.size < 1:
            raise DimensionError("search space needs at least one dimension")
        if not np.all(lower < upper):
            bad = np.flatnonzero(~(lower < upper))
            raise ConfigurationError(f"lower < upper violated in dimensions {bad.tolist()}")
        lower.flags.writeable = False
        upper.flags.writeable = False
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def box(cls, dim: int, low: float = -100.0, high: float = 100.0) -> "SearchSpace":
        if dim < 1:
            raise DimensionError(f"dim must be >= 1, got {dim}")
        return cls(np.full(dim, float(low)), np.full(dim, float(high)))

    @property
    def dim(self) -> int:
        return self.lower.size

    @property
    def width(self) -> np.ndarray:
        return self.upper - self.lower

    def __eq__(self, other):
        if not isinstance(other, SearchSpace):
            return NotImplemented
        return np.array_equal(self.lower, other.lower) and np.array_equal(self.upper, other.upper)

    def __hash__(self):
        return hash((self.lower.tobytes(), self.upper.tobytes()))

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all((x >= self.lower) & (x <= self.upper)))

    def uniform(self, rng: "RngStream", n: Optional[int] = None) -> np.ndarray:
        """Uniform sample(s) in the box; one ``random`` draw of shape ``(n, dim)``."""
        shape = self.dim if n is None else (n, self.dim)
        return self.lower + rng.random(shape) * self.width


def clamp_to_bounds(position, space: SearchSpace) -> np.ndarray:
    """Clip every coordinate onto ``[lower, upper]``.

    Works on a single vector or on a stack of vectors in the last axis.
    """
    x = np.asarray(position, dtype=float)
    if x.shape[-1:] != (space.dim,):
        raise DimensionError(f"position has length {x.shape[-1:]} but space.dim is {space.dim}")
    return np.clip(x, space.lower, space.upper)


def reflect_into_bounds(position, space: SearchSpace) -> np.ndarray:
    """Mirror out-of-range coordinates back into the box.

    Coordinates further than one box width away are folded repeatedly
    (triangle-wave mapping), so the result is always feasible.
    """
    x = np.asarray(position, dtype=float)
    if x.shape[-1:] != (space.dim,):
        raise DimensionError(f"position has length {x.shape[-1:]} but space.dim is {space.dim}")
    width = space.width
    t = np.mod(x - space.lower, 2.0 * width)
    t = np.where(t > width, 2.0 * width - t, t)
    out = space.lower + t
    inside = (x >= space.lower) & (x <= space.upper)
    return np.where(inside, x, np.clip(out, space.lower, space.upper))


def repair(position, space: SearchSpace, mode: str = "clip") -> np.ndarray:
    if mode == "clip":
        return clamp_to_bounds(position, space)
    if mode == "reflect":
        return reflect_into_bounds(position, space)
    raise ConfigurationError(f"unknown boundary mode {mode!r}; expected one of {BOUNDARY_MODES}")


class RngStream:
    """Seeded random stream backed by numpy's PCG64 bit generator.

    PCG64 and the numpy ``Generator`` sampling routines are fully specified,
    so a seed yields the same draws on every platform. With ``record=True``
    each draw is appended to :attr:`tape` as ``(kind, value)``; tests use the
    tape to replay a run step by step.
    """

    def __init__(self, seed: int, record: bool = False):
        seed = int(seed)
        if not 0 <= seed < 2**64:
            raise ConfigurationError(f"seed must be an unsigned 64-bit integer, got {seed}")
        self.seed = seed
        self._gen = np.random.Generator(np.random.PCG64(seed))
        self.tape: Optional[list] = [] if record else None

    def _log(self, kind, value):
        if self.tape is not None:
            self.tape.append((kind, np.copy(value)))
        return value

    def random(self, size=None):
        """Uniform on [0, 1)."""
        return self._log("random", self._gen.random(size))

    def integers(self, low: int, high: int, size=None):
        """Uniform integer on ``[low, high)``."""
        return self._log("integers", self._gen.integers(low, high, size=size))

    def normal(self, size=None):
        """Standard normal deviate(s)."""
        return self._log("normal", self._gen.standard_normal(size))

    def cauchy(self, size=None):
        """Standard Cauchy deviate(s)."""
        return self._log("cauchy", self._gen.standard_cauchy(size))


@dataclass
class Individual:
    position: np.ndarray
    fitness: Optional[float] = None

    def __post_init__(self):
        self.position = np.array(self.position, dtype=float)

    @property
    def evaluated(self) -> bool:
        return self.fitness is not None

    def copy(self) -> "Individual":
        return Individual(self.position.copy(), self.fitness)


@dataclass
class Population:
    """``positions`` is ``(NP, dim)``; ``fitness`` holds one value per row."""

    positions: np.ndarray
    fitness: np.ndarray
    generation: int = 0

    def __post_init__(self):
        self.positions = np.array(self.positions, dtype=float)
        self.fitness = np.array(self.fitness, dtype=float)
        if self.positions.ndim != 2 or self.fitness.shape != (self.positions.shape[0],):
            raise DimensionError(
                f"population shapes disagree: positions {self.positions.shape}, "
                f"fitness {self.fitness.shape}"
            )

    @property
    def size(self) -> int:
        return self.positions.shape[0]

    @property
    def dim(self) -> int:
        return self.positions.shape[1]

    @property
    def members(self) -> list[Individual]:
        return [Individual(p, float(f)) for p, f in zip(self.positions, self.fitness)]

    def best_index(self) -> int:
        return int(np.argmin(self.fitness))

    def best(self) -> Individual:
        i = self.best_index()
        return Individual(self.positions[i], float(self.fitness[i]))

    def copy(self) -> "Population":
        return Population(self.positions.copy(), self.fitness.copy(), self.generation)


class Evaluator:
    """Counts objective evaluations for one run and sanitises bad values.

    Non-finite objective values are replaced by ``+inf`` (so the incumbent
    always survives a comparison) and tallied in :attr:`faults`.
    """

    def __init__(self, f: Callable, space: Optional[SearchSpace] = None):
        if space is None:
            space = getattr(f, "space", None)
        if space is None:
            raise ConfigurationError("a SearchSpace is required when f carries none")
        self.f = f
        self.space = space
        self.evaluations = 0
        self.faults = 0
        self._vectorized = bool(getattr(f, "vectorized", False))

    def __call__(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        single = X.ndim == 1
        X2 = np.atleast_2d(X)
        if X2.shape[1] != self.space.dim:
            raise DimensionError(f"expected vectors of length {self.space.dim}, got {X2.shape[1]}")
        if self._vectorized:
            values = np.asarray(self.f(X2), dtype=float).reshape(-1)
        else:
            values = np.array([float(self.f(x)) for x in X2])
        self.evaluations += X2.shape[0]
        bad = ~np.isfinite(values)
        if bad.any():
            n = int(bad.sum())
            self.faults += n
            logger.warning("%d non-finite objective value(s) treated as +inf", n)
            values = np.where(bad, np.inf, values)
        return values[0] if single else values

    def evaluate(self, individual: Individual) -> Individual:
        if individual.position.shape != (self.space.dim,):
            raise DimensionError(
                f"position has shape {individual.position.shape}, space.dim is {self.space.dim}"
            )
        return Individual(individual.position, float(self(individual.position)))


def evaluate(individual: Individual, f) -> Individual:
    """Return an evaluated copy of ``individual``.

    ``f`` is either an :class:`Evaluator` (whose counter is incremented) or an
    objective carrying a ``space`` attribute.
    """
    ev = f if isinstance(f, Evaluator) else Evaluator(f)
    return ev.evaluate(individual)


def as_evaluator(f, space: Optional[SearchSpace] = None) -> Evaluator:
    return f if isinstance(f, Evaluator) else Evaluator(f, space)


def select_greedy(current: Individual, trial: Individual) -> Individual:
    """Keep ``trial`` only on strict improvement; ties keep the incumbent."""
    if not (current.evaluated and trial.evaluated):
        raise ContractError("select_greedy needs two evaluated individuals")
    if current.position.shape != trial.position.shape:
        raise DimensionError("current and trial differ in dimension")
    return trial if _key(trial.fitness) < _key(current.fitness) else current


def _key(value: float) -> float:
    return np.inf if not np.isfinite(value) else value


def greedy_mask(current_fitness: np.ndarray, trial_fitness: np.ndarray) -> np.ndarray:
    """Vectorised :func:`select_greedy`: True where the trial replaces the member."""
    cur = np.where(np.isfinite(current_fitness), current_fitness, np.inf)
    return trial_fitness < cur


@dataclass(frozen=True)
class Termination:
    """Stopping rule; a run ends at the first criterion met.

    ``max_generations`` also fixes the schedule horizon G_t used by
    phase-switching algorithms. When only ``max_evaluations`` is given the
    horizon is derived up front as ``max_evaluations // NP``.
    """

    max_generations: Optional[int] = 1000
    max_evaluations: Optional[int] = None
    target_fitness: Optional[float] = None

    def __post_init__(self):
        if self.max_generations is None and self.max_evaluations is None and self.target_fitness is None:
            raise ConfigurationError("Termination needs at least one criterion")
        if self.max_generations is not None and self.max_generations < 1:
            raise ConfigurationError("max_generations must be positive")
        if self.max_evaluations is not None and self.max_evaluations < 1:
            raise ConfigurationError("max_evaluations must be positive")
        if self.max_generations is None and self.max_evaluations is None:
            raise ConfigurationError(
                "target_fitness alone cannot bound a run; add max_generations or max_evaluations"
            )

    def horizon(self, pop_size: int) -> int:
        if self.max_generations is not None:
            return self.max_generations
        return max(1, self.max_evaluations // pop_size)

    def should_stop(self, generation: int, horizon: int, evaluations: int,
                    per_generation: int, best: float) -> bool:
        if generation >= horizon:
            return True
        if self.max_evaluations is not None and evaluations + per_generation > self.max_evaluations:
            return True
        if self.target_fitness is not None and best <= self.target_fitness:
            return True
        return False

    def to_dict(self) -> dict:
        return {
            "max_generations": self.max_generations,
            "max_evaluations": self.max_evaluations,
            "target_fitness": self.target_fitness,
        }


@dataclass
class RunResult:
    """Outcome of one seeded run.

    ``trace[g]`` is the best-so-far fitness after ``g`` generations; entry 0
    is the initial population, so ``len(trace) == generations + 1``.
    """

    best_individual: Individual
    trace: np.ndarray
    evaluations_used: int
    seed: int
    generations: int = 0
    faults: int = 0
    final_population: Optional[Population] = field(default=None, repr=False)

    @property
    def best_fitness(self) -> float:
        return float(self.best_individual.fitness)


def drive(termination: Termination, horizon: int, evaluator: Evaluator,
          per_generation: int, best: Callable[[], float],
          step: Callable[[int], None]) -> tuple[np.ndarray, int]:
    """Run ``step(G)`` until termination and collect the best-so-far trace.

    The trace records ``best()`` as reported by the algorithm state; it is not
    forced monotone here, so elitism can be checked on it.
    """
    trace = [best()]
    g = 0
    while not termination.should_stop(g, horizon, evaluator.evaluations, per_generation, trace[-1]):
        step(g)
        g += 1
        trace.append(best())
    return np.asarray(trace), g


def validate_weight(name: str, value: float, hard_max: float = 2.0, soft_max: float = 1.0):
    if not 0.0 <= value <= hard_max:
        raise ConfigurationError(f"{name} must lie in [0, {hard_max}], got {value}")
    if value > soft_max:
        logger.warning("%s=%g is outside the usual [0, %g] range", name, value, soft_max)


def validate_probability(name: str, value: float):
    if not 0.0 <= value <= 1.0:
        raise ConfigurationError(f"{name} must lie in [0, 1], got {value}")
