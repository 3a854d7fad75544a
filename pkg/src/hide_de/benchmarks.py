"""CEC-2017-style test problems.

Base functions are written in the CEC convention: the global minimum sits at
the origin with value 0 (Rosenbrock, Schwefel and Levy carry the usual
internal offsets for that). They are vectorised over the last axis, so one
call evaluates a whole population.

Shifted/rotated instances evaluate ``f(M @ (scale * (x - o))) + bias``.
Hybrids split the transformed, permuted coordinates into chunks scored by
different base functions. Compositions mix several shifted components with
distance-based weights.

The shipped :func:`suite` generates its shifts, rotations and permutations
from a seed; it mirrors the CEC 2017 class layout (3 unimodal, 7 multimodal,
10 hybrid, 10 composition) and bias convention (``100 * index``), but its
values are not comparable to results on the official data files. Those can
be loaded with :func:`load_cec_data`.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np

from .core import RngStream, SearchSpace
from .errors import CatalogError, ConfigurationError, DimensionError, ParseError, ValidationError

logger = logging.getLogger(__name__)

DEFAULT_LOW, DEFAULT_HIGH = -100.0, 100.0
SHIFT_RANGE = 80.0
SUITE_SEED = 2017
STANDARD_DIMS = (10, 30, 50, 100)
ORTHO_TOL = 1e-10

_SCHWEFEL_OFFSET = 4.209687462275036e002
_SCHWEFEL_CONST = _SCHWEFEL_OFFSET * math.sin(math.sqrt(_SCHWEFEL_OFFSET))


# --- base functions, z has shape (..., n) -------------------------------------

def sphere(z):
    return np.sum(z * z, axis=-1)


def bent_cigar(z):
    return z[..., 0] ** 2 + 1e6 * np.sum(z[..., 1:] ** 2, axis=-1)


def discus(z):
    return 1e6 * z[..., 0] ** 2 + np.sum(z[..., 1:] ** 2, axis=-1)


def high_conditioned_elliptic(z):
    n = z.shape[-1]
    coef = 10.0 ** (6.0 * np.arange(n) / max(n - 1, 1))
    return np.sum(coef * z * z, axis=-1)


def zakharov(z):
    i = np.arange(1, z.shape[-1] + 1)
    s2 = np.sum(0.5 * i * z, axis=-1)
    return np.sum(z * z, axis=-1) + s2 ** 2 + s2 ** 4


def rosenbrock(z):
    y = z + 1.0
    a, b = y[..., :-1], y[..., 1:]
    return np.sum(100.0 * (a * a - b) ** 2 + (a - 1.0) ** 2, axis=-1)


def rastrigin(z):
    return np.sum(z * z - 10.0 * np.cos(2.0 * np.pi * z) + 10.0, axis=-1)


def ackley(z):
    n = z.shape[-1]
    s1 = np.sum(z * z, axis=-1) / n
    s2 = np.sum(np.cos(2.0 * np.pi * z), axis=-1) / n
    return -20.0 * np.exp(-0.2 * np.sqrt(s1)) - np.exp(s2) + 20.0 + np.e


def griewank(z):
    i = np.arange(1, z.shape[-1] + 1)
    return 1.0 + np.sum(z * z, axis=-1) / 4000.0 - np.prod(np.cos(z / np.sqrt(i)), axis=-1)


def schwefel(z):
    n = z.shape[-1]
    y = z + _SCHWEFEL_OFFSET
    m = np.fmod(np.abs(y), 500.0)
    inside = -y * np.sin(np.sqrt(np.abs(y)))
    above = -(500.0 - m) * np.sin(np.sqrt(500.0 - m)) + ((y - 500.0) / 100.0) ** 2 / n
    below = -(-500.0 + m) * np.sin(np.sqrt(500.0 - m)) + ((y + 500.0) / 100.0) ** 2 / n
    g = np.where(y > 500.0, above, np.where(y < -500.0, below, inside))
    return _SCHWEFEL_CONST * n + np.sum(g, axis=-1)


def levy(z):
    w = 1.0 + z / 4.0
    head = np.sin(np.pi * w[..., 0]) ** 2
    body = np.sum((w[..., :-1] - 1.0) ** 2 * (1.0 + 10.0 * np.sin(np.pi * w[..., :-1] + 1.0) ** 2), axis=-1)
    tail = (w[..., -1] - 1.0) ** 2 * (1.0 + np.sin(2.0 * np.pi * w[..., -1]) ** 2)
    return head + body + tail


def expanded_schaffer_f6(z):
    a = z
    b = np.roll(z, -1, axis=-1)
    s = a * a + b * b
    return np.sum(0.5 + (np.sin(np.sqrt(s)) ** 2 - 0.5) / (1.0 + 0.001 * s) ** 2, axis=-1)


@dataclass(frozen=True)
class BaseSpec:
    name: str
    fn: Callable
    category: str
    min_dim: int = 1
    scale: float = 1.0


BASE_CATALOG = {
    s.name: s
    for s in [
        BaseSpec("sphere", sphere, "unimodal"),
        BaseSpec("bent_cigar", bent_cigar, "unimodal", 2),
        BaseSpec("zakharov", zakharov, "unimodal"),
        BaseSpec("high_conditioned_elliptic", high_conditioned_elliptic, "unimodal", 2),
        BaseSpec("discus", discus, "unimodal", 2),
        BaseSpec("rosenbrock", rosenbrock, "multimodal", 2, 2.048 / 100.0),
        BaseSpec("rastrigin", rastrigin, "multimodal", 1, 5.12 / 100.0),
        BaseSpec("ackley", ackley, "multimodal"),
        BaseSpec("griewank", griewank, "multimodal", 1, 600.0 / 100.0),
        BaseSpec("schwefel", schwefel, "multimodal", 1, 1000.0 / 100.0),
        BaseSpec("levy", levy, "multimodal"),
        BaseSpec("expanded_schaffer_f6", expanded_schaffer_f6, "multimodal", 2),
    ]
}


def _base_spec(name: str) -> BaseSpec:
    try:
        return BASE_CATALOG[name]
    except KeyError:
        raise CatalogError(f"unknown base function {name!r}; known: {sorted(BASE_CATALOG)}") from None


# --- objective function container ---------------------------------------------

@dataclass(frozen=True, eq=False)
class ObjectiveFunction:
    """A vectorised scalar objective on a box.

    ``fn`` maps an ``(n, dim)`` array to ``n`` values; ``bias`` is added on
    top. Calling the object with a single vector returns a float. ``meta``
    exposes construction data (transforms, permutation, component shifts and
    sigmas) for inspection.
    """

    id: str
    space: SearchSpace
    fn: Callable = field(repr=False)
    bias: float = 0.0
    optimum: Optional[tuple] = None
    category: str = "base"
    description: str = ""
    meta: dict = field(default_factory=dict, repr=False)
    vectorized = True

    @property
    def dim(self) -> int:
        return self.space.dim

    def __call__(self, x):
        X = np.asarray(x, dtype=float)
        if X.shape[-1] != self.dim or X.ndim not in (1, 2):
            raise DimensionError(f"{self.id} expects vectors of length {self.dim}, got shape {X.shape}")
        out = self.fn(np.atleast_2d(X)) + self.bias
        return float(out[0]) if X.ndim == 1 else out

    eval = __call__


def base_function(name: str, dim: int, space: Optional[SearchSpace] = None) -> ObjectiveFunction:
    """Unshifted, unrotated base function with its optimum at the origin."""
    spec = _base_spec(name)
    if dim < spec.min_dim:
        raise DimensionError(f"{name} needs dim >= {spec.min_dim}, got {dim}")
    space = space or SearchSpace.box(dim, DEFAULT_LOW, DEFAULT_HIGH)
    return ObjectiveFunction(
        id=name, space=space, fn=spec.fn, bias=0.0,
        optimum=(np.zeros(dim), 0.0), category=spec.category, description=name,
    )


# --- transforms ---------------------------------------------------------------

def orthogonality_error(M) -> float:
    M = np.asarray(M, dtype=float)
    return float(np.max(np.abs(M.T @ M - np.eye(M.shape[0]))))


@dataclass(frozen=True, eq=False)
class Transform:
    """``z = M @ (scale * (x - shift))``."""

    shift: np.ndarray
    rotation: np.ndarray
    scale: float = 1.0

    def __post_init__(self):
        o = np.asarray(self.shift, dtype=float).copy()
        M = np.asarray(self.rotation, dtype=float).copy()
        if o.ndim != 1 or M.shape != (o.size, o.size):
            raise DimensionError(f"shift of length {o.size} needs a {o.size}x{o.size} rotation, got {M.shape}")
        err = orthogonality_error(M)
        if not err < ORTHO_TOL:
            raise ValidationError(f"rotation matrix is not orthogonal: max|M^T M - I| = {err:.3e}")
        if not self.scale > 0:
            raise ConfigurationError(f"scale must be positive, got {self.scale}")
        object.__setattr__(self, "shift", o)
        object.__setattr__(self, "rotation", M)

    @classmethod
    def identity(cls, dim: int, scale: float = 1.0) -> "Transform":
        return cls(np.zeros(dim), np.eye(dim), scale)

    @property
    def dim(self) -> int:
        return self.shift.size

    def apply(self, X) -> np.ndarray:
        return (self.scale * (np.asarray(X, dtype=float) - self.shift)) @ self.rotation.T


def random_rotation(dim: int, rng: RngStream) -> np.ndarray:
    """Haar-distributed orthogonal matrix.

    QR of a ``normal((dim, dim))`` draw, with each column of Q multiplied by
    the sign of the matching diagonal entry of R.
    """
    A = rng.normal((dim, dim))
    Q, R = np.linalg.qr(A)
    signs = np.sign(np.diag(R))
    signs[signs == 0] = 1.0
    return Q * signs


def apply_transform(f: ObjectiveFunction, t: Transform, bias: float = 0.0,
                    id: Optional[str] = None) -> ObjectiveFunction:
    """``g(x) = f(M @ (scale * (x - o))) + bias``."""
    if t.dim != f.dim:
        raise DimensionError(f"transform dim {t.dim} != function dim {f.dim}")
    inner = f

    def fn(X):
        return inner(t.apply(X))

    optimum = None
    if f.optimum is not None and not np.any(f.optimum[0]):
        optimum = (t.shift.copy(), f.optimum[1] + bias)
    return ObjectiveFunction(
        id=id or f"{f.id}*", space=f.space, fn=fn, bias=bias, optimum=optimum,
        category=f.category, description=f"shifted rotated {f.description}",
        meta={"transforms": [t]},
    )


# --- hybrids ------------------------------------------------------------------

def chunk_sizes(proportions: Sequence[float], dim: int) -> list[int]:
    """Split ``dim`` by proportions with largest-remainder rounding.

    Leftover dimensions go to the largest fractional parts, earlier
    sub-functions first on ties.
    """
    p = np.asarray(proportions, dtype=float)
    raw = p * dim
    sizes = np.floor(raw).astype(int)
    rest = dim - int(sizes.sum())
    frac = raw - sizes
    order = sorted(range(len(p)), key=lambda k: (-frac[k], k))
    for k in order[:rest]:
        sizes[k] += 1
    return sizes.tolist()


@dataclass(frozen=True, eq=False)
class HybridSpec:
    sub_functions: tuple
    proportions: tuple
    permutation: Optional[np.ndarray] = None
    scales: Optional[tuple] = None

    def __post_init__(self):
        if len(self.sub_functions) != len(self.proportions) or not self.sub_functions:
            raise ConfigurationError("hybrid needs one proportion per sub-function")
        for name in self.sub_functions:
            _base_spec(name)
        p = np.asarray(self.proportions, dtype=float)
        if np.any(p <= 0):
            raise ConfigurationError(f"proportions must be positive, got {self.proportions}")
        if abs(p.sum() - 1.0) > 1e-12:
            raise ConfigurationError(f"proportions must sum to 1, got {p.sum()!r}")
        if self.scales is not None and len(self.scales) != len(self.sub_functions):
            raise ConfigurationError("hybrid needs one scale per sub-function")


def make_hybrid(spec: HybridSpec, transform: Transform, bias: float = 0.0,
                id: str = "hybrid", space: Optional[SearchSpace] = None) -> ObjectiveFunction:
    """Sum of base functions over consecutive chunks of the permuted, transformed input."""
    dim = transform.dim
    perm = np.arange(dim) if spec.permutation is None else np.asarray(spec.permutation, dtype=int)
    if sorted(perm.tolist()) != list(range(dim)):
        raise ConfigurationError(f"permutation is not a permutation of 0..{dim - 1}")
    sizes = chunk_sizes(spec.proportions, dim)
    bounds = np.concatenate([[0], np.cumsum(sizes)])
    fns = [BASE_CATALOG[n].fn for n in spec.sub_functions]
    scales = spec.scales or (1.0,) * len(fns)
    pieces = [(fn, s, bounds[k], bounds[k + 1]) for k, (fn, s) in enumerate(zip(fns, scales))
              if bounds[k + 1] > bounds[k]]

    def fn(X):
        y = transform.apply(X)[:, perm]
        return sum(g(s * y[:, a:b]) for g, s, a, b in pieces)

    desc = "hybrid(" + ", ".join(f"{n}:{p:g}" for n, p in zip(spec.sub_functions, spec.proportions)) + ")"
    return ObjectiveFunction(
        id=id, space=space or SearchSpace.box(dim, DEFAULT_LOW, DEFAULT_HIGH), fn=fn, bias=bias,
        optimum=(transform.shift.copy(), bias), category="hybrid", description=desc,
        meta={"transforms": [transform], "permutation": perm, "chunk_sizes": sizes},
    )


# --- compositions -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Component:
    function: str
    sigma: float
    lam: float
    bias: float
    shift: np.ndarray
    rotation: Optional[np.ndarray] = None
    scale: Optional[float] = None

    def transform(self) -> Transform:
        dim = len(self.shift)
        M = np.eye(dim) if self.rotation is None else self.rotation
        scale = BASE_CATALOG[self.function].scale if self.scale is None else self.scale
        return Transform(self.shift, M, scale)


@dataclass(frozen=True, eq=False)
class CompositionSpec:
    components: tuple

    def __post_init__(self):
        if len(self.components) < 2:
            raise ConfigurationError("composition needs at least two components")
        for c in self.components:
            _base_spec(c.function)
            if not (c.sigma > 0 and c.lam > 0):
                raise ConfigurationError(f"sigma and lambda must be positive for {c.function}")
        shifts = np.array([np.asarray(c.shift, dtype=float) for c in self.components])
        for a in range(len(shifts)):
            for b in range(a + 1, len(shifts)):
                if np.array_equal(shifts[a], shifts[b]):
                    raise ConfigurationError(f"components {a} and {b} share the same shift")


def composition_weights(X, shifts, sigmas) -> np.ndarray:
    """Normalised mixture weights, shape ``(n, k)``.

    Raw weight ``w_i = exp(-|x - o_i|^2 / (2 dim sigma_i^2)) / |x - o_i|``,
    computed in log space so far-away points do not underflow. A point lying
    exactly on one or more shifts gives those components equal weight and
    the rest zero.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    O = np.asarray(shifts, dtype=float)
    sig = np.asarray(sigmas, dtype=float)
    dim = X.shape[1]
    d2 = ((X[:, None, :] - O[None, :, :]) ** 2).sum(axis=2)
    exact = d2 == 0.0
    with np.errstate(divide="ignore"):
        logw = -d2 / (2.0 * dim * sig ** 2) - 0.5 * np.log(d2)
    logw = np.where(exact, 0.0, logw)
    logw -= logw.max(axis=1, keepdims=True)
    W = np.exp(logw)
    hit = exact.any(axis=1)
    W[hit] = exact[hit].astype(float)
    return W / W.sum(axis=1, keepdims=True)


def make_composition(spec: CompositionSpec, bias: float = 0.0, id: str = "composition",
                     space: Optional[SearchSpace] = None) -> ObjectiveFunction:
    """``sum_i w_i(x) * (lam_i * f_i(T_i x) + bias_i) + bias``."""
    comps = spec.components
    dim = len(comps[0].shift)
    shifts = np.array([c.shift for c in comps], dtype=float)
    sigmas = np.array([c.sigma for c in comps])
    parts = [(BASE_CATALOG[c.function].fn, c.transform(), c.lam, c.bias) for c in comps]

    def fn(X):
        W = composition_weights(X, shifts, sigmas)
        vals = np.stack([lam * g(t.apply(X)) + b for g, t, lam, b in parts], axis=1)
        return np.sum(W * vals, axis=1)

    j = int(np.argmin([c.bias for c in comps]))
    desc = "composition(" + ", ".join(c.function for c in comps) + ")"
    return ObjectiveFunction(
        id=id, space=space or SearchSpace.box(dim, DEFAULT_LOW, DEFAULT_HIGH), fn=fn, bias=bias,
        optimum=(shifts[j].copy(), comps[j].bias + bias), category="composition", description=desc,
        meta={"transforms": [t for _, t, _, _ in parts], "shifts": shifts, "sigmas": sigmas},
    )


# --- the 30-function suite ----------------------------------------------------

UNIMODAL = ("sphere", "bent_cigar", "zakharov")
MULTIMODAL = ("rosenbrock", "rastrigin", "expanded_schaffer_f6", "ackley", "griewank", "levy", "schwefel")
HYBRIDS = (
    (("zakharov", "rosenbrock", "rastrigin"), (0.2, 0.4, 0.4)),
    (("high_conditioned_elliptic", "schwefel", "bent_cigar"), (0.3, 0.3, 0.4)),
    (("bent_cigar", "rosenbrock", "levy"), (0.3, 0.3, 0.4)),
    (("high_conditioned_elliptic", "ackley", "expanded_schaffer_f6", "rastrigin"), (0.2, 0.2, 0.2, 0.4)),
    (("bent_cigar", "griewank", "rastrigin", "rosenbrock"), (0.2, 0.2, 0.3, 0.3)),
    (("expanded_schaffer_f6", "griewank", "rosenbrock", "schwefel"), (0.2, 0.2, 0.3, 0.3)),
    (("discus", "ackley", "griewank", "schwefel", "rastrigin"), (0.1, 0.2, 0.2, 0.2, 0.3)),
    (("high_conditioned_elliptic", "ackley", "rastrigin", "griewank", "discus"), (0.2, 0.2, 0.2, 0.2, 0.2)),
    (("bent_cigar", "rastrigin", "griewank", "levy", "expanded_schaffer_f6"), (0.2, 0.2, 0.2, 0.2, 0.2)),
    (("griewank", "discus", "ackley", "rastrigin", "schwefel", "expanded_schaffer_f6"),
     (0.1, 0.1, 0.2, 0.2, 0.2, 0.2)),
)
# (function, sigma, lambda); component biases are 0, 100, 200, ...
COMPOSITIONS = (
    (("rosenbrock", 10, 1.0), ("high_conditioned_elliptic", 20, 1e-6), ("rastrigin", 30, 1.0)),
    (("rastrigin", 10, 1.0), ("griewank", 20, 10.0), ("schwefel", 30, 1.0)),
    (("rosenbrock", 10, 1.0), ("ackley", 20, 10.0), ("schwefel", 30, 1.0), ("rastrigin", 40, 1.0)),
    (("ackley", 10, 10.0), ("high_conditioned_elliptic", 20, 1e-6), ("griewank", 30, 10.0),
     ("rastrigin", 40, 1.0)),
    (("rastrigin", 10, 10.0), ("levy", 20, 1.0), ("ackley", 30, 10.0), ("discus", 40, 1e-6),
     ("rosenbrock", 50, 1.0)),
    (("expanded_schaffer_f6", 10, 10.0), ("schwefel", 20, 1.0), ("griewank", 30, 10.0),
     ("rosenbrock", 40, 1.0), ("rastrigin", 50, 10.0)),
    (("levy", 10, 10.0), ("rastrigin", 20, 10.0), ("high_conditioned_elliptic", 30, 1e-6),
     ("bent_cigar", 40, 1e-6), ("schwefel", 50, 1.0), ("expanded_schaffer_f6", 60, 10.0)),
    (("bent_cigar", 10, 1e-6), ("rastrigin", 20, 10.0), ("griewank", 30, 10.0), ("ackley", 40, 10.0),
     ("levy", 50, 1.0), ("schwefel", 60, 1.0)),
    (("rastrigin", 10, 1.0), ("expanded_schaffer_f6", 30, 10.0), ("schwefel", 50, 1.0)),
    (("levy", 10, 1.0), ("griewank", 30, 10.0), ("ackley", 50, 10.0)),
)

CATEGORY_RANGES = {
    "unimodal": range(1, 4),
    "multimodal": range(4, 11),
    "hybrid": range(11, 21),
    "composition": range(21, 31),
}


def category_of(index: int) -> str:
    for name, r in CATEGORY_RANGES.items():
        if index in r:
            return name
    raise CatalogError(f"suite index must be 1..30, got {index}")


def _instance_rng(seed: int, index: int) -> RngStream:
    state = np.random.SeedSequence([int(seed), int(index)]).generate_state(1, np.uint64)[0]
    return RngStream(int(state))


def _random_shift(dim: int, rng: RngStream) -> np.ndarray:
    return -SHIFT_RANGE + 2.0 * SHIFT_RANGE * rng.random(dim)


def suite_function(index: int, dim: int, seed: int = SUITE_SEED) -> ObjectiveFunction:
    """Suite entry ``f<index>`` with bias ``100 * index``.

    Each entry draws its data from its own stream seeded by ``(seed, index)``:
    shift, then rotation, then (hybrids) a permutation; compositions draw a
    shift and rotation per component.
    """
    category = category_of(index)
    rng = _instance_rng(seed, index)
    bias = 100.0 * index
    fid = f"f{index}"
    if category in ("unimodal", "multimodal"):
        name = (UNIMODAL + MULTIMODAL)[index - 1]
        spec = _base_spec(name)
        if dim < spec.min_dim:
            raise DimensionError(f"{fid} ({name}) needs dim >= {spec.min_dim}")
        t = Transform(_random_shift(dim, rng), random_rotation(dim, rng), spec.scale)
        return apply_transform(base_function(name, dim), t, bias, id=fid)
    if category == "hybrid":
        subs, props = HYBRIDS[index - 11]
        t = Transform(_random_shift(dim, rng), random_rotation(dim, rng), 1.0)
        perm = np.argsort(rng.random(dim), kind="stable")
        spec = HybridSpec(subs, props, perm, tuple(BASE_CATALOG[s].scale for s in subs))
        return make_hybrid(spec, t, bias, id=fid)
    comps = []
    for k, (name, sigma, lam) in enumerate(COMPOSITIONS[index - 21]):
        comps.append(Component(name, float(sigma), lam, 100.0 * k,
                               _random_shift(dim, rng), random_rotation(dim, rng)))
    return make_composition(CompositionSpec(tuple(comps)), bias, id=fid)


def suite(dim: int, seed: int = SUITE_SEED) -> list[ObjectiveFunction]:
    """The 30 suite functions for ``dim`` in index order."""
    if dim not in STANDARD_DIMS:
        logger.info("dim=%d is outside the usual settings %s", dim, STANDARD_DIMS)
    return [suite_function(i, dim, seed) for i in range(1, 31)]


def catalog(dim: int = 10, seed: int = SUITE_SEED) -> list[tuple[str, str, str]]:
    """``(id, category, description)`` for every suite entry."""
    return [(f.id, f.category, f.description) for f in suite(dim, seed)]


def get_function(fid: str, dim: int, seed: int = SUITE_SEED) -> ObjectiveFunction:
    """Resolve ``f1``..``f30`` or a base-function name."""
    if fid in BASE_CATALOG:
        return base_function(fid, dim)
    if fid.startswith("f") and fid[1:].isdigit():
        return suite_function(int(fid[1:]), dim, seed)
    raise CatalogError(f"unknown function id {fid!r}")


# --- external data files ------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CecData:
    shift: np.ndarray
    rotation: np.ndarray
    permutation: Optional[np.ndarray] = None

    def transform(self, scale: float = 1.0) -> Transform:
        return Transform(self.shift, self.rotation, scale)


def load_cec_data(path, function_id: str, dim: int) -> CecData:
    """Read a whitespace-separated instance file.

    Layout: ``dim`` shift values, ``dim * dim`` rotation entries (row-major),
    then optionally ``dim`` 1-based permutation indices. Hybrid ids
    (``f11``..``f20``) require the permutation.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"{path}: cannot read instance data ({exc})") from exc
    try:
        values = np.array([float(tok) for tok in text.split()])
    except ValueError as exc:
        raise ParseError(f"{path}: non-numeric token ({exc})") from exc
    base = dim + dim * dim
    n = values.size
    if n not in (base, base + dim):
        hint = f"missing {base - n}" if n < base else f"{n - base} extra"
        raise ParseError(
            f"{path}: {function_id} at dim {dim} expects {base} values (shift + rotation) "
            f"or {base + dim} (with permutation), found {n} ({hint})"
        )
    shift = values[:dim]
    rotation = values[dim:base].reshape(dim, dim)
    err = orthogonality_error(rotation)
    if not err < ORTHO_TOL:
        raise ValidationError(f"{path}: rotation matrix is not orthogonal (max|M^T M - I| = {err:.3e})")
    perm = None
    if n == base + dim:
        raw = values[base:]
        if not np.all(raw == np.round(raw)) or sorted(raw.astype(int).tolist()) != list(range(1, dim + 1)):
            raise ParseError(f"{path}: trailing {dim} values are not a permutation of 1..{dim}")
        perm = raw.astype(int) - 1
    elif _is_hybrid_id(function_id):
        raise ParseError(f"{path}: hybrid {function_id} needs a permutation, found only {n} values")
    return CecData(shift, rotation, perm)


def save_cec_data(path, data: CecData) -> None:
    """Write ``data`` in the layout read by :func:`load_cec_data`."""
    lines = [" ".join(repr(float(v)) for v in data.shift)]
    lines += [" ".join(repr(float(v)) for v in row) for row in data.rotation]
    if data.permutation is not None:
        lines.append(" ".join(str(int(p) + 1) for p in data.permutation))
    Path(path).write_text("\n".join(lines) + "\n")


def _is_hybrid_id(fid: str) -> bool:
    return fid.startswith("f") and fid[1:].isdigit() and int(fid[1:]) in CATEGORY_RANGES["hybrid"]


def function_from_data(fid: str, dim: int, data: CecData) -> ObjectiveFunction:
    """Suite entry ``fid`` rebuilt on loaded shift/rotation (and permutation).

    Only single-transform entries (f1..f20) fit the file layout.
    """
    index = int(fid[1:])
    category = category_of(index)
    bias = 100.0 * index
    if category in ("unimodal", "multimodal"):
        name = (UNIMODAL + MULTIMODAL)[index - 1]
        return apply_transform(base_function(name, dim), data.transform(BASE_CATALOG[name].scale), bias, id=fid)
    if category == "hybrid":
        subs, props = HYBRIDS[index - 11]
        spec = HybridSpec(subs, props, data.permutation, tuple(BASE_CATALOG[s].scale for s in subs))
        return make_hybrid(spec, data.transform(), bias, id=fid)
    raise ConfigurationError(f"{fid} is a composition; the instance file layout holds a single transform")
