"""Domain types shared by every other module: bounds, population state, seeding.

Positions are stored row-wise in a single ``(NP, D)`` array so a whole
generation can be processed with array operations. Random numbers always come
from a :class:`numpy.random.Generator` built by :func:`make_rng`; a generator
belongs to exactly one run.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

MIN_POPULATION = 5


class ContractError(ValueError):
    """A caller passed arguments that break an operation's preconditions."""


class ConfigurationError(ValueError):
    """A run or campaign is configured in a way that cannot be executed."""


def make_rng(seed: int) -> np.random.Generator:
    """Return the PCG64 generator used by a single run.

    PCG64 streams are platform independent, so equal seeds give equal draws.
    """
    return np.random.Generator(np.random.PCG64(int(seed)))


def as_vector(x, name: str = "vector") -> np.ndarray:
    v = np.array(x, dtype=float)
    if v.ndim != 1:
        raise ContractError(f"{name} must be one-dimensional, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ContractError(f"{name} contains non-finite values")
    return v


@dataclass(frozen=True)
class Bounds:
    """Per-coordinate box ``lower[j] <= x[j] <= upper[j]``."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = as_vector(self.lower, "lower bound")
        hi = as_vector(self.upper, "upper bound")
        if lo.shape != hi.shape:
            raise ContractError(
                f"lower and upper bounds differ in length ({lo.size} vs {hi.size})"
            )
        if not np.all(lo < hi):
            raise ContractError("every lower bound must be strictly below its upper bound")
        lo.flags.writeable = False
        hi.flags.writeable = False
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @classmethod
    def uniform(cls, low: float, high: float, dim: int) -> "Bounds":
        """Scalar bounds repeated over ``dim`` coordinates."""
        return cls(np.full(dim, float(low)), np.full(dim, float(high)))

    @property
    def dim(self) -> int:
        return self.lower.size

    @property
    def width(self) -> np.ndarray:
        return self.upper - self.lower

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all((x >= self.lower) & (x <= self.upper)))

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """Draw ``n`` points uniformly inside the box, shape ``(n, D)``."""
        u = rng.random((n, self.dim))
        return np.minimum(self.lower + u * self.width, self.upper)


@dataclass(frozen=True)
class Individual:
    """Read-only snapshot of one population member."""

    position: np.ndarray
    fitness: float
    scale_factor: float
    crossover_rate: float


@dataclass
class Population:
    """NP members held as parallel arrays, one row of ``positions`` per member.

    ``fitness[i]`` always holds the objective value of ``positions[i]``; only
    :func:`init_population` and the engine's replacement step write to it.
    """

    positions: np.ndarray
    fitness: np.ndarray
    scale_factor: np.ndarray
    crossover_rate: np.ndarray
    generation: int = 0
    _best: int = field(default=-1, repr=False)

    def __post_init__(self):
        n = self.positions.shape[0]
        for name in ("fitness", "scale_factor", "crossover_rate"):
            if getattr(self, name).shape != (n,):
                raise ContractError(f"{name} must have shape ({n},)")
        self.refresh_best()

    @property
    def size(self) -> int:
        return self.positions.shape[0]

    @property
    def dim(self) -> int:
        return self.positions.shape[1]

    def __len__(self) -> int:
        return self.size

    def __getitem__(self, i: int) -> Individual:
        return Individual(
            self.positions[i].copy(),
            float(self.fitness[i]),
            float(self.scale_factor[i]),
            float(self.crossover_rate[i]),
        )

    @property
    def best_index(self) -> int:
        """Index of the lowest fitness; ties go to the lowest index."""
        return self._best

    @property
    def best_fitness(self) -> float:
        return float(self.fitness[self._best])

    def refresh_best(self) -> int:
        self._best = int(np.argmin(self.fitness))
        return self._best

    def replace(self, idx: np.ndarray, positions: np.ndarray, fitness: np.ndarray) -> None:
        """Overwrite members ``idx`` with already evaluated points."""
        self.positions[idx] = positions
        self.fitness[idx] = fitness
        self.refresh_best()


# anything callable on one vector; ``evaluate_batch`` is used when present
ObjectiveLike = Callable[[np.ndarray], float]


def evaluate_many(objective: ObjectiveLike, X: np.ndarray) -> np.ndarray:
    """Evaluate every row of ``X``.

    Objectives exposing ``evaluate_batch`` are called once; plain callables are
    applied row by row.
    """
    batch = getattr(objective, "evaluate_batch", None)
    if batch is not None:
        values = np.asarray(batch(X), dtype=float)
    else:
        values = np.fromiter((objective(x) for x in X), dtype=float, count=len(X))
    return values


def check_finite_fitness(values: np.ndarray, X: np.ndarray) -> None:
    bad = np.flatnonzero(np.isnan(values))
    if bad.size:
        i = int(bad[0])
        raise FloatingPointError(
            f"objective returned NaN at position {np.array2string(X[i], precision=6)}"
        )


def clamp_or_resample(position, bounds: Bounds, rng: np.random.Generator) -> np.ndarray:
    """Repair coordinates outside ``bounds`` by uniform resampling.

    In-range coordinates are returned untouched. Works on a single vector or a
    ``(n, D)`` stack; one uniform number is drawn per violated coordinate, in
    row-major order.
    """
    x = np.array(position, dtype=float)
    if x.shape[-1] != bounds.dim:
        raise ContractError(
            f"position has {x.shape[-1]} coordinates but bounds have {bounds.dim}"
        )
    lo = np.broadcast_to(bounds.lower, x.shape)
    hi = np.broadcast_to(bounds.upper, x.shape)
    bad = (x < lo) | (x > hi) | ~np.isfinite(x)
    n_bad = int(np.count_nonzero(bad))
    if n_bad:
        u = rng.random(n_bad)
        x[bad] = np.minimum(lo[bad] + u * (hi[bad] - lo[bad]), hi[bad])
    return x


def init_population(
    NP: int,
    bounds: Bounds,
    objective: ObjectiveLike,
    rng: np.random.Generator,
    F0: float = 0.5,
    CR0: float = 0.9,
) -> Population:
    """Uniform random population of ``NP`` evaluated members.

    Consumes exactly ``NP`` objective evaluations.
    """
    if NP < MIN_POPULATION:
        raise ConfigurationError(f"NP must be at least {MIN_POPULATION}, got {NP}")
    X = bounds.sample(rng, NP)
    fit = evaluate_many(objective, X)
    check_finite_fitness(fit, X)
    return Population(
        positions=X,
        fitness=fit,
        scale_factor=np.full(NP, float(F0)),
        crossover_rate=np.full(NP, float(CR0)),
    )
