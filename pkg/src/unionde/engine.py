"""The generational DE loop with synchronous replacement.

Each generation builds all NP trial vectors from the population as it stood at
the start of the generation, then evaluates them and replaces every member whose
trial is strictly better. Distance-matrix rows are refreshed only for replaced
members.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from . import benchmarks
from .core import (
    ConfigurationError,
    ContractError,
    Population,
    check_finite_fitness,
    clamp_or_resample,
    evaluate_many,
    init_population,
    make_rng,
)
from .mutation import MutationStrategy, make_donors, select_parents_batch
from .params import ParamPolicy, propose_batch
from .selection import DistanceMatrix, build_distance_matrix, build_rank_weights, update_after_replacement

log = logging.getLogger(__name__)


@dataclass
class RunConfig:
    NP: int = 50
    D: int = 30
    max_evals: int | None = None
    seed: int = 0
    strategy: MutationStrategy | str = "ude"
    param_policy: ParamPolicy | str = "jde"
    objective_name: str = "sphere"
    target_error: float | None = None

    def __post_init__(self):
        if isinstance(self.strategy, str):
            self.strategy = MutationStrategy.from_name(self.strategy)
        if isinstance(self.param_policy, str):
            self.param_policy = ParamPolicy.parse(self.param_policy)
        if self.max_evals is None:
            self.max_evals = self.D * 10_000
        if self.max_evals < self.NP:
            raise ConfigurationError(
                f"max_evals ({self.max_evals}) must cover the initial population ({self.NP})"
            )


@dataclass
class RunResult:
    best_error: float
    evals_used: int
    trajectory: np.ndarray  # rows of (evaluations so far, best fitness)
    seed: int
    best_position: np.ndarray = field(repr=False)
    best_fitness: float = float("nan")
    population: Population | None = field(default=None, repr=False)
    distance_matrix: DistanceMatrix | None = field(default=None, repr=False)


def binomial_crossover_batch(
    parents: np.ndarray, donors: np.ndarray, CR, rng: np.random.Generator
) -> np.ndarray:
    """Row-wise binomial crossover; draws all ``j_rand`` first, then an ``(m, D)`` uniform block."""
    if parents.shape != donors.shape:
        raise ContractError(f"parent shape {parents.shape} differs from donor shape {donors.shape}")
    m, d = parents.shape
    CR = np.broadcast_to(np.asarray(CR, dtype=float), (m,))
    j_rand = rng.integers(0, d, size=m)
    take = rng.random((m, d)) < CR[:, None]
    take[np.arange(m), j_rand] = True
    return np.where(take, donors, parents)


def binomial_crossover(parent, donor, CR: float, rng: np.random.Generator) -> np.ndarray:
    """Trial vector: donor coordinate where ``U < CR`` or at the forced index ``j_rand``."""
    parent = np.asarray(parent, dtype=float)
    donor = np.asarray(donor, dtype=float)
    if parent.shape != donor.shape or parent.ndim != 1:
        raise ContractError(f"parent shape {parent.shape} differs from donor shape {donor.shape}")
    return binomial_crossover_batch(parent[None], donor[None], CR, rng)[0]


def run(config: RunConfig, objective=None) -> RunResult:
    """Minimise ``objective`` (looked up by ``config.objective_name`` when omitted).

    Raises
    ------
    FloatingPointError
        If the objective returns NaN; the message names the offending position.
    """
    if objective is None:
        objective = benchmarks.make_function(config.objective_name, config.D)
    dim = getattr(objective, "dimension", config.D)
    if dim != config.D:
        raise ConfigurationError(f"objective has dimension {dim}, config says D={config.D}")
    bounds = objective.bounds
    strategy = config.strategy
    policy = config.param_policy
    strategy.check_population_size(config.NP)
    error_of = getattr(objective, "error", lambda v: v)

    rng = make_rng(config.seed)
    pop = init_population(config.NP, bounds, objective, rng, policy.F0, policy.CR0)
    NP = pop.size
    evals = NP
    dm = build_distance_matrix(pop) if strategy.needs_distances else None
    trajectory = [(evals, pop.best_fitness)]
    members = np.arange(NP)

    def reached_target() -> bool:
        return config.target_error is not None and error_of(pop.best_fitness) <= config.target_error

    while evals < config.max_evals and not reached_target():
        F, CR = propose_batch(pop.scale_factor, pop.crossover_rate, policy.jde, rng)
        rw = build_rank_weights(pop) if strategy.needs_rank_weights else None
        roles = select_parents_batch(strategy, pop, members, rw, dm, rng)
        donors = make_donors(strategy, pop.positions, roles, F)
        trials = binomial_crossover_batch(pop.positions, donors, CR, rng)
        trials = clamp_or_resample(trials, bounds, rng)

        n = min(NP, config.max_evals - evals)
        values = evaluate_many(objective, trials[:n])
        check_finite_fitness(values, trials)
        evals += n

        won = np.flatnonzero(values < pop.fitness[:n])
        if won.size:
            pop.replace(won, trials[won], values[won])
            pop.scale_factor[won] = F[won]
            pop.crossover_rate[won] = CR[won]
            if dm is not None:
                update_after_replacement(dm, pop, won)
        pop.generation += 1
        trajectory.append((evals, pop.best_fitness))

    best = pop.best_index
    log.debug("seed %d: %d evaluations, best %.6g", config.seed, evals, pop.best_fitness)
    return RunResult(
        best_error=float(error_of(pop.best_fitness)),
        evals_used=evals,
        trajectory=np.array(trajectory),
        seed=config.seed,
        best_position=pop.positions[best].copy(),
        best_fitness=pop.best_fitness,
        population=pop,
        distance_matrix=dm,
    )
