"""Donor-vector construction for classic and intelligent-selection DE strategies.

Every strategy is written in one template::

    donor = X[base] + sum_m coef_m * (X[leading_m] - X[terminal_m])

where ``coef_m`` is ``F`` except for current-to-rand/1 (``k`` then ``k * F``).
Parents are drawn for a whole generation at once from the frozen population;
:func:`select_parents` and :func:`make_donor` are the single-member views.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import selection
from .core import ConfigurationError, ContractError, Population
from .selection import DistanceMatrix, RankWeights


class Kind(Enum):
    RAND1 = "rand1"
    BEST1 = "best1"
    RAND2 = "rand2"
    BEST2 = "best2"
    CURRENT_TO_BEST1 = "current-to-best1"
    RAND_TO_BEST1 = "rand-to-best1"
    CURRENT_TO_RAND1 = "current-to-rand1"
    DERL2 = "derl2"
    PROXIMITY2 = "proximity2"
    RANKING2 = "ranking2"
    UDE = "ude"


STRATEGY_NAMES = tuple(k.value for k in Kind)

# number of difference vectors in each template
_N_DIFFS = {
    Kind.RAND1: 1,
    Kind.BEST1: 1,
    Kind.RAND2: 2,
    Kind.BEST2: 2,
    Kind.CURRENT_TO_BEST1: 2,
    Kind.RAND_TO_BEST1: 2,
    Kind.CURRENT_TO_RAND1: 2,
    Kind.DERL2: 2,
    Kind.PROXIMITY2: 2,
    Kind.RANKING2: 2,
    Kind.UDE: 2,
}

# how many parents are drawn (besides the current and best members)
_N_DRAWN = {
    Kind.RAND1: 3,
    Kind.BEST1: 2,
    Kind.RAND2: 5,
    Kind.BEST2: 4,
    Kind.CURRENT_TO_BEST1: 2,
    Kind.RAND_TO_BEST1: 3,
    Kind.CURRENT_TO_RAND1: 3,
    Kind.DERL2: 5,
    Kind.PROXIMITY2: 5,
    Kind.RANKING2: 5,
    Kind.UDE: 5,
}

_USES_BEST = {Kind.BEST1, Kind.BEST2, Kind.CURRENT_TO_BEST1, Kind.RAND_TO_BEST1}


@dataclass(frozen=True)
class MutationStrategy:
    kind: Kind = Kind.UDE
    k_weight: float = 0.5

    def __post_init__(self):
        if not isinstance(self.kind, Kind):
            object.__setattr__(self, "kind", Kind(self.kind))
        if not 0.0 <= self.k_weight <= 1.0:
            raise ConfigurationError(f"k_weight must lie in [0, 1], got {self.k_weight}")

    @classmethod
    def from_name(cls, name: str, k_weight: float = 0.5) -> "MutationStrategy":
        try:
            return cls(Kind(name), k_weight)
        except ValueError:
            raise ConfigurationError(
                f"unknown strategy {name!r}; valid identifiers: {', '.join(STRATEGY_NAMES)}"
            ) from None

    @property
    def name(self) -> str:
        return self.kind.value

    @property
    def n_differences(self) -> int:
        return _N_DIFFS[self.kind]

    @property
    def needs_rank_weights(self) -> bool:
        return self.kind in (Kind.RANKING2, Kind.UDE)

    @property
    def needs_distances(self) -> bool:
        return self.kind in (Kind.PROXIMITY2, Kind.UDE)

    def check_population_size(self, NP: int) -> None:
        """Raise if ``NP`` cannot supply mutually distinct parents."""
        needed = _N_DRAWN[self.kind] + 1 + (self.kind in _USES_BEST)
        if NP < needed:
            raise ConfigurationError(
                f"strategy {self.name} needs at least {needed} members for distinct parents, got NP={NP}"
            )


@dataclass(frozen=True)
class ParentRoles:
    """Indices filling the base, leading and terminal slots of one donor.

    Current-to-best/1, rand-to-best/1 and current-to-rand/1 reuse the current
    or base member as a terminal, as their formulas require.
    """

    base: int
    leading: tuple
    terminal: tuple


@dataclass
class RoleArrays:
    """Parent roles for ``m`` members: ``base`` (m,), ``leading``/``terminal`` (m, L)."""

    base: np.ndarray
    leading: np.ndarray
    terminal: np.ndarray

    def __getitem__(self, n: int) -> ParentRoles:
        return ParentRoles(
            int(self.base[n]),
            tuple(int(v) for v in self.leading[n]),
            tuple(int(v) for v in self.terminal[n]),
        )


class _Picker:
    """Sequential roulette draws for a batch of members, each excluding all earlier picks."""

    def __init__(self, NP: int, currents: np.ndarray, rng: np.random.Generator):
        self.rng = rng
        self.rows = np.arange(currents.size)
        self.excluded = np.zeros((currents.size, NP), dtype=bool)
        self.excluded[self.rows, currents] = True
        self.uniform = np.ones((currents.size, NP))

    def exclude(self, idx) -> None:
        self.excluded[self.rows, idx] = True

    def __call__(self, weights: np.ndarray | None = None) -> np.ndarray:
        w = self.uniform if weights is None else weights
        idx = selection.draw_masked(w, self.excluded, self.rng)
        self.excluded[self.rows, idx] = True
        return idx


def tournament_roles(candidates: np.ndarray, fitness: np.ndarray) -> RoleArrays:
    """Fittest candidate of each row becomes the base; the other four keep drawn order.

    The remaining four fill leading, terminal, leading, terminal.
    """
    cand = np.atleast_2d(candidates)
    m = cand.shape[0]
    winner = np.argmin(fitness[cand], axis=1)
    keep = np.ones(cand.shape, dtype=bool)
    keep[np.arange(m), winner] = False
    rest = cand[keep].reshape(m, cand.shape[1] - 1)
    return RoleArrays(cand[np.arange(m), winner], rest[:, 0::2], rest[:, 1::2])


def select_parents_batch(
    strategy: MutationStrategy,
    pop: Population,
    currents,
    rank_weights: RankWeights | None,
    dm: DistanceMatrix | None,
    rng: np.random.Generator,
) -> RoleArrays:
    """Draw parent roles for every index in ``currents`` from the frozen ``pop``."""
    currents = np.atleast_1d(np.asarray(currents, dtype=int))
    NP = pop.size
    strategy.check_population_size(NP)
    kind = strategy.kind
    m = currents.size
    pick = _Picker(NP, currents, rng)

    if kind in _USES_BEST:
        best = np.full(m, pop.best_index)
        pick.exclude(best)

    if kind is Kind.RAND1:
        r = [pick() for _ in range(3)]
        return RoleArrays(r[0], np.stack([r[1]], 1), np.stack([r[2]], 1))
    if kind is Kind.BEST1:
        r1, r2 = pick(), pick()
        return RoleArrays(best, r1[:, None], r2[:, None])
    if kind is Kind.RAND2:
        r = [pick() for _ in range(5)]
        return RoleArrays(r[0], np.stack([r[1], r[3]], 1), np.stack([r[2], r[4]], 1))
    if kind is Kind.BEST2:
        r = [pick() for _ in range(4)]
        return RoleArrays(best, np.stack([r[0], r[2]], 1), np.stack([r[1], r[3]], 1))
    if kind is Kind.CURRENT_TO_BEST1:
        r2, r3 = pick(), pick()
        return RoleArrays(currents.copy(), np.stack([best, r2], 1), np.stack([currents, r3], 1))
    if kind is Kind.RAND_TO_BEST1:
        r1, r2, r3 = pick(), pick(), pick()
        return RoleArrays(r1, np.stack([best, r2], 1), np.stack([r1, r3], 1))
    if kind is Kind.CURRENT_TO_RAND1:
        r1, r2, r3 = pick(), pick(), pick()
        return RoleArrays(currents.copy(), np.stack([r1, r2], 1), np.stack([currents, r3], 1))

    if kind is Kind.DERL2:
        return tournament_roles(np.stack([pick() for _ in range(5)], 1), pop.fitness)

    if kind is Kind.PROXIMITY2:
        W = selection.design_weights(_require(dm, kind))[currents]
        r = [pick(W) for _ in range(5)]
        return RoleArrays(r[0], np.stack([r[1], r[3]], 1), np.stack([r[2], r[4]], 1))

    rank = np.broadcast_to(_require(rank_weights, kind).member_weights, (m, NP))
    if kind is Kind.RANKING2:
        base, l1, l2 = pick(rank), pick(rank), pick(rank)
        t1, t2 = pick(), pick()
        return RoleArrays(base, np.stack([l1, l2], 1), np.stack([t1, t2], 1))

    # UDE: two fitness-space picks, then one design-space pick, then two random terminals
    fs_a, fs_b = pick(rank), pick(rank)
    swap = rng.random(m) < 0.5
    fs1 = np.where(swap, fs_b, fs_a)
    fs2 = np.where(swap, fs_a, fs_b)
    W = selection.design_weights(_require(dm, kind))[currents]
    ds = pick(W)
    r1, r2 = pick(), pick()
    return RoleArrays(fs1, np.stack([fs2, ds], 1), np.stack([r1, r2], 1))


def _require(obj, kind: Kind):
    if obj is None:
        needs = "distance matrix" if kind is Kind.PROXIMITY2 else "rank weights"
        raise ContractError(f"strategy {kind.value} needs {needs}")
    return obj


def select_parents(
    strategy: MutationStrategy,
    pop: Population,
    current: int,
    rank_weights: RankWeights | None,
    dm: DistanceMatrix | None,
    rng: np.random.Generator,
) -> ParentRoles:
    return select_parents_batch(strategy, pop, [current], rank_weights, dm, rng)[0]


def difference_weights(strategy: MutationStrategy, F) -> np.ndarray:
    """Coefficients of the difference vectors, shape ``(m, L)``."""
    F = np.atleast_1d(np.asarray(F, dtype=float))
    if strategy.kind is Kind.CURRENT_TO_RAND1:
        k = strategy.k_weight
        return np.stack([np.full_like(F, k), k * F], 1)
    return np.repeat(F[:, None], strategy.n_differences, axis=1)


def make_donors(strategy: MutationStrategy, X: np.ndarray, roles: RoleArrays, F) -> np.ndarray:
    """Donor vectors for a batch of roles; ``F`` is a scalar or one value per row."""
    coef = difference_weights(strategy, np.broadcast_to(F, roles.base.shape))
    diffs = X[roles.leading] - X[roles.terminal]
    return X[roles.base] + np.einsum("ml,mld->md", coef, diffs)


def make_donor(
    strategy: MutationStrategy, pop: Population | np.ndarray, roles: ParentRoles, F: float
) -> np.ndarray:
    """Donor for one member. No bound repair is applied."""
    X = pop.positions if isinstance(pop, Population) else np.asarray(pop, dtype=float)
    if len(roles.leading) != strategy.n_differences or len(roles.terminal) != strategy.n_differences:
        raise ContractError(
            f"strategy {strategy.name} takes {strategy.n_differences} difference vectors"
        )
    batch = RoleArrays(
        np.array([roles.base]), np.array([roles.leading]), np.array([roles.terminal])
    )
    return make_donors(strategy, X, batch, F)[0]
