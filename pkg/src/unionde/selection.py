"""Parent-selection criteria: fitness rank weights, design-space proximity, roulette.

Rank weights give the member of rank ``i`` (1 = best) the mass ``(NP - i) / NP``.
Design-space weights come from the pairwise distance matrix: row ``i`` assigns
``1 - d(i, j) / sum_k d(i, k)`` to member ``j``, so nearer members weigh more.
The self entry of a row is always masked to zero before sampling.

All samplers work on stacks of weight rows so that one call serves every member
of a generation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.spatial.distance import cdist, pdist, squareform

from .core import ConfigurationError, ContractError, Population


@dataclass(frozen=True)
class RankWeights:
    """Fitness-rank roulette masses for one frozen population.

    Attributes
    ----------
    sorted_order : ndarray of int
        Member indices from best to worst fitness (stable on ties).
    weight_of_rank : ndarray
        ``weight_of_rank[r - 1] = (NP - r) / NP`` for rank ``r``.
    member_weights : ndarray
        The same masses indexed by member, ready for sampling.
    """

    sorted_order: np.ndarray
    weight_of_rank: np.ndarray
    member_weights: np.ndarray

    def total(self) -> float:
        return math.fsum(self.weight_of_rank)


def build_rank_weights(pop: Population | np.ndarray) -> RankWeights:
    fitness = pop.fitness if isinstance(pop, Population) else np.asarray(pop, dtype=float)
    n = fitness.size
    if n == 0:
        raise ContractError("cannot rank an empty population")
    order = np.argsort(fitness, kind="stable")
    by_rank = np.arange(n - 1, -1, -1, dtype=float) / n
    by_member = np.empty(n)
    by_member[order] = by_rank
    return RankWeights(order, by_rank, by_member)


class DistanceMatrix:
    """Symmetric Euclidean distance matrix kept in step with a population."""

    def __init__(self, dm: np.ndarray):
        self.dm = dm

    @property
    def size(self) -> int:
        return self.dm.shape[0]

    def __getitem__(self, key):
        return self.dm[key]

    def __array__(self, dtype=None, copy=None):
        return self.dm if dtype is None else self.dm.astype(dtype)


def build_distance_matrix(pop: Population | np.ndarray) -> DistanceMatrix:
    X = pop.positions if isinstance(pop, Population) else np.asarray(pop, dtype=float)
    if X.shape[0] == 0:
        raise ContractError("cannot build a distance matrix for an empty population")
    # pdist fills the upper triangle only; squareform mirrors it
    return DistanceMatrix(squareform(pdist(X)) if X.shape[0] > 1 else np.zeros((1, 1)))


def update_after_replacement(
    dm: DistanceMatrix, pop: Population | np.ndarray, replaced_index
) -> DistanceMatrix:
    """Recompute the rows and columns of ``replaced_index`` in place.

    ``replaced_index`` may be a single index or an array of indices. Every other
    entry is left bit-for-bit untouched.
    """
    X = pop.positions if isinstance(pop, Population) else np.asarray(pop, dtype=float)
    idx = np.atleast_1d(np.asarray(replaced_index))
    if idx.size == 0:
        return dm
    n = dm.size
    if X.shape[0] != n:
        raise ContractError(f"population has {X.shape[0]} members, matrix has {n}")
    if idx.dtype.kind not in "iu" or idx.min() < 0 or idx.max() >= n:
        raise ContractError(f"replacement index out of range for {n} members: {replaced_index}")
    rows = cdist(X[idx], X)
    dm.dm[idx, :] = rows
    dm.dm[:, idx] = rows.T
    dm.dm[idx, idx] = 0.0
    return dm


def probability_row(dm: DistanceMatrix | np.ndarray, i: int) -> np.ndarray:
    """Sampling weights of row ``i``: ``1 - d_ij / sum_k d_ik`` with the self entry zeroed.

    A row of all-zero distances falls back to uniform weights over ``j != i``.
    """
    row = np.asarray(dm[i], dtype=float)
    total = row.sum()
    if total > 0:
        w = np.maximum(1.0 - row / total, 0.0)
    else:
        w = np.ones_like(row)
    w[i] = 0.0
    return w


def design_weights(dm: DistanceMatrix | np.ndarray) -> np.ndarray:
    """:func:`probability_row` for every row at once."""
    D = np.asarray(dm, dtype=float)
    totals = D.sum(axis=1, keepdims=True)
    degenerate = totals[:, 0] <= 0
    safe = np.where(degenerate[:, None], 1.0, totals)
    W = np.maximum(1.0 - D / safe, 0.0)
    W[degenerate] = 1.0
    np.fill_diagonal(W, 0.0)
    return W


def draw_masked(weights: np.ndarray, excluded: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """One roulette draw per row of ``weights``, skipping ``excluded`` entries.

    Rows whose remaining mass is zero fall back to a uniform draw over the
    non-excluded entries. Consumes exactly one uniform number per row.
    """
    W = np.where(excluded, 0.0, np.maximum(weights, 0.0))
    cum = np.cumsum(W, axis=1)
    empty = cum[:, -1] <= 0
    if empty.any():
        allowed = ~excluded[empty]
        if not allowed.any(axis=1).all():
            raise ConfigurationError("roulette has no candidate left after exclusions")
        W[empty] = allowed
        cum[empty] = np.cumsum(allowed, axis=1)
    total = cum[:, -1]
    u = rng.random(W.shape[0]) * total
    idx = np.count_nonzero(cum <= u[:, None], axis=1)
    # u * total can round up onto the total itself; pull back to the last positive entry
    overflow = idx >= W.shape[1]
    if overflow.any():
        last = W.shape[1] - 1 - np.argmax(W[overflow, ::-1] > 0, axis=1)
        idx[overflow] = last
    return idx


def roulette_select(
    weights,
    k: int,
    without_replacement: bool = True,
    excluded: Iterable[int] = (),
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    """Draw ``k`` indices with probability proportional to ``weights``.

    Parameters
    ----------
    weights : array_like
        Non-negative roulette masses; they need not sum to one.
    k : int
        Number of indices to return.
    without_replacement : bool
        Remove each drawn index before the next draw.
    excluded : iterable of int
        Indices that may never be returned.
    rng : numpy.random.Generator

    Raises
    ------
    ConfigurationError
        If fewer than ``k`` indices remain once exclusions are applied.
    """
    if rng is None:
        raise ContractError("roulette_select needs a random generator")
    w = np.asarray(weights, dtype=float)[None, :]
    mask = np.zeros(w.shape, dtype=bool)
    for e in excluded:
        mask[0, e] = True
    available = int(w.shape[1] - mask.sum())
    if k < 1 or (without_replacement and k > available) or available == 0:
        raise ConfigurationError(f"cannot draw {k} indices from {available} candidates")
    out = np.empty(k, dtype=int)
    for n in range(k):
        j = int(draw_masked(w, mask, rng)[0])
        out[n] = j
        if without_replacement:
            mask[0, j] = True
    return out
