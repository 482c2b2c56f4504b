"""Comparison statistics over per-function mean errors.

Sign convention for the Wilcoxon signed-rank test: differences are ``a - b``,
so a *positive* rank means algorithm ``b`` reached the lower error. The verdict
``"+"`` therefore reads "b is significantly better than a".
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.stats import norm, rankdata

from .core import ContractError

EXACT_LIMIT = 25
MIN_EFFECTIVE = 5


def mean_error(results: Iterable) -> float:
    """Arithmetic mean of ``best_error`` (plain numbers are accepted too)."""
    errors = [getattr(r, "best_error", r) for r in results]
    if not errors:
        raise ContractError("mean_error needs at least one result")
    return math.fsum(errors) / len(errors)


def win_tie_lose(a: Sequence[float], b: Sequence[float], tie_tol: float = 0.0) -> tuple[int, int, int]:
    """Count functions where ``b`` beats ``a`` by more than ``tie_tol``, ties, and losses."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ContractError(f"length mismatch: {a.size} vs {b.size}")
    diff = a - b
    win = int(np.count_nonzero(diff > tie_tol))
    lose = int(np.count_nonzero(diff < -tie_tol))
    return win, a.size - win - lose, lose


@dataclass(frozen=True)
class PairedSample:
    values_a: np.ndarray
    values_b: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.values_a, dtype=float)
        b = np.asarray(self.values_b, dtype=float)
        if a.shape != b.shape or a.ndim != 1:
            raise ContractError(f"paired samples must be equal-length vectors, got {a.shape} and {b.shape}")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise ContractError("paired samples must be finite")
        object.__setattr__(self, "values_a", a)
        object.__setattr__(self, "values_b", b)


@dataclass(frozen=True)
class WilcoxonResult:
    mr_minus: float
    mr_plus: float
    sr_minus: float
    sr_plus: float
    p_value: float
    verdict: str
    n_effective: int
    underpowered: bool = False
    method: str = "exact"

    def row(self) -> tuple:
        """Values in table order: MR-, MR+, SR-, SR+, p, verdict."""
        return (self.mr_minus, self.mr_plus, self.sr_minus, self.sr_plus, self.p_value, self.verdict)


def signed_rank_distribution(ranks: Sequence[float]) -> np.ndarray:
    """Null distribution of the positive rank sum over all ``2**n`` sign patterns.

    Ranks are doubled so mid-ranks become integers: ``counts[s]`` is the number
    of sign patterns whose positive rank sum equals ``s / 2``.
    """
    doubled = np.rint(2.0 * np.asarray(ranks, dtype=float)).astype(np.int64)
    counts = np.zeros(int(doubled.sum()) + 1, dtype=np.int64)
    counts[0] = 1
    for r in doubled:
        shifted = np.zeros_like(counts)
        shifted[r:] = counts[:-r]
        counts = counts + shifted
    return counts


def exact_p_value(ranks: Sequence[float], sr_plus: float) -> float:
    """Two-sided p: twice the smaller tail of the exact null distribution, capped at 1."""
    counts = signed_rank_distribution(ranks)
    t = int(round(2.0 * sr_plus))
    total = float(counts.sum())
    lower = counts[: t + 1].sum() / total
    upper = counts[t:].sum() / total
    return float(min(1.0, 2.0 * min(lower, upper)))


def normal_p_value(ranks: Sequence[float], sr_plus: float) -> float:
    """Normal approximation with continuity and tie corrections."""
    ranks = np.asarray(ranks, dtype=float)
    n = ranks.size
    mu = n * (n + 1) / 4.0
    _, tie_sizes = np.unique(ranks, return_counts=True)
    var = n * (n + 1) * (2 * n + 1) / 24.0 - np.sum(tie_sizes**3 - tie_sizes) / 48.0
    dev = abs(sr_plus - mu) - 0.5
    if var <= 0 or dev <= 0:
        return 1.0
    return float(min(1.0, 2.0 * norm.sf(dev / math.sqrt(var))))


def wilcoxon_signed_rank(sample: PairedSample, alpha: float = 0.05, method: str = "auto") -> WilcoxonResult:
    """Paired two-sided Wilcoxon signed-rank test.

    Zero differences are dropped before ranking; absolute differences get
    mid-ranks on ties. ``method="auto"`` enumerates the exact null distribution
    for up to 25 non-zero pairs and uses the normal approximation beyond.
    Fewer than five non-zero pairs give an underpowered result with verdict ``"="``.
    """
    if method not in ("auto", "exact", "normal"):
        raise ValueError(f"unknown method {method!r}")
    d = sample.values_a - sample.values_b
    d = d[d != 0.0]
    n = d.size
    ranks = rankdata(np.abs(d)) if n else np.empty(0)
    pos = d > 0
    sr_plus = float(ranks[pos].sum())
    sr_minus = float(ranks[~pos].sum())
    n_plus = int(pos.sum())
    n_minus = n - n_plus
    mr_plus = sr_plus / n_plus if n_plus else 0.0
    mr_minus = sr_minus / n_minus if n_minus else 0.0

    if method == "auto":
        method = "exact" if n <= EXACT_LIMIT else "normal"
    if n == 0:
        p = 1.0
    elif method == "exact":
        p = exact_p_value(ranks, sr_plus)
    else:
        p = normal_p_value(ranks, sr_plus)

    underpowered = n < MIN_EFFECTIVE
    verdict = "="
    if not underpowered and p < alpha and sr_plus != sr_minus:
        verdict = "+" if sr_plus > sr_minus else "-"
    return WilcoxonResult(mr_minus, mr_plus, sr_minus, sr_plus, p, verdict, n, underpowered, method)
