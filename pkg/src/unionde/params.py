"""jDE self-adaptation of the per-member scale factor F and crossover rate CR.

Each member proposes trial parameters before its trial vector is built; the
trial parameters are kept only if the trial replaces the member.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, replace

import numpy as np

from .core import ConfigurationError, Individual


@dataclass(frozen=True)
class JdeConfig:
    """Regeneration probabilities and the F range ``[F_l, F_l + F_u]``."""

    tau1: float = 0.1
    tau2: float = 0.1
    F_l: float = 0.1
    F_u: float = 0.9

    @classmethod
    def fixed(cls) -> "JdeConfig":
        """Never regenerate: members keep their initial F and CR."""
        return cls(tau1=0.0, tau2=0.0)


@dataclass(frozen=True)
class ParamPolicy:
    """A jDE configuration plus the initial F and CR given to every member."""

    jde: JdeConfig = JdeConfig()
    F0: float = 0.5
    CR0: float = 0.9
    name: str = "jde"

    @classmethod
    def parse(cls, spec: str) -> "ParamPolicy":
        """Parse ``jde`` or ``fixed:F=<v>,CR=<v>``."""
        spec = spec.strip()
        if spec == "jde":
            return cls()
        m = re.fullmatch(r"fixed:F=([^,]+),CR=(.+)", spec)
        if m is None:
            raise ConfigurationError(
                f"unknown parameter policy {spec!r}; use 'jde' or 'fixed:F=<v>,CR=<v>'"
            )
        try:
            F, CR = float(m.group(1)), float(m.group(2))
        except ValueError:
            raise ConfigurationError(f"cannot parse numbers in policy {spec!r}") from None
        if not (0.0 < F <= 2.0 and 0.0 <= CR <= 1.0):
            raise ConfigurationError(f"fixed policy needs F in (0, 2] and CR in [0, 1], got {spec!r}")
        return cls(JdeConfig.fixed(), F, CR, spec)


def propose(F: float, CR: float, cfg: JdeConfig, rng: np.random.Generator) -> tuple[float, float]:
    # draw order: F gate, F value (only if the gate fires), CR gate, CR value
    if rng.random() < cfg.tau1:
        F = cfg.F_l + rng.random() * cfg.F_u
    if rng.random() < cfg.tau2:
        CR = rng.random()
    return F, CR


def propose_parameters(member: Individual, cfg: JdeConfig, rng: np.random.Generator) -> tuple[float, float]:
    """Trial ``(F, CR)`` for ``member``.

    With probability ``tau1`` F is redrawn as ``F_l + U * F_u``, otherwise kept;
    independently, with probability ``tau2`` CR is redrawn uniformly on [0, 1].
    """
    return propose(member.scale_factor, member.crossover_rate, cfg, rng)


def propose_batch(
    F: np.ndarray, CR: np.ndarray, cfg: JdeConfig, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """:func:`propose` applied member by member, in index order."""
    F_new = F.copy()
    CR_new = CR.copy()
    if cfg.tau1 == 0.0 and cfg.tau2 == 0.0:
        return F_new, CR_new
    for i in range(F.size):
        F_new[i], CR_new[i] = propose(F[i], CR[i], cfg, rng)
    return F_new, CR_new


def commit_parameters(member: Individual, F_trial: float, CR_trial: float, trial_won: bool) -> Individual:
    if not trial_won:
        return member
    return replace(member, scale_factor=F_trial, crossover_rate=CR_trial)
