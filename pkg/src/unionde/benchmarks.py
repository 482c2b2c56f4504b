"""Classic box-constrained test functions, grouped as unimodal, multimodal and shifted.

All functions are vectorised over rows: ``evaluate_batch`` takes an ``(n, D)``
array. Shifted variants evaluate the base function at ``x - shift`` and add a
constant ``bias`` (0 for the built-in suite). Shift vectors of the built-in
shifted functions come from a fixed seed so the suite is identical everywhere;
:func:`load_shift_file` reads user supplied vectors instead.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from .core import Bounds, ConfigurationError, make_rng

SHIFT_SEED = 20240917


def _sphere(Z):
    return np.einsum("nd,nd->n", Z, Z)


def _schwefel_1_2(Z):
    c = np.cumsum(Z, axis=1)
    return np.einsum("nd,nd->n", c, c)


def _rosenbrock(Z):
    a, b = Z[:, :-1], Z[:, 1:]
    return np.sum(100.0 * (b - a * a) ** 2 + (a - 1.0) ** 2, axis=1)


def _rastrigin(Z):
    return 10.0 * Z.shape[1] + np.sum(Z * Z - 10.0 * np.cos(2.0 * np.pi * Z), axis=1)


def _ackley(Z):
    d = Z.shape[1]
    s1 = np.einsum("nd,nd->n", Z, Z) / d
    s2 = np.sum(np.cos(2.0 * np.pi * Z), axis=1) / d
    return -20.0 * np.exp(-0.2 * np.sqrt(s1)) - np.exp(s2) + 20.0 + np.e


def _griewank(Z):
    i = np.sqrt(np.arange(1, Z.shape[1] + 1))
    return np.einsum("nd,nd->n", Z, Z) / 4000.0 - np.prod(np.cos(Z / i), axis=1) + 1.0


# maximiser of x * sin(sqrt(x)) on [0, 500]
_SCHWEFEL_X = brentq(lambda x: np.sin(np.sqrt(x)) + 0.5 * np.sqrt(x) * np.cos(np.sqrt(x)), 400.0, 450.0, xtol=1e-14)
_SCHWEFEL_C = _SCHWEFEL_X * np.sin(np.sqrt(_SCHWEFEL_X))


def _schwefel_2_26(Z):
    return _SCHWEFEL_C * Z.shape[1] - np.sum(Z * np.sin(np.sqrt(np.abs(Z))), axis=1)


@dataclass
class ObjectiveFunction:
    """A named objective on a box, minimised.

    ``optimizer`` is a known global minimiser (``None`` if unknown) and
    ``optimum_value`` the objective there.
    """

    name: str
    dimension: int
    bounds: Bounds
    func: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    optimum_value: float | None = 0.0
    optimizer: np.ndarray | None = field(default=None, repr=False)
    shift: np.ndarray | None = field(default=None, repr=False)
    bias: float = 0.0
    group: str = "unimodal"

    def evaluate_batch(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.dimension:
            raise ValueError(f"{self.name} expects rows of length {self.dimension}, got shape {X.shape}")
        Z = X - self.shift if self.shift is not None else X
        return self.func(Z) + self.bias

    def __call__(self, x) -> float:
        return float(self.evaluate_batch(np.asarray(x, dtype=float)[None, :])[0])

    evaluate = __call__

    def error(self, value: float) -> float:
        """Distance above the known optimum (``value`` itself when unknown).

        Floored at zero: near the optimum, rounding in functions with a large
        constant offset (schwefel_2_26) can land a hair below ``optimum_value``.
        """
        return value if self.optimum_value is None else max(value - self.optimum_value, 0.0)


# name -> (function, box half-width or (low, high), optimiser coordinate, group)
_BASE = {
    "sphere": (_sphere, (-100.0, 100.0), 0.0, "unimodal"),
    "schwefel_1_2": (_schwefel_1_2, (-100.0, 100.0), 0.0, "unimodal"),
    "rosenbrock": (_rosenbrock, (-30.0, 30.0), 1.0, "unimodal"),
    "rastrigin": (_rastrigin, (-5.12, 5.12), 0.0, "multimodal"),
    "ackley": (_ackley, (-32.0, 32.0), 0.0, "multimodal"),
    "griewank": (_griewank, (-600.0, 600.0), 0.0, "multimodal"),
    "schwefel_2_26": (_schwefel_2_26, (-500.0, 500.0), _SCHWEFEL_X, "multimodal"),
}

_SHIFTED = ("sphere", "rastrigin", "ackley")

FUNCTION_NAMES = tuple(_BASE) + tuple(f"shifted_{b}" for b in _SHIFTED)


def default_shift(base: str, dim: int) -> np.ndarray:
    """Seed-fixed shift inside the central 80% of ``base``'s box."""
    low, high = _BASE[base][1]
    rng = make_rng(SHIFT_SEED + FUNCTION_NAMES.index(base))
    centre, half = 0.5 * (low + high), 0.4 * (high - low)
    return centre + half * (2.0 * rng.random(dim) - 1.0)


def make_function(
    name: str, dim: int = 30, shift=None, bias: float = 0.0
) -> ObjectiveFunction:
    """Build a suite function by identifier.

    ``shift`` overrides the built-in shift of a ``shifted_*`` function, or turns
    a plain function into a shifted one.
    """
    if dim < 1:
        raise ConfigurationError(f"dimension must be positive, got {dim}")
    base = name[len("shifted_"):] if name.startswith("shifted_") else name
    if base not in _BASE or (name != base and base not in _SHIFTED and shift is None):
        raise ConfigurationError(
            f"unknown function {name!r}; valid identifiers: {', '.join(FUNCTION_NAMES)}"
        )
    func, (low, high), x_opt, group = _BASE[base]
    if base == "rosenbrock" and dim < 2:
        raise ConfigurationError("rosenbrock needs at least two dimensions")
    bounds = Bounds.uniform(low, high, dim)
    optimizer = np.full(dim, x_opt)
    if name != base and shift is None:
        shift = default_shift(base, dim)
    if shift is not None:
        shift = np.asarray(shift, dtype=float)
        if shift.shape != (dim,):
            raise ConfigurationError(f"shift vector must have {dim} entries, got {shift.shape}")
        optimizer = optimizer + shift
        if not bounds.contains(optimizer):
            raise ConfigurationError(f"shifted optimiser of {name} leaves its bounds")
        name = name if name != base else f"shifted_{base}"
        group = "shifted"
    return ObjectiveFunction(
        name=name,
        dimension=dim,
        bounds=bounds,
        func=func,
        optimum_value=bias,
        optimizer=optimizer,
        shift=shift,
        bias=bias,
        group=group,
    )


def suite(dim: int = 30) -> list[ObjectiveFunction]:
    """The ten-function analogue suite in a fixed order."""
    return [make_function(n, dim) for n in FUNCTION_NAMES]


def load_shift_file(path, D: int) -> np.ndarray:
    """Read the first ``D`` whitespace-separated numbers of ``path``."""
    path = Path(path)
    try:
        text = path.read_text()
    except FileNotFoundError:
        raise FileNotFoundError(f"shift file not found: {path}") from None
    tokens = text.split()
    if len(tokens) < D:
        raise ValueError(f"shift file {path} holds {len(tokens)} values, need {D}")
    try:
        values = np.array([float(t) for t in tokens[:D]])
    except ValueError as exc:
        raise ValueError(f"cannot parse shift file {path}: {exc}") from None
    if not np.all(np.isfinite(values)):
        raise ValueError(f"shift file {path} contains non-finite values")
    return values
