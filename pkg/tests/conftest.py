import numpy as np
import pytest

from unionde.core import Population, make_rng

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return make_rng(1)


def make_population(positions, fitness=None):
    X = np.asarray(positions, dtype=float)
    n = X.shape[0]
    if fitness is None:
        fitness = np.einsum("nd,nd->n", X, X)
    return Population(
        positions=X.copy(),
        fitness=np.asarray(fitness, dtype=float).copy(),
        scale_factor=np.full(n, 0.5),
        crossover_rate=np.full(n, 0.9),
    )


@pytest.fixture
def random_population():
    def build(n=50, d=30, seed=7):
        g = make_rng(seed)
        return make_population(g.uniform(-5, 5, size=(n, d)))

    return build
