"""Shared reference data and independent brute-force oracles.

The golden regression rows live here as plain literals. The oracles evaluate
energies through dense matrix algebra and exhaustive enumeration so they share
no code path with the sparse-map implementations they check.
"""

from itertools import product

import numpy as np
import pytest

from annealgap import IsingProblem, QuboProblem

CHAIN_EDGES = ((0, 1), (1, 2), (2, 3), (3, 4))

#: Golden coefficient rows for the delta_b = 0.04 chain instance:
#: original QUBO, its Ising form, the pivot-0 transform, and that transform
#: converted back to QUBO.
ROW_QUBO = {
    "Q": {edge: 6.08 for edge in CHAIN_EDGES},
    "b": (-4.0, -5.96, -4.0, -6.0, -4.0),
}
ROW_ISING = {
    "J": {edge: 1.52 for edge in CHAIN_EDGES},
    "h": (-0.48, 0.06, 1.04, 0.04, -0.48),
}
ROW_ISING_H0 = {
    "J": {
        (0, 1): 0.06,
        (0, 2): 1.04,
        (0, 3): 0.04,
        (0, 4): -0.48,
        (1, 2): 1.52,
        (2, 3): 1.52,
        (3, 4): 1.52,
    },
    "h": (-0.48, 1.52, 0.0, 0.0, 0.0),
}
ROW_QUBO_H0 = {
    "Q": {
        (0, 1): 0.24,
        (0, 2): 4.16,
        (0, 3): 0.16,
        (0, 4): -1.92,
        (1, 2): 6.08,
        (2, 3): 6.08,
        (3, 4): 6.08,
    },
    "b": (-2.28, -0.12, -8.16, -6.16, -2.08),
}

COEFF_TOL = 1e-12


def assert_coefficients(problem, quadratic, linear, tol=COEFF_TOL):
    """Per-coefficient comparison against a reference row (missing keys are 0)."""
    stored = problem.Q if isinstance(problem, QuboProblem) else problem.J
    vector = problem.b if isinstance(problem, QuboProblem) else problem.h
    for key in set(stored) | set(quadratic):
        assert stored.get(key, 0.0) == pytest.approx(
            quadratic.get(key, 0.0), abs=tol
        ), f"quadratic {key}"
    assert len(vector) == len(linear)
    for i, (got, want) in enumerate(zip(vector, linear)):
        assert got == pytest.approx(want, abs=tol), f"linear {i}"


def dense_ising_energy(problem: IsingProblem, sigma) -> float:
    """Oracle energy via a dense quadratic form, independent of the map walk."""
    s = np.asarray(sigma, dtype=float)
    mat = np.zeros((problem.n, problem.n))
    for (i, j), value in problem.J.items():
        mat[i, j] = value
    return float(s @ mat @ s + np.asarray(problem.h) @ s + problem.offset)


def dense_qubo_energy(problem: QuboProblem, q) -> float:
    x = np.asarray(q, dtype=float)
    mat = np.zeros((problem.n, problem.n))
    for (i, j), value in problem.Q.items():
        mat[i, j] = value
    return float(x @ mat @ x + np.asarray(problem.b) @ x + problem.offset)


def enumerate_ising(problem: IsingProblem):
    """All (sigma tuple, oracle energy) pairs, exhaustively."""
    for sigma in product((-1, 1), repeat=problem.n):
        yield sigma, dense_ising_energy(problem, sigma)


def enumerate_qubo(problem: QuboProblem):
    for q in product((0, 1), repeat=problem.n):
        yield q, dense_qubo_energy(problem, q)


def random_ising(rng: np.random.Generator, n: int, density: float = 0.7) -> IsingProblem:
    couplings = {}
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < density:
                couplings[(i, j)] = float(rng.uniform(-2.0, 2.0))
    fields = tuple(float(v) for v in rng.uniform(-2.0, 2.0, size=n))
    return IsingProblem(n=n, J=couplings, h=fields, offset=float(rng.uniform(-3.0, 3.0)))


def random_qubo(rng: np.random.Generator, n: int, density: float = 0.7) -> QuboProblem:
    quadratic = {}
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < density:
                quadratic[(i, j)] = float(rng.uniform(-4.0, 4.0))
    linear = tuple(float(v) for v in rng.uniform(-4.0, 4.0, size=n))
    return QuboProblem(n=n, Q=quadratic, b=linear, offset=float(rng.uniform(-3.0, 3.0)))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)
