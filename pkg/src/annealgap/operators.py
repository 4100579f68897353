"""Dense real-symmetric operators for annealing schedules.

Operators are built by iterating computational basis indices with bit
operations rather than by Kronecker products, and are exactly symmetric by
construction. Basis convention: bit i of index m is 0 for sigma_i = +1.
Dense storage is capped (default 14 spins, 16384 x 16384) and larger systems
are rejected outright.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Optional

import numpy as np

from .problems import IsingProblem

DEFAULT_SPIN_CAP = 14

STOQUASTIC = "stoquastic"
NONSTOQUASTIC = "nonstoquastic"


def _check_cap(n: int, max_spins: int) -> None:
    if n > max_spins:
        raise ValueError(
            f"dense operators support at most {max_spins} spins, got n={n}"
        )


@dataclass(frozen=True)
class DenseOperator:
    """A real symmetric 2^n x 2^n matrix in energy units."""

    n: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.shape != (1 << self.n, 1 << self.n):
            raise ValueError(
                f"matrix shape {m.shape} does not match n={self.n}"
            )
        if not np.array_equal(m, m.T):
            raise ValueError("operator matrix must be exactly symmetric")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return 1 << self.n


def _sigma_table(n: int) -> np.ndarray:
    """(2^n, n) array of sigma values per basis index: bit 0 -> +1, bit 1 -> -1."""
    m = np.arange(1 << n)
    return 1.0 - 2.0 * ((m[:, None] >> np.arange(n)[None, :]) & 1)


def problem_diagonal(p: IsingProblem) -> np.ndarray:
    """Classical energies of all 2^n assignments, indexed by basis index.

    Terms accumulate in the same order as IsingProblem.energy so the two
    agree bit for bit.
    """
    sigma = _sigma_table(p.n)
    diag = np.full(1 << p.n, p.offset)
    for (i, j), value in p.J.items():
        diag += value * sigma[:, i] * sigma[:, j]
    for i, hi in enumerate(p.h):
        diag += hi * sigma[:, i]
    return diag


def problem_operator(p: IsingProblem, max_spins: int = DEFAULT_SPIN_CAP) -> DenseOperator:
    """Diagonal operator whose entry at basis index m is the energy of assignment m."""
    _check_cap(p.n, max_spins)
    return DenseOperator(p.n, np.diag(problem_diagonal(p)))


def transverse_driver(n: int, max_spins: int = DEFAULT_SPIN_CAP) -> DenseOperator:
    """Sum of single-spin-flip operators: 1 at every Hamming-distance-1 pair."""
    _check_cap(n, max_spins)
    dim = 1 << n
    m = np.zeros((dim, dim))
    rows = np.arange(dim)
    for i in range(n):
        m[rows, rows ^ (1 << i)] = 1.0
    return DenseOperator(n, m)


def antiferromagnetic_driver(
    n: int, normalizer: Optional[float] = None, max_spins: int = DEFAULT_SPIN_CAP
) -> DenseOperator:
    """Squared mean transverse field with positive sign: (1/N) (sum_i X_i)^2.

    Expands to (n/N) I plus 2/N at every Hamming-distance-2 pair, which is the
    two-spin-flip fluctuation term. N defaults to the spin count.
    """
    _check_cap(n, max_spins)
    norm = float(n if normalizer is None else normalizer)
    if norm <= 0:
        raise ValueError(f"normalizer must be positive, got {norm}")
    dim = 1 << n
    m = np.zeros((dim, dim))
    rows = np.arange(dim)
    m[rows, rows] = n / norm
    for i in range(n):
        for j in range(i + 1, n):
            m[rows, rows ^ ((1 << i) | (1 << j))] = 2.0 / norm
    return DenseOperator(n, m)


@dataclass(frozen=True)
class LambdaPath:
    """Mixing path lambda(s) for the non-stoquastic schedule; must end at 1."""

    name: str
    value: Callable[[float], float]
    derivative: Optional[Callable[[float], float]] = None


LINEAR_PATH = LambdaPath("linear", lambda s: s, lambda s: 1.0)

#: Paths selectable by name on the command line.
LAMBDA_PATHS = {LINEAR_PATH.name: LINEAR_PATH}

_FD_STEP = 1e-6


@dataclass(frozen=True)
class ScheduleSpec:
    """A driver choice bound to a problem; defines H(s) on s in [0, 1].

    stoquastic:      H(s) = (1-s) H_B + s H_P
    nonstoquastic:   H(s) = s [lambda(s) H_P + (1-lambda(s)) H_AFF] + (1-s) H_B

    H_B is the transverse driver, H_AFF the antiferromagnetic fluctuation term
    with aggregate normalizer N (defaults to the spin count).
    """

    problem: IsingProblem
    driver: str = STOQUASTIC
    lambda_path: LambdaPath = LINEAR_PATH
    normalizer: Optional[float] = None
    max_spins: int = DEFAULT_SPIN_CAP

    def __post_init__(self):
        if self.driver not in (STOQUASTIC, NONSTOQUASTIC):
            raise ValueError(f"unknown driver {self.driver!r}")
        _check_cap(self.problem.n, self.max_spins)
        if self.driver == NONSTOQUASTIC:
            end = self.lambda_path.value(1.0)
            if abs(end - 1.0) > 1e-12:
                raise ValueError(
                    f"lambda path {self.lambda_path.name!r} must satisfy "
                    f"lambda(1)=1, got {end}"
                )

    @property
    def n(self) -> int:
        return self.problem.n

    @cached_property
    def problem_op(self) -> DenseOperator:
        return problem_operator(self.problem, self.max_spins)

    @cached_property
    def transverse_op(self) -> DenseOperator:
        return transverse_driver(self.problem.n, self.max_spins)

    @cached_property
    def aff_op(self) -> DenseOperator:
        return antiferromagnetic_driver(self.problem.n, self.normalizer, self.max_spins)

    def _lambda_derivative(self, s: float) -> float:
        if self.lambda_path.derivative is not None:
            return self.lambda_path.derivative(s)
        warnings.warn(
            f"lambda path {self.lambda_path.name!r} has no derivative; "
            f"using central difference with step {_FD_STEP}",
            RuntimeWarning,
            stacklevel=3,
        )
        value = self.lambda_path.value
        return (value(s + _FD_STEP) - value(s - _FD_STEP)) / (2.0 * _FD_STEP)


def hamiltonian_at(sched: ScheduleSpec, s: float) -> DenseOperator:
    """Schedule Hamiltonian H(s)."""
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"schedule parameter s={s} outside [0, 1]")
    hp = sched.problem_op.matrix
    hb = sched.transverse_op.matrix
    if sched.driver == STOQUASTIC:
        m = (1.0 - s) * hb + s * hp
    else:
        lam = sched.lambda_path.value(s)
        m = s * (lam * hp + (1.0 - lam) * sched.aff_op.matrix) + (1.0 - s) * hb
    return DenseOperator(sched.n, m)


def derivative_at(sched: ScheduleSpec, s: float) -> DenseOperator:
    """Exact dH/ds of the schedule (product rule through lambda(s))."""
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"schedule parameter s={s} outside [0, 1]")
    hp = sched.problem_op.matrix
    hb = sched.transverse_op.matrix
    if sched.driver == STOQUASTIC:
        m = hp - hb
    else:
        lam = sched.lambda_path.value(s)
        dlam = sched._lambda_derivative(s)
        coeff_p = lam + s * dlam
        coeff_a = 1.0 - lam - s * dlam
        m = coeff_p * hp + coeff_a * sched.aff_op.matrix - hb
    return DenseOperator(sched.n, m)
