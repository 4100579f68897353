"""Instantaneous-spectrum analysis along an annealing schedule.

Provides the full eigendecomposition contract, gap traces on a uniform grid,
minimum-gap localization with golden-section refinement, anti-crossing
detection, the adiabatic-bound numerator, the reciprocal-square time
estimate, and the two-level hyperbola fit near an anti-crossing.

An interior dip in the gap only counts as an anti-crossing when it is
significant: its floor must undercut the smaller endpoint gap of the trace
by a relative margin (default 1%). Schedules whose gap slides down to the
final value can carry real but sub-0.1% wiggles on the way (the two lowest
levels never approach closer than their final separation); the margin keeps
those out of reports while leaving genuine anti-crossings, which undercut
the final gap by factors of 10 to 10^4, untouched.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

import numpy as np

from .operators import (
    STOQUASTIC,
    DenseOperator,
    ScheduleSpec,
    derivative_at,
    hamiltonian_at,
)

#: Two ascending levels closer than this are treated as degenerate.
DEGENERACY_TOL = 1e-12

#: Relative margin by which a dip must undercut the endpoint gap to count
#: as an anti-crossing.
DEFAULT_UNDERCUT = 0.01

_INV_GOLD = (math.sqrt(5.0) - 1.0) / 2.0


class EigensolverError(RuntimeError):
    """Diagonalization did not converge."""


class DegenerateLevelsError(RuntimeError):
    """The two lowest levels coincide where a nondegenerate pair is required."""


class FitWindowError(ValueError):
    """Too few trace points around the requested center for a fit."""


def full_spectrum(op: DenseOperator) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvectors (as columns).

    Contract: ||M - V diag(w) V^T||_max <= 1e-9 ||M||_max and
    ||V^T V - I||_max <= 1e-10.
    """
    try:
        return np.linalg.eigh(op.matrix)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(f"eigendecomposition failed: {exc}") from exc


def _eigenvalues_at(sched: ScheduleSpec, s: float) -> np.ndarray:
    try:
        return np.linalg.eigvalsh(hamiltonian_at(sched, s).matrix)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(f"eigendecomposition failed at s={s}: {exc}") from exc


def _gap_at(sched: ScheduleSpec, s: float) -> float:
    w = _eigenvalues_at(sched, s)
    return float(w[1] - w[0])


@dataclass(frozen=True)
class SpectralTrace:
    """Lowest levels and the E1-E0 gap on an ascending grid of s values."""

    grid: np.ndarray
    levels: np.ndarray
    gap: np.ndarray
    schedule: Optional[ScheduleSpec] = None

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        levels = np.asarray(self.levels, dtype=float)
        gap = np.asarray(self.gap, dtype=float)
        if grid.ndim != 1 or len(grid) < 2:
            raise ValueError("trace grid must hold at least two points")
        if np.any(np.diff(grid) <= 0):
            raise ValueError("trace grid must be strictly ascending")
        if levels.shape[0] != len(grid) or levels.shape[1] < 2:
            raise ValueError("levels must have one row per grid point and >= 2 columns")
        if np.any(np.diff(levels, axis=1) < 0):
            raise ValueError("levels must be ascending at every grid point")
        if np.any(gap < 0):
            raise ValueError("gap must be nonnegative")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "gap", gap)


class MinGapResult(NamedTuple):
    s_star: float
    delta_min: float
    interior: bool


class AntiCrossing(NamedTuple):
    s: float
    gap: float


@dataclass(frozen=True)
class HyperbolaFit:
    """Two-level hyperbola parameters near an anti-crossing.

    ``a`` is the difference and ``b`` the mean of the asymptote slopes;
    ``e_center`` the level mean at the crossing point. ``residual`` is the
    RMS misfit of both branches over the fitted window.
    """

    a: float
    b: float
    e_center: float
    residual: float
    points: int


@dataclass(frozen=True)
class AntiCrossingReport:
    """Minimum-gap summary of one schedule."""

    s_star: float
    delta_min: float
    interior: bool
    epsilon: float
    t_approx: float
    hyperbola: Optional[HyperbolaFit] = None


def gap_trace(
    sched: ScheduleSpec, grid_points: int = 2001, levels: int = 6
) -> SpectralTrace:
    """Diagonalize H(s) on a uniform grid over [0, 1] including both endpoints."""
    if grid_points < 2:
        raise ValueError(f"grid must hold at least 2 points, got {grid_points}")
    keep = max(2, min(levels, 1 << sched.n))
    grid = np.linspace(0.0, 1.0, grid_points)
    table = np.empty((grid_points, keep))
    for idx, s in enumerate(grid):
        table[idx] = _eigenvalues_at(sched, s)[:keep]
    return SpectralTrace(
        grid=grid, levels=table, gap=table[:, 1] - table[:, 0], schedule=sched
    )


def _golden_min(
    fn: Callable[[float], float], lo: float, hi: float, s_tol: float
) -> tuple[float, float]:
    """Golden-section minimum of fn on [lo, hi]; returns the best point evaluated."""
    best_s, best_f = lo, math.inf

    def ev(x: float) -> float:
        nonlocal best_s, best_f
        f = fn(x)
        if f < best_f:
            best_s, best_f = x, f
        return f

    c = hi - _INV_GOLD * (hi - lo)
    d = lo + _INV_GOLD * (hi - lo)
    fc, fd = ev(c), ev(d)
    while hi - lo > s_tol:
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - _INV_GOLD * (hi - lo)
            fc = ev(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _INV_GOLD * (hi - lo)
            fd = ev(d)
    return best_s, best_f


def _strict_interior_minima(gaps: np.ndarray) -> list[int]:
    return [
        k
        for k in range(1, len(gaps) - 1)
        if gaps[k - 1] > gaps[k] < gaps[k + 1]
    ]


def min_gap(
    sched: ScheduleSpec,
    s_tol: float = 1e-6,
    grid_points: int = 2001,
    undercut: float = DEFAULT_UNDERCUT,
    trace: Optional[SpectralTrace] = None,
) -> MinGapResult:
    """Locate the minimum of E1(s) - E0(s).

    Coarse grid scan followed by golden-section refinement of the bracketing
    interval down to an s-error of at most ``s_tol``; the refined value never
    exceeds any scanned gap. ``interior`` is True only when the minimum sits
    away from the schedule ends and undercuts the endpoint gap by more than
    ``undercut`` (a significant anti-crossing); shallow end-of-schedule
    minima are reported with interior=False. Pass a ``trace`` produced from
    the same schedule to reuse its grid scan.
    """
    if s_tol <= 0:
        raise ValueError(f"s_tol must be positive, got {s_tol}")
    if trace is not None and trace.schedule is sched:
        grid, gaps = trace.grid, trace.gap
    else:
        if grid_points < 2:
            raise ValueError(f"grid must hold at least 2 points, got {grid_points}")
        grid = np.linspace(0.0, 1.0, grid_points)
        gaps = np.array([_gap_at(sched, s) for s in grid])
    i = int(np.argmin(gaps))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    s_star, delta = _golden_min(lambda s: _gap_at(sched, s), lo, hi, s_tol)
    if gaps[i] <= delta:
        s_star, delta = float(grid[i]), float(gaps[i])
    significant = delta < (1.0 - undercut) * min(gaps[0], gaps[-1])
    interior = significant and s_tol < s_star < 1.0 - s_tol
    return MinGapResult(float(s_star), float(delta), bool(interior))


def detect_anticrossing(
    trace: SpectralTrace,
    s_tol: float = 1e-6,
    undercut: float = DEFAULT_UNDERCUT,
) -> list[AntiCrossing]:
    """All significant interior local minima of the gap, refined like min_gap.

    A strict interior local minimum of the traced gap qualifies only when its
    refined floor undercuts the smaller endpoint gap by more than ``undercut``;
    an empty list means the gap is monotone, minimized only at an endpoint, or
    dips by less than the margin. Refinement re-evaluates the schedule when
    the trace carries one, and falls back to grid values otherwise.
    """
    gaps, grid = trace.gap, trace.grid
    threshold = (1.0 - undercut) * min(gaps[0], gaps[-1])
    found = []
    for k in _strict_interior_minima(gaps):
        if trace.schedule is not None:
            s, g = _golden_min(
                lambda s: _gap_at(trace.schedule, s), grid[k - 1], grid[k + 1], s_tol
            )
            if gaps[k] <= g:
                s, g = grid[k], gaps[k]
        else:
            s, g = grid[k], gaps[k]
        if g < threshold:
            found.append(AntiCrossing(float(s), float(g)))
    return found


def epsilon(sched: ScheduleSpec, grid_points: int = 2001) -> float:
    """Largest transition element max_s |<E1(s)| dH/ds |E0(s)>| over the grid.

    The grid around the arg-max is refined once at ten times the resolution.
    Raises DegenerateLevelsError when E0 and E1 coincide at an evaluation
    point, where the matrix element is not basis-independent.
    """
    if grid_points < 2:
        raise ValueError(f"grid must hold at least 2 points, got {grid_points}")
    constant_dh = None
    if sched.driver == STOQUASTIC:
        constant_dh = derivative_at(sched, 0.0).matrix

    def element(s: float) -> float:
        w, v = full_spectrum(hamiltonian_at(sched, s))
        if w[1] - w[0] < DEGENERACY_TOL:
            raise DegenerateLevelsError(
                f"E0 and E1 are degenerate at s={s}; transition element undefined"
            )
        dh = constant_dh if constant_dh is not None else derivative_at(sched, s).matrix
        return float(abs(v[:, 1] @ dh @ v[:, 0]))

    grid = np.linspace(0.0, 1.0, grid_points)
    values = np.array([element(s) for s in grid])
    i = int(np.argmax(values))
    best = float(values[i])
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, grid_points - 1)]
    for s in np.linspace(lo, hi, 21):
        best = max(best, element(float(s)))
    return best


def t_approx(delta_min: float) -> float:
    """Order-of-magnitude annealing-time proxy: the reciprocal squared gap."""
    if delta_min <= 0:
        raise ValueError(f"delta_min must be positive, got {delta_min}")
    return delta_min ** -2


def fit_hyperbola(
    trace: SpectralTrace,
    s_star: float,
    delta_min: float,
    window: float = 0.05,
    warn_ratio: float = 0.1,
) -> HyperbolaFit:
    """Least-squares hyperbola through the two lowest levels around s_star.

    Model: E+-(s) = E(s*) + B (s - s*) +- (1/2) sqrt(Dmin^2 + A^2 (s - s*)^2)
    with Dmin held fixed at the supplied minimum gap. The mean of the two
    branches determines (E(s*), B) by linear least squares; the squared
    branch difference determines A^2 by least squares through the origin.
    A residual above ``warn_ratio * delta_min`` triggers a warning rather
    than an exception.
    """
    grid = trace.grid
    sel = np.abs(grid - s_star) <= window
    points = int(np.count_nonzero(sel))
    if points < 5:
        raise FitWindowError(
            f"window +-{window} around s={s_star} holds {points} trace points; "
            "at least 5 are required"
        )
    x = grid[sel] - s_star
    e0 = trace.levels[sel, 0]
    e1 = trace.levels[sel, 1]

    mean = (e0 + e1) / 2.0
    design = np.column_stack([np.ones_like(x), x])
    (e_center, slope_mean), *_ = np.linalg.lstsq(design, mean, rcond=None)

    squared_excess = (e1 - e0) ** 2 - delta_min ** 2
    x2 = x * x
    quartic = float(np.dot(x2, x2))
    a_sq = float(np.dot(x2, squared_excess) / quartic) if quartic > 0 else 0.0
    a_sq = max(a_sq, 0.0)

    half = 0.5 * np.sqrt(delta_min ** 2 + a_sq * x2)
    center_line = e_center + slope_mean * x
    res = np.concatenate([center_line - half - e0, center_line + half - e1])
    residual = float(np.sqrt(np.mean(res ** 2)))
    if residual > warn_ratio * delta_min:
        warnings.warn(
            f"hyperbola fit residual {residual:.3e} exceeds "
            f"{warn_ratio:.0%} of the minimum gap {delta_min:.3e}",
            RuntimeWarning,
            stacklevel=2,
        )
    return HyperbolaFit(
        a=float(math.sqrt(a_sq)),
        b=float(slope_mean),
        e_center=float(e_center),
        residual=residual,
        points=points,
    )


def anticrossing_report(
    sched: ScheduleSpec,
    grid_points: int = 2001,
    s_tol: float = 1e-6,
    levels: int = 6,
    window: float = 0.05,
    undercut: float = DEFAULT_UNDERCUT,
    trace: Optional[SpectralTrace] = None,
) -> tuple[AntiCrossingReport, SpectralTrace]:
    """Minimum gap, adiabatic numerator, time estimate, and hyperbola in one pass."""
    if trace is None or trace.schedule is not sched:
        trace = gap_trace(sched, grid_points, levels)
    located = min_gap(sched, s_tol=s_tol, undercut=undercut, trace=trace)
    eps = epsilon(sched, grid_points=grid_points)
    hyperbola = None
    if located.interior:
        hyperbola = fit_hyperbola(trace, located.s_star, located.delta_min, window)
    report = AntiCrossingReport(
        s_star=located.s_star,
        delta_min=located.delta_min,
        interior=located.interior,
        epsilon=eps,
        t_approx=t_approx(located.delta_min),
        hyperbola=hyperbola,
    )
    return report, trace
