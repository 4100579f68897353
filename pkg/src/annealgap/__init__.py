"""Spectral-gap analysis of quantum annealing schedules for Ising/QUBO problems."""

from .eltip import back_map, compose_swap, swap_labels, transform
from .operators import (
    DEFAULT_SPIN_CAP,
    LAMBDA_PATHS,
    LINEAR_PATH,
    NONSTOQUASTIC,
    STOQUASTIC,
    DenseOperator,
    LambdaPath,
    ScheduleSpec,
    antiferromagnetic_driver,
    derivative_at,
    hamiltonian_at,
    problem_diagonal,
    problem_operator,
    transverse_driver,
)
from .overlaps import FinalBasis, OverlapTrace, final_basis, overlap_trace
from .problems import (
    IsingProblem,
    MisChainSpec,
    ProblemFormatError,
    QuboProblem,
    SpinAssignment,
    ising_to_qubo,
    load_problem,
    mis_chain,
    qubo_to_ising,
    save_problem,
)
from .spectral import (
    AntiCrossing,
    AntiCrossingReport,
    DegenerateLevelsError,
    EigensolverError,
    FitWindowError,
    HyperbolaFit,
    MinGapResult,
    SpectralTrace,
    anticrossing_report,
    detect_anticrossing,
    epsilon,
    fit_hyperbola,
    full_spectrum,
    gap_trace,
    min_gap,
    t_approx,
)

__all__ = [
    "DEFAULT_SPIN_CAP",
    "LAMBDA_PATHS",
    "LINEAR_PATH",
    "NONSTOQUASTIC",
    "STOQUASTIC",
    "AntiCrossing",
    "AntiCrossingReport",
    "DegenerateLevelsError",
    "DenseOperator",
    "EigensolverError",
    "FinalBasis",
    "FitWindowError",
    "HyperbolaFit",
    "IsingProblem",
    "LambdaPath",
    "MinGapResult",
    "MisChainSpec",
    "OverlapTrace",
    "ProblemFormatError",
    "QuboProblem",
    "ScheduleSpec",
    "SpectralTrace",
    "SpinAssignment",
    "antiferromagnetic_driver",
    "anticrossing_report",
    "back_map",
    "compose_swap",
    "derivative_at",
    "detect_anticrossing",
    "epsilon",
    "final_basis",
    "fit_hyperbola",
    "full_spectrum",
    "gap_trace",
    "hamiltonian_at",
    "ising_to_qubo",
    "load_problem",
    "min_gap",
    "mis_chain",
    "overlap_trace",
    "problem_diagonal",
    "problem_operator",
    "qubo_to_ising",
    "save_problem",
    "swap_labels",
    "t_approx",
    "transform",
    "transverse_driver",
]

__version__ = "0.1.0"
