"""Exact solvers for coalitional Borda manipulation."""

from .election import (
    Infeasible,
    InputError,
    ManipulationInstance,
    ResourceLimitError,
    SolveOutcome,
    Vote,
    base_scores,
    borda_score,
    capacities,
    verify_manipulation,
)
from .fmm import FmmInstance, export_ilp, solve_fmm, verify_matrix
from .single_peaked import HarmoniousOrder, is_coincident, solve_ubm1sp, solve_ubm2sp
from .ubm import matrix_to_votes, reduce_ubm_to_fmm, solve_ubm
from .wbm import solve_wbm

__version__ = "0.1.0"

__all__ = [
    "FmmInstance",
    "HarmoniousOrder",
    "Infeasible",
    "InputError",
    "ManipulationInstance",
    "ResourceLimitError",
    "SolveOutcome",
    "Vote",
    "base_scores",
    "borda_score",
    "capacities",
    "export_ilp",
    "is_coincident",
    "matrix_to_votes",
    "reduce_ubm_to_fmm",
    "solve_fmm",
    "solve_ubm",
    "solve_ubm1sp",
    "solve_ubm2sp",
    "solve_wbm",
    "verify_manipulation",
    "verify_matrix",
]
