"""Search, verification and application of (d, k, n)-synchronization codes."""

from .core import Code, ContractError, ModIndex, Params, Symbol, complement, matches, matches_seq, reverse, rotate
from .verifier import MismatchWitness, first_mismatch, is_sync_code, lemma1_bound, reliability
from .solver import (
    MinKResult,
    MinKStatus,
    SolveResult,
    SolverOptions,
    Status,
    apply_symmetry_breaking,
    find_code,
    min_k,
)

__all__ = [
    "Code", "ContractError", "ModIndex", "Params", "Symbol",
    "complement", "matches", "matches_seq", "reverse", "rotate",
    "MismatchWitness", "first_mismatch", "is_sync_code", "lemma1_bound", "reliability",
    "MinKResult", "MinKStatus", "SolveResult", "SolverOptions", "Status",
    "apply_symmetry_breaking", "find_code", "min_k",
]
