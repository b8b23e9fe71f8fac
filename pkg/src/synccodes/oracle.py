"""Exhaustive enumeration of codes, used as ground truth at small sizes.

No symmetry breaking is applied here on purpose: a code the solver wrongly
prunes away still shows up in the enumeration.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass
from typing import Iterator, Optional

from .core import Code, ContractError
from .solver import MinKResult, MinKStatus, SolveResult, Status
from .verifier import lemma1_bound, reliability


@dataclass(frozen=True)
class OracleBudget:
    max_length: int = 14
    max_enumerations: int = 50_000_000


def count_candidates(d: int, k: int) -> int:
    return math.comb(d + k, k) * 2**k


def enumerate_codes(d: int, k: int) -> Iterator[Code]:
    """All codes with d wildcards and k control bits.

    Positions come in lexicographic combination order; for each placement the
    control values count up in binary, first control bit most significant.
    """
    L = d + k
    for positions in itertools.combinations(range(L), k):
        for value in range(2**k):
            zeros = ones = 0
            for idx, p in enumerate(positions):
                if value >> (k - 1 - idx) & 1:
                    ones |= 1 << p
                else:
                    zeros |= 1 << p
            yield Code.from_masks(L, zeros, ones)


def _check_budget(d: int, k: int, budget: OracleBudget) -> None:
    if d < 1 or k < 0:
        raise ContractError("need d >= 1 and k >= 0")
    if d + k > budget.max_length:
        raise ContractError(f"d+k={d + k} exceeds oracle max_length {budget.max_length}")


def oracle_exists(d: int, k: int, n: int, budget: OracleBudget = OracleBudget()) -> SolveResult:
    """First code (in enumeration order) that is n-reliable, found by brute force.

    A window n longer than the block is allowed and behaves like n = d + k.
    """
    _check_budget(d, k, budget)
    if n < 1:
        raise ContractError(f"window n={n} must be positive")
    start = time.monotonic()
    if count_candidates(d, k) > budget.max_enumerations:
        return SolveResult(Status.TIMEOUT, None, 0, 0.0)
    seen = 0
    for code in enumerate_codes(d, k):
        seen += 1
        rel = reliability(code)
        if rel is not None and rel <= n:
            return SolveResult(Status.SAT, code, seen, time.monotonic() - start)
    return SolveResult(Status.UNSAT, None, seen, time.monotonic() - start)


def oracle_reliabilities(d: int, k: int, budget: OracleBudget = OracleBudget()) -> dict[Code, Optional[int]]:
    """Reliability of every code with the given (d, k); one full enumeration."""
    _check_budget(d, k, budget)
    if count_candidates(d, k) > budget.max_enumerations:
        raise ContractError(f"({d}, {k}) needs {count_candidates(d, k)} enumerations")
    return {code: reliability(code) for code in enumerate_codes(d, k)}


def oracle_min_k(d: int, n: int, budget: OracleBudget = OracleBudget()) -> MinKResult:
    """Smallest k with an n-reliable code, by exhaustion over k = 1 .. 2**n - d."""
    bound = lemma1_bound(d, n)
    runs = []
    last = None
    for k in range(1, bound + 1):
        if d + k > budget.max_length or count_candidates(d, k) > budget.max_enumerations:
            return MinKResult(MinKStatus.UNKNOWN, last_k_decided=last, bound=bound, runs=runs)
        res = oracle_exists(d, k, n, budget)
        runs.append((k, res))
        if res.status is Status.SAT:
            return MinKResult(MinKStatus.FINITE, k, res.code, k, bound, runs)
        if res.status is Status.TIMEOUT:
            return MinKResult(MinKStatus.UNKNOWN, last_k_decided=last, bound=bound, runs=runs)
        last = k
    return MinKResult(MinKStatus.INFINITE, last_k_decided=last, bound=bound, runs=runs)
