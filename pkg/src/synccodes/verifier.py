"""Ground-truth checks: synchronization-code membership, exact reliability, and the window-count bound.

Reliability is computed per gap. For a gap ``g`` the bitmask ``D_g`` has bit
``p`` set when positions ``p`` and ``p+g`` hold differing control bits. The
first mismatch between the windows at phases ``i`` and ``i+g`` is the distance
from ``i`` to the next set bit of ``D_g``, so the worst pair for that gap is the
longest cyclic run of zeros in ``D_g``. Gaps ``g`` and ``L-g`` describe the same
phase pairs, so only ``g <= L // 2`` is scanned.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .core import Code, ContractError, as_code


@dataclass(frozen=True)
class MismatchWitness:
    i: int
    j: int
    column: int


def rot(x: int, g: int, length: int) -> int:
    """Bit p of the result is bit (p+g) mod length of x."""
    g %= length
    if g == 0:
        return x
    full = (1 << length) - 1
    return ((x >> g) | (x << (length - g))) & full


def differing_pairs(zeros: int, ones: int, g: int, length: int) -> int:
    return (zeros & rot(ones, g, length)) | (ones & rot(zeros, g, length))


def longest_zero_run(x: int, length: int) -> int:
    """Longest cyclic run of 0 bits in an L-bit word (L if x is 0)."""
    full = (1 << length) - 1
    x &= full
    if x == 0:
        return length
    # rotate so that bit length-1 is set, then cyclic runs are plain runs
    top = x.bit_length() - 1
    x = rot(x, top + 1, length)
    best = run = 0
    for p in range(length):
        if x >> p & 1:
            run = 0
        else:
            run += 1
            if run > best:
                best = run
    return best


def first_mismatch(code: Code | str, i: int, j: int) -> Optional[MismatchWitness]:
    """First column where rotations i and j carry differing control bits, or None."""
    code = as_code(code)
    L = len(code)
    for m in range(L):
        a, b = code[(i + m) % L], code[(j + m) % L]
        if a.is_control and b.is_control and a is not b:
            return MismatchWitness(i % L, j % L, m)
    return None


def reliability(code: Code | str) -> Optional[int]:
    """Smallest n for which ``code`` is an n-reliable synchronization code, else None."""
    code = as_code(code)
    L = len(code)
    if L == 1:
        return 1
    if code.k < 2:
        return None
    zeros, ones = code.masks
    worst = 0
    for g in range(1, L // 2 + 1):
        diff = differing_pairs(zeros, ones, g, L)
        if diff == 0:
            return None
        worst = max(worst, longest_zero_run(diff, L))
    return worst + 1


def is_sync_code(code: Code | str, n: int) -> bool:
    code = as_code(code)
    if not 1 <= n <= len(code):
        raise ContractError(f"window n={n} outside [1, {len(code)}]")
    rel = reliability(code)
    return rel is not None and rel <= n


def lemma1_bound(d: int, n: int) -> int:
    """Largest k a (d, k, n)-synchronization code can have: 2**n - d."""
    if d < 1 or n < 1:
        raise ContractError("d and n must be positive")
    return 2**n - d
