"""Native decision procedure for (d, k, n)-synchronization codes and the min-k sweep.

Each position p of the code has a domain, a subset of {0, 1, _}, held as three
bitmasks (``can0``, ``can1``, ``canw``). Search is depth-first over cell
domains with propagation to a fixpoint after every decision:

* cardinality: exactly k control bits, d wildcards; with symmetry breaking at
  most k // 2 of the control bits are ones;
* pair coverage: every phase pair (i, i+g) needs a position p in the window
  i..i+n-1 such that p and p+g hold differing control bits. A pair with no
  possible candidate fails the node, a pair with exactly one is forced;
* window counting: a window with w wildcards matches 2**w of the 2**n bit
  strings and windows of distinct phases may not share one, so the sum of
  2**w over all phases is at most 2**n.

Branching picks the open pair with the fewest candidates (ties: lowest
(i, j)), then the first undecided cell of its lowest candidate.
"""

from __future__ import annotations

import enum
import logging
import threading
import time
from dataclasses import dataclass, field, replace
from typing import Optional

from .core import Code, ContractError, Params
from .verifier import is_sync_code, lemma1_bound, rot

log = logging.getLogger(__name__)


class Status(enum.Enum):
    SAT = "sat"
    UNSAT = "unsat"
    TIMEOUT = "timeout"


@dataclass
class SolverOptions:
    timeout: Optional[float] = None
    symmetry: bool = True
    node_limit: Optional[int] = None
    seed: Optional[int] = None  # reserved, search is deterministic
    counting_bound: bool = True
    cancel: Optional[threading.Event] = None


@dataclass(frozen=True)
class SolveResult:
    status: Status
    code: Optional[Code] = None
    nodes: int = 0
    elapsed: float = 0.0

    @property
    def sat(self) -> bool:
        return self.status is Status.SAT


class MinKStatus(enum.Enum):
    FINITE = "finite"
    INFINITE = "infinite"
    UNKNOWN = "unknown"


@dataclass
class MinKResult:
    status: MinKStatus
    k: Optional[int] = None
    code: Optional[Code] = None
    last_k_decided: Optional[int] = None
    bound: Optional[int] = None
    runs: list = field(default_factory=list)  # (k, SolveResult) per instance tried

    def __str__(self) -> str:
        if self.status is MinKStatus.FINITE:
            return str(self.k)
        if self.status is MinKStatus.INFINITE:
            return "INF"
        return ""


@dataclass(frozen=True)
class SearchModel:
    """Root domains of one decision instance."""

    d: int
    k: int
    n: int
    can0: int
    can1: int
    canw: int
    max_ones: Optional[int] = None

    @classmethod
    def initial(cls, d: int, k: int, n: int) -> "SearchModel":
        full = (1 << (d + k)) - 1
        return cls(d, k, n, full, full, full)


def apply_symmetry_breaking(model: SearchModel) -> SearchModel:
    """Fix positions 0 and 1 to control bits 0 and 1, and allow at most k // 2 ones."""
    if model.k < 2:
        raise ContractError("symmetry breaking needs k >= 2")
    return replace(
        model,
        can0=(model.can0 & ~0b10) | 0b01,
        can1=(model.can1 & ~0b01) | 0b10,
        canw=model.canw & ~0b11,
        max_ones=model.k // 2,
    )


class _Stop(Exception):
    pass


def _window_counts(x: int, n: int, L: int) -> tuple[int, int]:
    """Bitmasks (one, two): bit i set when window i..i+n-1 holds >= 1 (>= 2) set bits of x."""
    one, two, length = x, 0, 1
    acc_one = acc_two = 0
    acc_len = 0
    m = n
    while True:
        if m & 1:
            if acc_len == 0:
                acc_one, acc_two = one, two
            else:
                r1 = rot(one, acc_len, L)
                r2 = rot(two, acc_len, L)
                acc_two = acc_two | r2 | (acc_one & r1)
                acc_one = acc_one | r1
            acc_len += length
        m >>= 1
        if not m:
            return acc_one, acc_two
        r1 = rot(one, length, L)
        r2 = rot(two, length, L)
        two = two | r2 | (one & r1)
        one = one | r1
        length *= 2


class _Search:
    def __init__(self, model: SearchModel, opts: SolverOptions):
        self.d, self.k, self.n = model.d, model.k, model.n
        self.L = L = model.d + model.k
        self.full = (1 << L) - 1
        self.max_ones = model.max_ones
        self.counting = opts.counting_bound
        self.root = (model.can0, model.can1, model.canw)
        self.windows = []
        for i in range(L):
            w = 0
            for a in range(self.n):
                w |= 1 << ((i + a) % L)
            self.windows.append(w)
        self.gaps = list(range(1, L // 2 + 1))
        # canonical (i, j) per (g, i) for tie-breaking
        self.pair_key = {}
        for g in self.gaps:
            for i in range(L):
                j = i + g
                self.pair_key[g, i] = (i, j) if j < L else (j - L, i)
        # windows containing position p start at p-n+1 .. p
        self.starts_covering = [
            [(p - a) % L for a in range(self.n)] for p in range(L)
        ]
        self.nodes = 0
        self.node_limit = opts.node_limit
        self.deadline = None if opts.timeout is None else time.monotonic() + opts.timeout
        self.cancel = opts.cancel

    # -- propagation -----------------------------------------------------

    def _cardinality(self, c0, c1, cw):
        full, k, d = self.full, self.k, self.d
        if (c0 | c1 | cw) != full:
            return None
        ctrl = full & ~cw
        wild = cw & ~(c0 | c1)
        nctrl = ctrl.bit_count()
        nwild = wild.bit_count()
        if nctrl > k or nwild > d:
            return None
        if (c0 | c1).bit_count() < k or cw.bit_count() < d:
            return None
        if nctrl == k:
            c0 &= ctrl
            c1 &= ctrl
        if nwild == d:
            cw &= wild
        if self.max_ones is not None:
            ones = c1 & ~c0 & ~cw
            nones = ones.bit_count()
            if nones > self.max_ones:
                return None
            if nones == self.max_ones:
                c1 &= ones
            if c0.bit_count() < k - self.max_ones:
                return None
        if (c0 | c1 | cw) != full:
            return None
        return c0, c1, cw

    def _counting(self, c0, c1, cw):
        wild = cw & ~(c0 | c1)
        L, n = self.L, self.n
        budget = 1 << n
        weights = [1 << (wild & w).bit_count() for w in self.windows]
        total = sum(weights)
        if total > budget:
            return None
        left = self.d - wild.bit_count()
        if left <= 0:
            return c0, c1, cw
        undecided = cw & (c0 | c1)
        deltas = []
        for p in range(L):
            if undecided >> p & 1:
                deltas.append((sum(weights[i] for i in self.starts_covering[p]), p))
        deltas.sort()
        if total + sum(dl for dl, _ in deltas[:left]) > budget:
            return None
        base = sum(dl for dl, _ in deltas[: left - 1])
        edge = deltas[left - 1][0]
        for rank, (dl, p) in enumerate(deltas):
            others = base - dl + edge if rank < left - 1 else base
            if total + dl + others > budget:
                cw &= ~(1 << p)
        return c0, c1, cw

    def propagate(self, c0, c1, cw):
        L, n, full = self.L, self.n, self.full
        while True:
            state = self._cardinality(c0, c1, cw)
            if state is None:
                return None
            if self.counting:
                state = self._counting(*state)
                if state is None:
                    return None
            c0, c1, cw = state
            before = state
            is0 = c0 & ~c1 & ~cw
            is1 = c1 & ~c0 & ~cw
            for g in self.gaps:
                cand = (c0 & rot(c1, g, L)) | (c1 & rot(c0, g, L))
                cov = (is0 & rot(is1, g, L)) | (is1 & rot(is0, g, L))
                covered, _ = _window_counts(cov, n, L)
                opened = full & ~covered
                if not opened:
                    continue
                one, two = _window_counts(cand, n, L)
                if opened & ~one:
                    return None
                units = opened & ~two
                while units:
                    low = units & -units
                    i = low.bit_length() - 1
                    units ^= low
                    m = cand & self.windows[i]
                    p = m.bit_length() - 1
                    q = (p + g) % L
                    bp, bq = 1 << p, 1 << q
                    p0, p1 = c0 & bp, c1 & bp
                    q0, q1 = c0 & bq, c1 & bq
                    c0 &= ~bp & ~bq
                    c1 &= ~bp & ~bq
                    if p0 and q1:
                        c0 |= bp
                        c1 |= bq
                    if p1 and q0:
                        c1 |= bp
                        c0 |= bq
                    cw &= ~bp & ~bq
                if (c0, c1, cw) != before:
                    # cell changes invalidate candidate masks of later gaps
                    break
            else:
                return c0, c1, cw
            if (c0 | c1 | cw) != full:
                return None
            is0 = c0 & ~c1 & ~cw

    # -- branching ---------------------------------------------------------

    def choose(self, c0, c1, cw):
        """Cell to branch on, or None when every cell is decided."""
        L, n, full = self.L, self.n, self.full
        is0 = c0 & ~c1 & ~cw
        is1 = c1 & ~c0 & ~cw
        best = None
        for g in self.gaps:
            cand = (c0 & rot(c1, g, L)) | (c1 & rot(c0, g, L))
            cov = (is0 & rot(is1, g, L)) | (is1 & rot(is0, g, L))
            covered, _ = _window_counts(cov, n, L)
            opened = full & ~covered
            while opened:
                low = opened & -opened
                i = low.bit_length() - 1
                opened ^= low
                m = cand & self.windows[i]
                score = (m.bit_count(), self.pair_key[g, i])
                if best is None or score < best[0]:
                    best = (score, g, m)
        if best is not None:
            _, g, m = best
            decided = is0 | is1 | (cw & ~(c0 | c1))
            # candidates in position order, starting from the window's first cell
            for p in sorted(range(L), key=lambda p: p if m >> p & 1 else L + p):
                if not m >> p & 1:
                    break
                for cell in (p, (p + g) % L):
                    if not decided >> cell & 1:
                        return cell
        undecided = full & ~(is0 | is1 | (cw & ~(c0 | c1)))
        if not undecided:
            return None
        return (undecided & -undecided).bit_length() - 1

    def _tick(self):
        self.nodes += 1
        if self.node_limit is not None and self.nodes > self.node_limit:
            raise _Stop
        if self.nodes & 255 == 0:
            if self.deadline is not None and time.monotonic() > self.deadline:
                raise _Stop
            if self.cancel is not None and self.cancel.is_set():
                raise _Stop

    def dfs(self, c0, c1, cw):
        self._tick()
        state = self.propagate(c0, c1, cw)
        if state is None:
            return None
        c0, c1, cw = state
        cell = self.choose(c0, c1, cw)
        if cell is None:
            return state
        bit = 1 << cell
        for mask_index in (0, 1, 2):
            masks = [c0, c1, cw]
            if not masks[mask_index] & bit:
                continue
            child = [x & ~bit for x in masks]
            child[mask_index] |= bit
            found = self.dfs(*child)
            if found is not None:
                return found
        return None


def _check_params(d: int, k: int, n: int) -> Params:
    return Params(d, k, n)


def find_code(d: int, k: int, n: int, opts: Optional[SolverOptions] = None) -> SolveResult:
    """Decide whether a (d, k, n)-synchronization code exists; return one if so."""
    opts = opts or SolverOptions()
    params = _check_params(d, k, n)
    L = params.length
    start = time.monotonic()
    if L == 1:
        code = Code.parse("_")
        return SolveResult(Status.SAT, code, 0, time.monotonic() - start)
    if k < 2:
        return SolveResult(Status.UNSAT, None, 0, time.monotonic() - start)

    model = SearchModel.initial(d, k, n)
    if opts.symmetry:
        model = apply_symmetry_breaking(model)
    search = _Search(model, opts)
    try:
        state = search.dfs(*search.root)
    except _Stop:
        return SolveResult(Status.TIMEOUT, None, search.nodes, time.monotonic() - start)
    elapsed = time.monotonic() - start
    if state is None:
        return SolveResult(Status.UNSAT, None, search.nodes, elapsed)
    c0, c1, cw = state
    code = Code.from_masks(L, c0 & ~c1 & ~cw, c1 & ~c0 & ~cw)
    # soundness gate: never hand out a code that fails the definition
    if not (code.d == d and code.k == k and is_sync_code(code, n)):
        raise AssertionError(f"solver produced invalid code {code} for {(d, k, n)}")
    assert k <= lemma1_bound(d, n)
    return SolveResult(Status.SAT, code, search.nodes, elapsed)


def min_k(d: int, n: int, opts: Optional[SolverOptions] = None) -> MinKResult:
    """Smallest k admitting a (d, k, n)-synchronization code.

    Sweeps k = 1, 2, ... solving each instance independently. When every
    k up to 2**n - d is refuted, no code exists for any k.
    """
    opts = opts or SolverOptions()
    if d < 1 or n < 1:
        raise ContractError("d and n must be positive")
    bound = lemma1_bound(d, n)
    runs = []
    last = None
    k = 1
    while k <= bound:
        # a window longer than the block only repeats comparisons
        res = find_code(d, k, min(n, d + k), opts)
        runs.append((k, res))
        log.debug("d=%d n=%d k=%d -> %s (%d nodes)", d, n, k, res.status.value, res.nodes)
        if res.status is Status.SAT:
            return MinKResult(MinKStatus.FINITE, k, res.code, k, bound, runs)
        if res.status is Status.TIMEOUT:
            return MinKResult(MinKStatus.UNKNOWN, last_k_decided=last, bound=bound, runs=runs)
        last = k
        k += 1
    return MinKResult(MinKStatus.INFINITE, last_k_decided=last, bound=bound, runs=runs)
