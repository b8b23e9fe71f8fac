"""Pseudo-Boolean model of the code search, emitted as OPB or CNF, and solution import.

Variables per position i of a length-L code:

    K_i   i is a control bit
    V_i   value of the control bit at i (forced 0 on data positions)
    Y_i^g i and i+g (mod L) are control bits with different values, 1 <= g < L

Numbering is fixed: K_i -> 1+i, V_i -> 1+L+i, Y_i^g -> 1+2L+i*(L-1)+(g-1).
CNF auxiliaries (sequential-counter registers) follow. The numbering is
written into a comment legend so a solver output can be mapped back without
knowing how the file was produced.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .core import Code, ContractError, Params, Symbol
from .verifier import is_sync_code


class SolutionError(ValueError):
    """An external solution could not be turned into a verified code."""


class ParseError(SolutionError):
    pass


class CardinalityError(SolutionError):
    pass


class VerificationError(SolutionError):
    pass


@dataclass
class VariableMap:
    d: int
    k: int
    n: int
    symmetry: bool = False
    num_aux: int = 0

    @property
    def length(self) -> int:
        return self.d + self.k

    def K(self, i: int) -> int:
        return 1 + i

    def V(self, i: int) -> int:
        return 1 + self.length + i

    def Y(self, i: int, g: int) -> int:
        L = self.length
        if not 1 <= g < L:
            raise ContractError(f"gap {g} outside [1, {L})")
        return 1 + 2 * L + i * (L - 1) + (g - 1)

    @property
    def num_model_vars(self) -> int:
        L = self.length
        return 2 * L + L * (L - 1)

    @property
    def num_vars(self) -> int:
        return self.num_model_vars + self.num_aux

    def name(self, var: int) -> str:
        L = self.length
        if 1 <= var <= L:
            return f"K_{var - 1}"
        if var <= 2 * L:
            return f"V_{var - 1 - L}"
        if var <= self.num_model_vars:
            i, g = divmod(var - 1 - 2 * L, L - 1)
            return f"Y_{i}^{g + 1}"
        return f"aux_{var - self.num_model_vars}"

    def legend(self, prefix: str) -> list[str]:
        L = self.length
        lines = [
            f"{prefix} synccode d={self.d} k={self.k} n={self.n} symmetry={int(self.symmetry)}",
            f"{prefix} map K {self.K(0)} {self.K(L - 1)}",
            f"{prefix} map V {self.V(0)} {self.V(L - 1)}",
        ]
        if L > 1:
            lines.append(f"{prefix} map Y {self.Y(0, 1)} {self.Y(L - 1, L - 1)} row-major (i, g)")
        if self.num_aux:
            lines.append(f"{prefix} map aux {self.num_model_vars + 1} {self.num_vars}")
        return lines

    @classmethod
    def from_legend(cls, text: str) -> "VariableMap":
        m = re.search(r"synccode d=(\d+) k=(\d+) n=(\d+) symmetry=([01])", text)
        if not m:
            raise ParseError("no synccode legend in document")
        vm = cls(int(m[1]), int(m[2]), int(m[3]), m[4] == "1")
        aux = re.search(r"map aux (\d+) (\d+)", text)
        if aux:
            vm.num_aux = int(aux[2]) - int(aux[1]) + 1
        for tag, first, last in re.findall(r"map ([KVY]) (\d+) (\d+)", text):
            top = vm.length - 1
            if tag == "Y" and not top:
                raise ParseError("legend maps Y variables for a single-symbol code")
            want = {
                "K": lambda: (vm.K(0), vm.K(top)),
                "V": lambda: (vm.V(0), vm.V(top)),
                "Y": lambda: (vm.Y(0, 1), vm.Y(top, top)),
            }[tag]()
            if (int(first), int(last)) != want:
                raise ParseError(f"legend for {tag} does not match the fixed numbering")
        return vm


@dataclass
class PbAssignment:
    K: list[int]
    V: list[int]
    Y: dict[tuple[int, int], int] = field(default_factory=dict)

    @classmethod
    def from_code(cls, code: Code) -> "PbAssignment":
        """Code's K and V, with every Y_i^g set to 1 whenever the pair allows it."""
        L = len(code)
        K = [int(s.is_control) for s in code]
        V = [int(s.value == "1") for s in code]
        Y = {}
        for i in range(L):
            for g in range(1, L):
                j = (i + g) % L
                Y[i, g] = int(K[i] and K[j] and V[i] != V[j])
        return cls(K, V, Y)

    def code(self) -> Code:
        return Code(tuple(
            (Symbol.ONE if v else Symbol.ZERO) if kk else Symbol.WILD
            for kk, v in zip(self.K, self.V)
        ))

    def violations(self, d: int, k: int, n: int, symmetry: bool = False) -> list[str]:
        """Names of the pseudo-Boolean constraints this assignment breaks."""
        L = d + k
        K, V, Y = self.K, self.V, self.Y
        bad = []
        if sum(K) != k:
            bad.append("sum K = k")
        for i in range(L):
            if K[i] < V[i]:
                bad.append(f"K_{i} >= V_{i}")
            for g in range(1, L):
                j = (i + g) % L
                y = Y.get((i, g), 0)
                if y > K[i] or y > K[j] or (1 - y) + V[i] + V[j] < 1 \
                        or (1 - y) + (1 - V[i]) + (1 - V[j]) < 1:
                    bad.append(f"Y_{i}^{g} implication")
        for i in range(L):
            for j in range(i + 1, L):
                if not any(Y.get(((i + a) % L, j - i), 0) for a in range(n)):
                    bad.append(f"cover ({i},{j})")
        if symmetry:
            if not (K[0] == K[1] == 1 and V[0] == 0 and V[1] == 1):
                bad.append("fixed 01 prefix")
            if sum(V) > k // 2:
                bad.append("sum V <= k/2")
        return bad


def _params(d: int, k: int, n: int) -> Params:
    return Params(d, k, n)


def _constraints(vm: VariableMap) -> Iterable[tuple[list[tuple[int, int]], str, int]]:
    """Model constraints as (terms, relation, rhs) with terms (coefficient, var)."""
    L, k, n = vm.length, vm.k, vm.n
    yield [(1, vm.K(i)) for i in range(L)], "=", k
    for i in range(L):
        for g in range(1, L):
            j = (i + g) % L
            y = vm.Y(i, g)
            yield [(-1, y), (1, vm.K(i))], ">=", 0
            yield [(-1, y), (1, vm.K(j))], ">=", 0
            yield [(-1, y), (1, vm.V(i)), (1, vm.V(j))], ">=", 0
            yield [(-1, y), (-1, vm.V(i)), (-1, vm.V(j))], ">=", -2
    for i in range(L):
        for j in range(i + 1, L):
            yield [(1, vm.Y((i + a) % L, j - i)) for a in range(n)], ">=", 1
    for i in range(L):
        yield [(1, vm.K(i)), (-1, vm.V(i))], ">=", 0
    if vm.symmetry:
        yield [(1, vm.K(0))], ">=", 1
        yield [(1, vm.K(1))], ">=", 1
        yield [(-1, vm.V(0))], ">=", 0
        yield [(1, vm.V(1))], ">=", 1
        yield [(-1, vm.V(i)) for i in range(L)], ">=", -(k // 2)


def expected_counts(d: int, k: int, n: int, symmetry: bool) -> tuple[int, int]:
    """(variables, constraints) of the pseudo-Boolean model."""
    L = d + k
    pairs = L * (L - 1)
    cons = 1 + 4 * pairs + pairs // 2 + L + (5 if symmetry else 0)
    return 2 * L + pairs, cons


def emit_opb(d: int, k: int, n: int, symmetry: bool = True) -> str:
    _params(d, k, n)
    vm = VariableMap(d, k, n, symmetry)
    cons = list(_constraints(vm))
    lines = [f"* #variable= {vm.num_vars} #constraint= {len(cons)}"]
    lines += vm.legend("*")
    for terms, rel, rhs in cons:
        body = " ".join(f"{c:+d} x{v}" for c, v in terms)
        lines.append(f"{body} {rel} {rhs} ;")
    return "\n".join(lines) + "\n"


class _Cnf:
    def __init__(self, vm: VariableMap):
        self.vm = vm
        self.next_var = vm.num_model_vars + 1
        self.clauses: list[list[int]] = []

    def fresh(self) -> int:
        v = self.next_var
        self.next_var += 1
        return v

    def at_most(self, lits: list[int], bound: int) -> None:
        """Sequential counter: at most ``bound`` of ``lits`` are true."""
        N = len(lits)
        if bound >= N:
            return
        if bound <= 0:
            self.clauses.extend([-x] for x in lits)
            return
        # s[i][j]: at least j+1 of lits[0..i] are true
        s = [[self.fresh() for _ in range(bound)] for _ in range(N - 1)]
        self.clauses.append([-lits[0], s[0][0]])
        for j in range(1, bound):
            self.clauses.append([-s[0][j]])
        for i in range(1, N - 1):
            x = lits[i]
            self.clauses.append([-x, s[i][0]])
            self.clauses.append([-s[i - 1][0], s[i][0]])
            for j in range(1, bound):
                self.clauses.append([-x, -s[i - 1][j - 1], s[i][j]])
                self.clauses.append([-s[i - 1][j], s[i][j]])
            self.clauses.append([-x, -s[i - 1][bound - 1]])
        self.clauses.append([-lits[N - 1], -s[N - 2][bound - 1]])

    def at_least(self, lits: list[int], bound: int) -> None:
        self.at_most([-x for x in lits], len(lits) - bound)


def emit_cnf(d: int, k: int, n: int, symmetry: bool = True) -> str:
    _params(d, k, n)
    vm = VariableMap(d, k, n, symmetry)
    L = vm.length
    cnf = _Cnf(vm)
    Ks = [vm.K(i) for i in range(L)]
    Vs = [vm.V(i) for i in range(L)]
    cnf.at_most(Ks, k)
    cnf.at_least(Ks, k)
    for i in range(L):
        for g in range(1, L):
            j = (i + g) % L
            y = vm.Y(i, g)
            cnf.clauses += [
                [-y, vm.K(i)],
                [-y, vm.K(j)],
                [-y, vm.V(i), vm.V(j)],
                [-y, -vm.V(i), -vm.V(j)],
            ]
    for i in range(L):
        for j in range(i + 1, L):
            cnf.clauses.append([vm.Y((i + a) % L, j - i) for a in range(n)])
    for i in range(L):
        cnf.clauses.append([vm.K(i), -vm.V(i)])
    if symmetry:
        cnf.clauses += [[vm.K(0)], [vm.K(1)], [-vm.V(0)], [vm.V(1)]]
        cnf.at_most(Vs, k // 2)
    vm.num_aux = cnf.next_var - 1 - vm.num_model_vars
    lines = vm.legend("c")
    lines.append(f"p cnf {vm.num_vars} {len(cnf.clauses)}")
    lines += [" ".join(map(str, c)) + " 0" for c in cnf.clauses]
    return "\n".join(lines) + "\n"


_LIT = re.compile(r"^(-?)(x?)(\d+)$")


@dataclass
class SolverOutput:
    values: dict[int, bool]
    named: bool  # OPB style "x12" literals
    terminated: bool  # DIMACS style trailing 0 seen


def parse_values(document: str) -> SolverOutput:
    """Variable values from ``v`` lines (DIMACS ``v 1 -2 0`` or OPB ``v x1 -x2``)."""
    values: dict[int, bool] = {}
    named = terminated = False
    for raw in document.splitlines():
        line = raw.strip()
        if not line or line[0] in "c*":
            continue
        if line.startswith("s "):
            status = line[2:].strip().upper()
            if status not in ("SATISFIABLE", "OPTIMUM FOUND"):
                raise ParseError(f"solver reported {status}")
            continue
        if not line.startswith("v"):
            continue
        for tok in line[1:].split():
            if tok == "0":
                terminated = True
                continue
            m = _LIT.match(tok)
            if not m:
                raise ParseError(f"bad literal {tok!r}")
            if terminated:
                raise ParseError("literal after the terminating 0")
            named = named or bool(m[2])
            values[int(m[3])] = not m[1]
    if not values:
        raise ParseError("no value lines in solver output")
    return SolverOutput(values, named, terminated)


def import_solution(document: str, vm: Optional[VariableMap] = None) -> Code:
    """Rebuild the code from a solver's assignment and verify it before returning."""
    if vm is None:
        vm = VariableMap.from_legend(document)
    out = parse_values(document)
    values = out.values
    L = vm.length
    if not out.named and not out.terminated:
        raise ParseError("value lines end without the terminating 0 (truncated?)")
    needed = vm.num_model_vars if out.named else 2 * L
    missing = [vm.name(v) for v in range(1, needed + 1) if v not in values]
    if missing:
        raise ParseError(f"assignment lacks {', '.join(missing[:5])}" + (" ..." if len(missing) > 5 else ""))
    K = [int(values[vm.K(i)]) for i in range(L)]
    V = [int(values[vm.V(i)]) for i in range(L)]
    if sum(K) != vm.k:
        raise CardinalityError(f"assignment has {sum(K)} control bits, expected {vm.k}")
    code = PbAssignment(K, [v if kk else 0 for kk, v in zip(K, V)]).code()
    if not is_sync_code(code, vm.n):
        raise VerificationError(f"imported code {code} is not {vm.n}-reliable")
    return code
