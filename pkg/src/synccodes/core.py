"""Codes over {0, 1, _}: parsing, rotation, wildcard matching and the symmetry transforms."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence


class ContractError(ValueError):
    """Raised when a caller violates an operation's preconditions."""


class Symbol(enum.Enum):
    ZERO = "0"
    ONE = "1"
    WILD = "_"

    @property
    def is_control(self) -> bool:
        return self is not Symbol.WILD

    def __str__(self) -> str:
        return self.value


_FLIP = {Symbol.ZERO: Symbol.ONE, Symbol.ONE: Symbol.ZERO, Symbol.WILD: Symbol.WILD}


def matches(a: Symbol, b: Symbol) -> bool:
    return a is b or a is Symbol.WILD or b is Symbol.WILD


def matches_seq(a: Sequence[Symbol], b: Sequence[Symbol]) -> bool:
    if len(a) != len(b):
        raise ContractError(f"cannot match sequences of length {len(a)} and {len(b)}")
    return all(matches(x, y) for x, y in zip(a, b))


@dataclass(frozen=True)
class Code:
    """A cyclic pattern of control bits and wildcards.

    ``Code.parse("__110")`` is the code with two data slots followed by the
    fixed control bits 1, 1, 0.
    """

    symbols: tuple[Symbol, ...]

    def __post_init__(self):
        if not self.symbols:
            raise ContractError("a code needs at least one symbol")
        if not all(isinstance(s, Symbol) for s in self.symbols):
            raise ContractError("code symbols must be Symbol members")

    @classmethod
    def parse(cls, text: str) -> "Code":
        try:
            return cls(tuple(Symbol(ch) for ch in text.strip()))
        except ValueError:
            raise ContractError(f"not a code string over 0/1/_: {text!r}") from None

    @classmethod
    def from_masks(cls, length: int, zeros: int, ones: int) -> "Code":
        """Build a code from bitmasks where bit p marks a 0 (or 1) control bit at p."""
        if zeros & ones:
            raise ContractError("a position cannot hold both a 0 and a 1")
        out = []
        for p in range(length):
            if zeros >> p & 1:
                out.append(Symbol.ZERO)
            elif ones >> p & 1:
                out.append(Symbol.ONE)
            else:
                out.append(Symbol.WILD)
        return cls(tuple(out))

    def __str__(self) -> str:
        return "".join(s.value for s in self.symbols)

    def __repr__(self) -> str:
        return f"Code({str(self)!r})"

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __getitem__(self, i):
        return self.symbols[i]

    @property
    def d(self) -> int:
        return sum(1 for s in self.symbols if s is Symbol.WILD)

    @property
    def k(self) -> int:
        return len(self.symbols) - self.d

    @property
    def masks(self) -> tuple[int, int]:
        """(zeros, ones) bitmasks, bit p set when position p holds that control bit."""
        zeros = ones = 0
        for p, s in enumerate(self.symbols):
            if s is Symbol.ZERO:
                zeros |= 1 << p
            elif s is Symbol.ONE:
                ones |= 1 << p
        return zeros, ones

    def control_positions(self) -> list[int]:
        return [p for p, s in enumerate(self.symbols) if s.is_control]

    def window(self, start: int, n: int) -> tuple[Symbol, ...]:
        """The first n symbols of the rotation by ``start`` (wrapping as often as needed)."""
        L = len(self.symbols)
        return tuple(self.symbols[(start + a) % L] for a in range(n))


@dataclass(frozen=True)
class Params:
    d: int
    k: int
    n: int

    def __post_init__(self):
        if self.d < 1:
            raise ContractError(f"d must be >= 1, got {self.d}")
        if self.k < 0:
            raise ContractError(f"k must be >= 0, got {self.k}")
        if not 1 <= self.n <= self.d + self.k:
            raise ContractError(
                f"n must lie in [1, d+k] = [1, {self.d + self.k}], got {self.n}"
            )

    @property
    def length(self) -> int:
        return self.d + self.k


@dataclass(frozen=True)
class ModIndex:
    """An index modulo the block length; ``+`` and ``-`` wrap around."""

    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ContractError("modulus must be positive")
        object.__setattr__(self, "value", self.value % self.modulus)

    def _other(self, other) -> int:
        if isinstance(other, ModIndex):
            if other.modulus != self.modulus:
                raise ContractError("mixed moduli")
            return other.value
        return int(other)

    def __add__(self, other) -> "ModIndex":
        return ModIndex(self.value + self._other(other), self.modulus)

    __radd__ = __add__

    def __sub__(self, other) -> "ModIndex":
        return ModIndex(self.value - self._other(other), self.modulus)

    def __int__(self) -> int:
        return self.value

    __index__ = __int__


def rotate(code: Code, i: int) -> Code:
    """Left rotation: ``rotate(C, 1)`` moves the first symbol to the end."""
    s = code.symbols
    i %= len(s)
    return Code(s[i:] + s[:i])


def complement(code: Code) -> Code:
    return Code(tuple(_FLIP[s] for s in code.symbols))


def reverse(code: Code) -> Code:
    return Code(tuple(reversed(code.symbols)))


def as_code(value: Code | str | Iterable[Symbol]) -> Code:
    if isinstance(value, Code):
        return value
    if isinstance(value, str):
        return Code.parse(value)
    return Code(tuple(value))
