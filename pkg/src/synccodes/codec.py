"""Applying a code to bitstreams: block encoding, phase recovery, decoding."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .core import Code, ContractError, Symbol, as_code
from .verifier import reliability


class CorruptionError(ValueError):
    """The stream contradicts the code's fixed control bits."""


class SyncError(RuntimeError):
    """Phase still ambiguous after n bits of a code proven n-reliable."""


@dataclass(frozen=True)
class BitBuffer:
    bits: tuple[int, ...] = ()

    def __post_init__(self):
        if any(b not in (0, 1) for b in self.bits):
            raise ContractError("bits must be 0 or 1")

    @classmethod
    def from_bytes(cls, data: bytes) -> "BitBuffer":
        return cls(tuple((byte >> (7 - s)) & 1 for byte in data for s in range(8)))

    @classmethod
    def from_str(cls, text: str) -> "BitBuffer":
        text = "".join(text.split())
        if set(text) - {"0", "1"}:
            raise ContractError(f"not a bit string: {text!r}")
        return cls(tuple(int(c) for c in text))

    @classmethod
    def of(cls, bits: Iterable[int]) -> "BitBuffer":
        return cls(tuple(bits))

    def to_bytes(self) -> bytes:
        """MSB-first packing; a final partial byte is padded with zeros."""
        out = bytearray()
        for start in range(0, len(self.bits), 8):
            chunk = self.bits[start:start + 8]
            byte = 0
            for b in chunk:
                byte = byte << 1 | b
            out.append(byte << (8 - len(chunk)))
        return bytes(out)

    def __len__(self) -> int:
        return len(self.bits)

    def __getitem__(self, i):
        return self.bits[i]

    def __str__(self) -> str:
        return "".join(map(str, self.bits))


@dataclass(frozen=True)
class PhaseSet:
    """Phases (of the first bit read) still consistent with the bits seen."""

    phases: frozenset
    consumed: int = 0

    @classmethod
    def start(cls, length: int) -> "PhaseSet":
        return cls(frozenset(range(length)))

    def update(self, code: Code, bit: int) -> "PhaseSet":
        L = len(code)
        t = self.consumed
        keep = frozenset(
            ph for ph in self.phases
            if not code[(ph + t) % L].is_control or int(code[(ph + t) % L].value) == bit
        )
        return PhaseSet(keep, t + 1)

    @property
    def synchronized(self) -> bool:
        return len(self.phases) == 1


def encode(data: BitBuffer, code: Code | str) -> BitBuffer:
    code = as_code(code)
    d = code.d
    if len(data) % d:
        raise ContractError(f"data length {len(data)} is not a multiple of d={d}")
    out = []
    bits = iter(data.bits)
    for _ in range(len(data) // d):
        for s in code:
            if s is Symbol.WILD:
                out.append(next(bits))
            else:
                out.append(int(s.value))
    return BitBuffer(tuple(out))


def _window_of(code: Code) -> int:
    n = reliability(code)
    if n is None:
        raise ContractError(f"code {code} has no finite reliability")
    return n


def synchronize(stream: BitBuffer, code: Code | str, start_offset: int = 0,
                window: Optional[int] = None) -> tuple[int, int]:
    """Phase of the bit at ``start_offset`` and how many bits it took to pin it down."""
    code = as_code(code)
    n = _window_of(code) if window is None else window
    state = PhaseSet.start(len(code))
    pos = start_offset
    while not state.synchronized:
        if not state.phases:
            raise CorruptionError(f"no phase fits the bits read from offset {start_offset}")
        if state.consumed >= n:
            raise SyncError(f"{len(state.phases)} phases left after {n} bits")
        if pos >= len(stream):
            raise ContractError("stream ended before the phase was identified")
        state = state.update(code, stream[pos])
        pos += 1
    if not state.phases:
        raise CorruptionError(f"no phase fits the bits read from offset {start_offset}")
    (phase,) = state.phases
    return phase, state.consumed


@dataclass(frozen=True)
class DecodeReport:
    data: BitBuffer
    phase: int
    consumed: int
    skipped_head: int
    skipped_tail: int


def decode_report(stream: BitBuffer, code: Code | str, start_offset: int = 0) -> DecodeReport:
    code = as_code(code)
    L = len(code)
    if start_offset == len(stream):
        return DecodeReport(BitBuffer(), 0, 0, 0, 0)
    phase, consumed = synchronize(stream, code, start_offset)
    for pos in range(start_offset, len(stream)):
        s = code[(phase + pos - start_offset) % L]
        if s.is_control and int(s.value) != stream[pos]:
            raise CorruptionError(f"control bit mismatch at stream bit {pos}")
    first = start_offset + (L - phase) % L
    blocks = (len(stream) - first) // L
    if blocks < 1:
        raise ContractError("stream holds no full block after synchronization")
    wild = [p for p, s in enumerate(code) if s is Symbol.WILD]
    out = []
    for b in range(blocks):
        base = first + b * L
        out.extend(stream[base + p] for p in wild)
    tail = len(stream) - first - blocks * L
    return DecodeReport(BitBuffer(tuple(out)), phase, consumed, first - start_offset, tail)


def decode(stream: BitBuffer, code: Code | str, start_offset: int = 0) -> BitBuffer:
    return decode_report(stream, code, start_offset).data
