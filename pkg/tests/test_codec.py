import itertools
import random

import pytest
from hypothesis import given, strategies as st

from synccodes.codec import (
    BitBuffer,
    CorruptionError,
    PhaseSet,
    SyncError,
    decode,
    decode_report,
    encode,
    synchronize,
)
from synccodes.core import Code, ContractError
from synccodes.verifier import reliability

KNOWN_9 = "____00011____01011"


def bits(text):
    return BitBuffer.from_str(text)


def window_stream(code, phase, n, data):
    """First n bits read at the given phase, with wildcards filled from data."""
    fill = iter(data)
    out = []
    for t in range(n):
        s = code[(phase + t) % len(code)]
        out.append(int(s.value) if s.is_control else next(fill))
    return BitBuffer.of(out)


def worst_case_consumed(text):
    code = Code.parse(text)
    n = reliability(code)
    worst = 0
    for phase in range(len(code)):
        wild = sum(not code[(phase + t) % len(code)].is_control for t in range(n))
        for data in itertools.product((0, 1), repeat=wild):
            got, used = synchronize(window_stream(code, phase, n, data), code)
            assert got == phase
            worst = max(worst, used)
    return worst


def test_encode_example():
    assert str(encode(bits("0111"), "__110")) == "0111011110"


def test_decode_example():
    assert str(decode(bits("0111011110"), "__110")) == "0111"


def test_encode_empty():
    assert len(encode(BitBuffer(), KNOWN_9)) == 0


def test_encode_reference_positions():
    data = bits("10110010")
    out = encode(data, KNOWN_9)
    assert len(out) == 18
    wild = [p for p, c in enumerate(KNOWN_9) if c == "_"]
    assert [out[p] for p in wild] == list(data.bits)
    assert all(out[p] == int(c) for p, c in enumerate(KNOWN_9) if c != "_")


def test_encode_rejects_ragged_data():
    with pytest.raises(ContractError):
        encode(bits("011"), "__110")


def test_flipped_control_bit():
    stream = list(encode(bits("01110010"), "__110").bits)
    stream[7] ^= 1
    with pytest.raises(CorruptionError):
        decode(BitBuffer.of(stream), "__110")


def test_too_short_for_a_block():
    stream = encode(bits("0111"), "__110")
    with pytest.raises(ContractError):
        decode(BitBuffer.of(stream.bits[:7]), "__110", 3)


def test_synchronize_reference_offsets():
    rng = random.Random(7)
    data = BitBuffer.of(rng.randrange(2) for _ in range(8 * 4))
    stream = encode(data, KNOWN_9)
    assert synchronize(stream, KNOWN_9, 0)[0] == 0
    assert synchronize(stream, KNOWN_9, 5)[0] == 5
    for off in range(40):
        phase, used = synchronize(stream, KNOWN_9, off)
        assert phase == off % 18 and used <= 9


def test_decode_from_offset_skips_to_block():
    data = bits("10110010" "01101100" "11100001")
    rep = decode_report(encode(data, KNOWN_9), KNOWN_9, 5)
    assert rep.phase == 5 and rep.skipped_head == 13
    assert str(rep.data) == "0110110011100001"


def test_tightness_reference():
    assert worst_case_consumed(KNOWN_9) == 9


def test_sync_error_when_window_too_short():
    stream = encode(bits("00000000"), KNOWN_9)
    with pytest.raises(SyncError):
        synchronize(stream, KNOWN_9, 0, window=3)


def test_unreliable_code_refused():
    with pytest.raises(ContractError):
        synchronize(encode(bits("0" * 8), "________0"), "________0")


def test_phase_set_elimination():
    code = Code.parse("__110")
    state = PhaseSet.start(5).update(code, 0)
    # a 0 excludes the phases whose first symbol is a fixed 1
    assert state.phases == frozenset({0, 1, 4}) and state.consumed == 1


def test_bytes_are_msb_first():
    buf = BitBuffer.from_bytes(b"\x80\x01")
    assert str(buf) == "1000000000000001"
    assert buf.to_bytes() == b"\x80\x01"


@given(st.binary(max_size=40))
def test_bytes_round_trip(raw):
    assert BitBuffer.from_bytes(raw).to_bytes() == raw


blocks = st.integers(0, 6).flatmap(lambda b: st.lists(st.integers(0, 1), min_size=8 * b, max_size=8 * b))


@given(blocks)
def test_round_trip_and_expansion(data):
    buf = BitBuffer.of(data)
    out = encode(buf, KNOWN_9)
    assert len(out) * 8 == len(buf) * 18
    assert decode(out, KNOWN_9) == buf
