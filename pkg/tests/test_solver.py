import threading

import pytest

from synccodes.core import ContractError
from synccodes.oracle import oracle_reliabilities
from synccodes.solver import (
    MinKStatus,
    SearchModel,
    SolverOptions,
    Status,
    _Search,
    apply_symmetry_breaking,
    find_code,
    min_k,
)
from synccodes.verifier import is_sync_code


def test_min_grid_cell_d2_n4():
    sat = find_code(2, 6, 4)
    assert sat.status is Status.SAT
    assert (sat.code.d, sat.code.k) == (2, 6) and is_sync_code(sat.code, 4)
    assert find_code(2, 5, 4).status is Status.UNSAT


def test_min_k_infinite():
    res = min_k(4, 4)
    assert res.status is MinKStatus.INFINITE
    assert res.bound == 12
    assert [k for k, _ in res.runs] == list(range(1, 13))


def test_min_k_finite():
    res = min_k(6, 10)
    assert (res.status, res.k) == (MinKStatus.FINITE, 7)
    assert all(r.status is Status.UNSAT for k, r in res.runs[:-1])
    assert is_sync_code(res.code, 10)


def test_min_k_window_longer_than_block():
    # n = 13 exceeds d + k = 5; such a window repeats the block
    res = min_k(2, 13)
    assert res.k == 3 and len(res.code) == 5


def _root(d, k, n, symmetry=True):
    model = SearchModel.initial(d, k, n)
    if symmetry:
        model = apply_symmetry_breaking(model)
    search = _Search(model, SolverOptions())
    return search._cardinality(*search.root)


def _ones_allowed(state):
    c0, c1, cw = state
    return [p for p in range(c0.bit_length() + 8) if c1 >> p & 1]


def test_symmetry_breaking_k2_pins_both_bits():
    c0, c1, cw = _root(3, 2, 5)
    assert c0 & 1 and not c1 & 1 and not cw & 1
    assert c1 & 2 and not c0 & 2 and not cw & 2
    # only the two fixed control bits remain: everything else is a wildcard
    assert (c0 | c1) == 0b11


def test_symmetry_breaking_k3_forces_zeros():
    state = _root(4, 3, 7)
    assert _ones_allowed(state) == [1]


def test_symmetry_breaking_needs_two_control_bits():
    with pytest.raises(ContractError):
        apply_symmetry_breaking(SearchModel.initial(3, 1, 2))


def test_trivial_instances():
    one = find_code(1, 0, 1)
    assert one.status is Status.SAT and str(one.code) == "_"
    assert find_code(5, 1, 3).status is Status.UNSAT
    assert find_code(5, 0, 3).status is Status.UNSAT


@pytest.mark.parametrize("d, k, n", [(0, 3, 2), (2, 2, 5), (2, -1, 1), (3, 3, 0)])
def test_invalid_params(d, k, n):
    with pytest.raises(ContractError):
        find_code(d, k, n)


def test_deterministic():
    a = find_code(4, 8, 6)
    b = find_code(4, 8, 6)
    assert a.code == b.code and a.nodes == b.nodes


def test_sat_persists_for_larger_windows():
    for d, k, n in [(2, 6, 4), (3, 6, 6), (4, 7, 7)]:
        code = find_code(d, k, n).code
        for m in range(n, d + k + 1):
            assert find_code(d, k, m).sat
            assert is_sync_code(code, m)


def test_node_limit_gives_timeout():
    res = find_code(5, 12, 6, SolverOptions(node_limit=5))
    assert res.status is Status.TIMEOUT and res.nodes > 0


def test_cancellation_is_honored():
    stop = threading.Event()
    stop.set()
    res = find_code(8, 14, 8, SolverOptions(cancel=stop))
    assert res.status is Status.TIMEOUT and res.nodes <= 256


def test_min_k_unknown_on_timeout():
    res = min_k(8, 8, SolverOptions(node_limit=50))
    assert res.status is MinKStatus.UNKNOWN


@pytest.mark.parametrize("counting", [True, False])
def test_propagator_alone_agrees_with_oracle(counting):
    # checks pair coverage with and without the window-counting filter
    for L in range(2, 10):
        for d in range(1, L):
            k = L - d
            rels = [r for r in oracle_reliabilities(d, k).values() if r is not None]
            best = min(rels, default=None)
            for n in range(1, L + 1):
                for symmetry in (True, False):
                    res = find_code(d, k, n, SolverOptions(symmetry=symmetry, counting_bound=counting))
                    assert res.sat == (best is not None and best <= n), (d, k, n, symmetry)
