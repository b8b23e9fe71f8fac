import pytest

from brute import all_codes, brute_is_sync
from synccodes.core import ContractError
from synccodes.oracle import (
    OracleBudget,
    count_candidates,
    enumerate_codes,
    oracle_exists,
    oracle_min_k,
    oracle_reliabilities,
)
from synccodes.solver import MinKStatus, Status
from synccodes.verifier import is_sync_code, lemma1_bound


def test_enumeration_is_complete_and_ordered():
    got = [str(c) for c in enumerate_codes(2, 2)]
    assert len(got) == len(set(got)) == count_candidates(2, 2) == 24
    assert set(got) == set(all_codes(2, 2))
    # lexicographic placements, binary-counting values
    assert got[:4] == ["00__", "01__", "10__", "11__"]
    assert got[4] == "0_0_"


def test_sat_instance():
    res = oracle_exists(2, 3, 5)
    assert res.status is Status.SAT
    assert (res.code.d, res.code.k) == (2, 3)
    assert brute_is_sync(str(res.code), 5)


def test_unsat_below_minimum():
    assert oracle_exists(2, 2, 5).status is Status.UNSAT


def test_infinite_entry_by_exhaustion():
    assert lemma1_bound(3, 3) == 5
    for k in range(1, 6):
        assert oracle_exists(3, k, 3).status is Status.UNSAT
    assert oracle_min_k(3, 3).status is MinKStatus.INFINITE


@pytest.mark.parametrize("d, n, expected", [(2, 4, 6), (2, 2, None), (3, 6, 6)])
def test_min_k(d, n, expected):
    res = oracle_min_k(d, n)
    if expected is None:
        assert res.status is MinKStatus.INFINITE
    else:
        assert (res.status, res.k) == (MinKStatus.FINITE, expected)
        assert is_sync_code(res.code, min(n, len(res.code)))


def test_budget_refusal():
    res = oracle_exists(4, 6, 6, OracleBudget(max_enumerations=1000))
    assert res.status is Status.TIMEOUT
    with pytest.raises(ContractError):
        oracle_exists(10, 10, 5)
    with pytest.raises(ContractError):
        oracle_reliabilities(4, 6, OracleBudget(max_enumerations=10))


def test_min_k_reports_unknown_when_out_of_budget():
    res = oracle_min_k(8, 8, OracleBudget(max_length=12))
    assert res.status is MinKStatus.UNKNOWN


def test_reliabilities_agree_with_definition():
    for code, rel in oracle_reliabilities(3, 3).items():
        for n in range(1, 7):
            assert (rel is not None and rel <= n) == brute_is_sync(str(code), n)
