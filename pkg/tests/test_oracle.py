import pytest

from coarse_subsets.ballean import BalleanError, IntegerLine, PartialBijection, expansion_modulus
from coarse_subsets.oracle import (SearchCapExceeded, minimize_modulus, search_bounded_bijection, search_cap)


def test_three_points_exhausted():
    res = search_bounded_bijection(IntegerLine([0, 1, 2]), IntegerLine([0, 10, 20]), {1: 1})
    assert res.status == "exhausted" and res.bijection is None


def test_identity_found():
    X = IntegerLine([0, 1])
    res = search_bounded_bijection(X, X, {1: 1})
    assert res.status == "found" and res.bijection == {0: 0, 1: 1}


def test_found_bijection_meets_bounds():
    X, A = IntegerLine(range(6)), IntegerLine([0, 2, 4, 6, 8, 10])
    res = search_bounded_bijection(X, A, {1: 2}, {2: 1})
    f = PartialBijection(X, A, res.bijection)
    assert expansion_modulus(f, 1)[1] <= 2
    assert expansion_modulus(f.inverse(), 2)[2] <= 1


def test_minimum_modulus_ten_points():
    res = minimize_modulus(IntegerLine(range(10)), IntegerLine(range(0, 30, 3)), 1)
    assert res.value == 3
    assert res.refuted_below == (0, 1, 2)
    f = PartialBijection(IntegerLine(range(10)), IntegerLine(range(0, 30, 3)), res.witness)
    assert expansion_modulus(f, 1)[1] == 3


def test_size_mismatch_and_cap(monkeypatch):
    with pytest.raises(BalleanError):
        search_bounded_bijection(IntegerLine([0]), IntegerLine([0, 1]), {})
    with pytest.raises(SearchCapExceeded):
        search_bounded_bijection(IntegerLine(range(13)), IntegerLine(range(13)), {})
    monkeypatch.setenv("COARSE_SEARCH_CAP", "14")
    assert search_cap() == 14
    assert search_bounded_bijection(IntegerLine(range(13)), IntegerLine(range(13)), {}).status == "found"


def test_modulus_table_bound():
    X = IntegerLine(range(4))
    tab = expansion_modulus(PartialBijection(X, X, {x: x for x in range(4)}), 2)
    assert search_bounded_bijection(X, X, tab).status == "found"
