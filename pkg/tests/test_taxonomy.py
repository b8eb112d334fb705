import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coarse_subsets.ballean import IntegerLine, PartialBijection
from coarse_subsets.taxonomy import (TaxonomyBudgetError, TaxonomyError, check_thin_pair_bijection,
                                     classify_subset_taxonomy, exceptional_set, nearest_point_equivalence,
                                     space_from_json, subset_from_json)

SPACE = IntegerLine.interval(0, 1000)


def subset(kind, **kw):
    return subset_from_json({"kind": kind, **kw}, SPACE)


def test_evens():
    rep = classify_subset_taxonomy(SPACE, subset("arithmetic", step=2), 4)
    assert rep.large_at == 1
    assert not rep.thin_at_budget and len(rep.exceptional[2]) == 501
    assert rep.thick_radii == [0]
    assert rep.small == "inconclusive"


def test_squares():
    rep = classify_subset_taxonomy(SPACE, subset("squares"), 4)
    assert rep.thin_at_budget
    assert all(e <= {0, 1, 4} for e in rep.exceptional.values())
    assert rep.large_at is None


def test_geometric_blocks():
    A = subset("geometric_blocks", base=4, factor=2)
    assert set(range(256, 513)) <= A
    rep = classify_subset_taxonomy(SPACE, A, 4)
    assert rep.thick_radii == [0, 1, 2, 3, 4]
    assert rep.small == "refuted" and rep.small_witness["L"] == "truncation"
    x = rep.small_witness["uncovered_point"]
    assert SPACE.ball(x, 4) <= A


def test_budget_and_errors():
    with pytest.raises(TaxonomyBudgetError):
        classify_subset_taxonomy(IntegerLine.interval(0, 10), {0, 1}, 6)
    with pytest.raises(TaxonomyError):
        classify_subset_taxonomy(IntegerLine(range(10)), {0}, 1)
    with pytest.raises(TaxonomyError):
        classify_subset_taxonomy(SPACE, set(), 1)
    with pytest.raises(TaxonomyError):
        subset_from_json({"kind": "points", "points": [1001]}, SPACE)
    with pytest.raises(TaxonomyError):
        space_from_json({"kind": "interval", "lo": 5, "hi": 2})


def test_thin_pair_sampled_bijections():
    S = IntegerLine(subset("squares"), 1000)
    T = IntegerLine([n * (n + 1) // 2 for n in range(32)], 527)
    assert len(S.points) == len(T.points) == 32
    for sp in (S, T):
        assert classify_subset_taxonomy(sp, sp.points, 4).thin_at_budget
    rng = random.Random(7)
    for _ in range(20):
        t = list(T.sorted_points)
        rng.shuffle(t)
        chk = check_thin_pair_bijection(PartialBijection(S, T, dict(zip(S.sorted_points, t))), 4)
        assert chk.ok


@settings(max_examples=30)
@given(st.permutations(range(20)))
def test_thin_pair_property(perm):
    S = IntegerLine([n * n for n in range(20)], 400)
    T = IntegerLine([3 ** n for n in range(6)] + [1000 + 50 * n for n in range(14)], 2000)
    chk = check_thin_pair_bijection(PartialBijection(S, T, dict(zip(S.sorted_points, [T.sorted_points[i] for i in perm]))), 3)
    assert chk.ok


def test_exceptional_set():
    sp = IntegerLine.interval(0, 20)
    assert exceptional_set(sp, {0, 1, 5, 10, 12}, 2) == {0, 1, 10, 12}


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3), st.integers(2, 4), st.integers(0, 3), st.integers(1, 3))
def test_large_equivalence(r, step1, off, extra):
    sp = IntegerLine.interval(0, 300)
    L1 = set(range(off % step1, 301, step1))
    L2 = set(range(1, 301, 2 * r + 1 if 2 * r + 1 <= 2 * r + extra else 2 * r))
    if not (classify_subset_taxonomy(sp, L1, r).large_at or 0) <= r:
        return
    from coarse_subsets.ballean import is_large_at
    if not (is_large_at(sp, L1, r) and is_large_at(sp, L2, r)):
        return
    eq = nearest_point_equivalence(sp, L1, L2, r, budget=2 * r)
    assert eq.ok
    assert all(abs(x - y) <= r for x, y in eq.bijection.pairs.items())


def test_large_equivalence_requires_large():
    with pytest.raises(TaxonomyError):
        nearest_point_equivalence(SPACE, {0}, SPACE.points, 1)
