import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from coarse_subsets.adfamily import (BinarySeed, SeedError, branch_members, decode_string, encode_string, lcp_bound,
                                     shared_max)

from conftest import seed_pairs, seeds


def test_encode_examples():
    assert encode_string("0") == 1
    assert encode_string("1") == 2
    assert encode_string("111") == 14
    with pytest.raises(SeedError):
        encode_string("")


def test_encoding_bijective_up_to_16():
    seen = set()
    for n in range(1, 17):
        codes = [encode_string(format(i, f"0{n}b")) for i in range(1 << n)]
        assert codes == list(range(2**n - 1, 2 ** (n + 1) - 1))
        seen.update(codes)
    assert len(seen) == 2**17 - 2
    assert all(encode_string(decode_string(c)) == c for c in range(1, 5000))


def test_branch_members_examples():
    assert branch_members(BinarySeed("", "0"), 3) == [1, 3, 7]
    assert branch_members(BinarySeed("", "1"), 3) == [2, 6, 14]
    for s in (BinarySeed("", "0"), BinarySeed("1", "0"), BinarySeed("", "10")):
        (c,) = branch_members(s, 1)
        assert c in (1, 2)


def test_normalization():
    assert BinarySeed("0", "0") == BinarySeed("", "0")
    assert BinarySeed("", "0101") == BinarySeed("", "01")
    assert BinarySeed("01", "01") == BinarySeed("", "01")
    assert BinarySeed("1", "01") == BinarySeed("", "10")
    assert str(BinarySeed.parse("01:1")) == "0:1"
    assert BinarySeed.parse(":1") == BinarySeed("", "1")
    for bad in ("01", "0:", "0:2", "a:1", "0:1:1"):
        with pytest.raises(SeedError):
            BinarySeed.parse(bad)
    assert BinarySeed.from_json(BinarySeed("10", "0").to_json()) == BinarySeed("10", "0")


def test_lcp_examples():
    assert lcp_bound(BinarySeed("", "0"), BinarySeed("", "1")) == 0
    assert lcp_bound(BinarySeed("0", "1"), BinarySeed("", "0")) == 1
    a, b = BinarySeed("01101", "0"), BinarySeed("01101", "1")
    assert lcp_bound(a, b) == 5
    for n in range(5, 12):
        assert len(set(branch_members(a, n)) & set(branch_members(b, n))) == 5
    assert shared_max(a, b) == encode_string("01101")
    assert shared_max(BinarySeed("", "0"), BinarySeed("", "1")) == 0
    with pytest.raises(SeedError):
        lcp_bound(a, a)


def test_sixteen_seeds_almost_disjoint(seed_pairs_16):
    for a, b in seed_pairs_16:
        inter = set(branch_members(a, 20)) & set(branch_members(b, 20))
        assert len(inter) == lcp_bound(a, b)


@given(seed_pairs(), st.integers(1, 30))
def test_almost_disjoint_every_truncation(pair, N):
    a, b = pair
    inter = set(branch_members(a, N)) & set(branch_members(b, N))
    assert len(inter) == min(lcp_bound(a, b), N)
    if inter:
        assert max(inter) == shared_max(a, b) or N < lcp_bound(a, b)


@given(seeds, st.integers(1, 30))
def test_members_monotone_and_distinct(s, N):
    m = branch_members(s, N)
    assert len(set(m)) == N
    assert set(m) <= set(branch_members(s, N + 1))
    assert all(s.contains(c) for c in m)
    assert m == sorted(m)


@given(seeds, seeds)
def test_normal_form_distinguishes_words(a, b):
    assert (a == b) == (a.word(40) == b.word(40))


def test_contains_across_lengths():
    s = BinarySeed("1", "0")
    members = set(branch_members(s, 10))
    assert [c for c in range(1, 2**11) if s.contains(c)] == sorted(members)
    assert not s.contains(0)
    assert list(itertools.islice(s.codes(), 3)) == [2, 5, 11]
