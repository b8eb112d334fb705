import itertools

import pytest
from hypothesis import strategies as st

from coarse_subsets.adfamily import BinarySeed

SIXTEEN_SEEDS = [":0", ":1", ":01", ":10", ":001", "1:0", "0:1", "01:0", "10:1", ":011", "11:0", "00:1",
                 ":0001", "111:0", ":100", "0:011"]

bits = st.text(alphabet="01", max_size=6)
seeds = st.builds(BinarySeed, bits, st.text(alphabet="01", min_size=1, max_size=4))


@st.composite
def seed_pairs(draw):
    a = draw(seeds)
    b = draw(seeds.filter(lambda s: s != a))
    return a, b


@pytest.fixture(scope="session")
def sixteen_seeds():
    out = [BinarySeed.parse(s) for s in SIXTEEN_SEEDS]
    assert len(set(out)) == 16
    return out


@pytest.fixture(scope="session")
def seed_pairs_16(sixteen_seeds):
    return list(itertools.combinations(sixteen_seeds, 2))
