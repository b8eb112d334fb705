"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line with its runtime."""

import contextlib
import itertools
import math
import random
import time
from fractions import Fraction

import pytest

from coarse_subsets.adfamily import BinarySeed, branch_members, lcp_bound
from coarse_subsets.ballean import IntegerLine, PartialBijection, expansion_modulus
from coarse_subsets.certificates import CertificateDocument, parse_certificate, serialize_certificate, \
    validate_certificate
from coarse_subsets.classify import (AbelianSpec, CyclicSumSpec, abelian_groups_of_order, conditions_by_orders,
                                     decide_abelian_coarse_equiv, decide_locfin_asymorphic,
                                     realizable_orders_bruteforce)
from coarse_subsets.fingen import generate_intervals, refute_fingen_pair
from coarse_subsets.locfin import build_chain, check_criterion_conditions, refute_locfin_pair, \
    verify_translate_disjointness
from coarse_subsets.oracle import minimize_modulus
from coarse_subsets.snf import determinant, invariant_factors_from_minors, matmul, smith_normal_form
from coarse_subsets.taxonomy import check_thin_pair_bijection, classify_subset_taxonomy, subset_from_json


@pytest.fixture
def criterion(capsys):
    @contextlib.contextmanager
    def run(number: int, title: str, limit: float):
        start = time.perf_counter()
        ok = False
        try:
            yield
            ok = True
        finally:
            elapsed = time.perf_counter() - start
            passed = ok and elapsed < limit
            with capsys.disabled():
                print(f"\n{'PASS' if passed else 'FAIL'} [{number}] {title} ({elapsed:.3f}s, limit {limit}s)")
        assert elapsed < limit, f"criterion {number} took {elapsed:.3f}s > {limit}s"

    return run


def revalidate(payload: dict) -> bool:
    doc = CertificateDocument.from_payload(payload)
    back = parse_certificate(serialize_certificate(doc))
    return validate_certificate(back).status == "valid"


def test_ac1_interval_condition(criterion):
    with criterion(1, "interval growth b_n - a_n > n a_n for 200 intervals", 1.0):
        seq = generate_intervals(200)
        assert len(seq) == 200
        for n, (a, b) in enumerate(seq):
            assert b - a > n * a
            if n:
                assert a == seq[n - 1][1] + 1


def test_ac2_almost_disjoint(criterion, sixteen_seeds):
    with criterion(2, "120 pairwise branch intersections equal the common prefix bound", 1.0):
        members = {w: set(branch_members(w, 20)) for w in sixteen_seeds}
        pairs = list(itertools.combinations(sixteen_seeds, 2))
        assert len(pairs) == 120
        for a, b in pairs:
            assert len(members[a] & members[b]) == lcp_bound(a, b)


def test_ac3_fingen_certificates(criterion, seed_pairs_16):
    with criterion(3, "fin-gen certificates on 120 pairs x r,t in {1,2,4}, all re-validated", 10.0):
        count = 0
        for (a, b), r, t in itertools.product(seed_pairs_16, (1, 2, 4), (1, 2, 4)):
            cert = refute_fingen_pair(a, b, r, t)
            assert cert.valid
            assert revalidate(cert.to_payload())
            count += 1
        assert count == 1080


def test_ac4_oracle_cross_check(criterion):
    with criterion(4, "exhaustive minimum of mu_f(1) over bijections {0..9} -> {0,3,..,27} is 3", 60.0):
        X, A = IntegerLine(range(10)), IntegerLine(range(0, 30, 3))
        res = minimize_modulus(X, A, 1, cap=12)
        assert res.value == 3 and res.refuted_below == (0, 1, 2)
        assert expansion_modulus(PartialBijection(X, A, res.witness), 1)[1] == 3


def test_ac5_chain(criterion):
    with criterion(5, "chain sizes grow faster than squares up to 2^1023", 0.1):
        chain = build_chain(10)
        assert chain.size(10) == 2**1023
        assert all(chain.size(n + 1) > chain.size(n) ** 2 for n in range(10))


def test_ac6_translate_disjointness(criterion):
    with criterion(6, "explicit pairwise disjointness of translated blocks with n,m <= 3", 10.0):
        rep = verify_translate_disjointness(3)
        assert rep.ok and rep.blocks == 16 and rep.pairs_checked == math.comb(16, 2)
        assert rep.total_points == rep.distinct_points


def test_ac7_criterion_conditions(criterion):
    one, zero = BinarySeed("", "1"), BinarySeed("", "0")
    with criterion(7, "ball-count conditions for s=2, t=1 by direct evaluation", 10.0):
        rep = check_criterion_conditions(one, zero, s=2, t=1, cantor_max=9)
        assert (rep.k, rep.l) == (4, 8)
        assert rep.c6.passed and rep.c6.blocks and all(b.lo >= 4 for b in rep.c6.blocks)
        for o in rep.c7:
            assert o.passed and all(b.hi <= 8 for b in o.blocks if b.block not in o.nonlocal_blocks)
        assert rep.c8.passed and rep.c8.blocks and all(b.lo > 8 for b in rep.c8.blocks)
        for o in rep.c9:
            assert o.passed and all(b.hi < 4 for b in o.blocks if b.block not in o.nonlocal_blocks)
        assert rep.passed


def test_ac8_locfin_certificates(criterion):
    pairs = [(":0", ":1"), (":1", ":0"), (":01", ":10"), ("1:0", ":0"), (":001", ":1"), ("0:1", "1:0")]
    with criterion(8, "loc-fin certificates on 6 seed pairs with t=1, all re-validated", 30.0):
        for a, b in pairs:
            cert = refute_locfin_pair(BinarySeed.parse(a), BinarySeed.parse(b), 1)
            assert cert.valid
            assert revalidate(cert.to_payload())


def _snf_invariants(A):
    res = smith_normal_form(A)
    assert abs(determinant(res.U)) == 1 and abs(determinant(res.V)) == 1
    assert matmul(matmul(res.U, A), res.V) == res.D
    d = res.diagonal
    nz = [x for x in d if x]
    assert all(x > 0 for x in nz) and list(d[:len(nz)]) == nz
    assert all(nz[i + 1] % nz[i] == 0 for i in range(len(nz) - 1))
    assert list(d) == invariant_factors_from_minors(A)


def test_ac9_classification(criterion):
    with criterion(9, "classification vs brute force (orders <= 64), abelian verdicts, SNF on 100 matrices", 30.0):
        groups = [g for n in range(2, 65) for g in abelian_groups_of_order(n)]
        orders = {g: realizable_orders_bruteforce(g) for g in groups}
        for g, h in itertools.product(groups, repeat=2):
            assert bool(decide_locfin_asymorphic(g, h)) == conditions_by_orders(orders[g], orders[h])

        assert not decide_abelian_coarse_equiv(AbelianSpec.free(1), AbelianSpec.free(2))
        t2 = AbelianSpec.from_cyclic_sum(CyclicSumSpec.omega(2))
        t3 = AbelianSpec.from_cyclic_sum(CyclicSumSpec.omega(3))
        assert decide_abelian_coarse_equiv(t2, t3)
        z5 = AbelianSpec.from_cyclic_sum(CyclicSumSpec.of(5))
        assert not decide_abelian_coarse_equiv(z5, AbelianSpec.from_cyclic_sum(CyclicSumSpec.omega(5)))

        rng = random.Random(2024)
        for _ in range(100):
            _snf_invariants([[rng.randint(-10, 10) for _ in range(4)] for _ in range(4)])


def test_ac10_taxonomy(criterion):
    space = IntegerLine.interval(0, 1000)

    def subset(kind, **kw):
        return subset_from_json({"kind": kind, **kw}, space)

    with criterion(10, "taxonomy of evens, squares, geometric blocks; 20 thin-pair bijections", 10.0):
        assert classify_subset_taxonomy(space, subset("arithmetic", step=2), 4).large_at == 1
        assert classify_subset_taxonomy(space, subset("squares"), 4).thin_at_budget
        assert classify_subset_taxonomy(space, subset("geometric_blocks"), 4).thick_radii == [0, 1, 2, 3, 4]

        S = IntegerLine(subset("squares"), 1000)
        T = IntegerLine([n * (n + 1) // 2 for n in range(32)], 527)
        rng = random.Random(11)
        for _ in range(20):
            image = list(T.sorted_points)
            rng.shuffle(image)
            chk = check_thin_pair_bijection(PartialBijection(S, T, dict(zip(S.sorted_points, image))), 4)
            assert chk.ok
