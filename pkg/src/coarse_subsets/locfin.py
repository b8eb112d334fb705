"""Coset-block families in ⊕_ω Z_2 and the four-condition refutation.

The ambient group is ``G = ⊕_ω Z_2`` with elements stored as frozensets of
coordinates. The chain is ``F_n`` = subgroup on coordinates ``[0, 2**n - 1)``,
so ``|F_n| = 2**(2**n - 1)`` and ``|F_{n+1}| > |F_n|**2``.

Each pair ``(n, m)`` gets the translate ``g_nm = e_τ`` with
``τ = 2**(c + 1) - 1`` where ``c`` is the Cantor index of ``(n, m)``. The
blocks ``F_n g_nm`` are pairwise disjoint and so are the guard cosets
``F_max(n,m) g_nm``. ``Y_n`` is the union of the blocks ``F_n g_nm`` over
``m`` and ``X_W`` the union of ``Y_n`` over ``n ∈ W``.

Block sizes explode doubly exponentially, so ball counts are computed from
the block structure; blocks small enough to enumerate are also counted
element by element and the two answers must agree.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .adfamily import BinarySeed, SeedError, lcp_bound, shared_max
from .ballean import CoordSubgroup, is_f2_element

ENUM_CAP = 1 << 16
EXPLICIT_CAP = 1 << 14
MAX_LEVEL = 14


class LocFinError(ValueError):
    pass


def level_width(n: int) -> int:
    """Number of coordinates supporting ``F_n``."""
    return (1 << n) - 1


def chain_size(n: int) -> int:
    """``|F_n|`` as an exact integer."""
    return 1 << level_width(n)


def cantor(n: int, m: int) -> int:
    return (n + m) * (n + m + 1) // 2 + m


def cantor_inverse(c: int) -> tuple[int, int]:
    w = (math.isqrt(8 * c + 1) - 1) // 2
    m = c - w * (w + 1) // 2
    return w - m, m


def translate_coordinate(n: int, m: int) -> int:
    return level_width(cantor(n, m) + 1)


# ---------------------------------------------------------------------------
# chain and translates


@dataclass(frozen=True)
class ChainSpec:
    n_max: int
    widths: tuple[int, ...]
    sizes: tuple[int, ...]

    def size(self, n: int) -> int:
        return self.sizes[n]

    def subgroup(self, n: int) -> CoordSubgroup:
        return CoordSubgroup(self.widths[n])


def build_chain(n_max: int) -> ChainSpec:
    if n_max < 1:
        raise LocFinError("n_max must be at least 1")
    widths = tuple(level_width(n) for n in range(n_max + 1))
    sizes = tuple(1 << w for w in widths)
    for n in range(n_max):
        if not sizes[n + 1] > sizes[n] ** 2:
            raise AssertionError(f"|F_{n + 1}| <= |F_{n}|^2")
    return ChainSpec(n_max, widths, sizes)


@dataclass(frozen=True)
class BlockAllocation:
    n: int
    m: int
    cantor: int
    tau: int

    @property
    def g(self) -> frozenset:
        return frozenset((self.tau,))


def allocate_translate(n: int, m: int, chain: ChainSpec) -> BlockAllocation:
    c = cantor(n, m)
    if chain.n_max < c + 1:
        raise LocFinError(f"chain must reach level {c + 1} to allocate ({n}, {m})")
    return BlockAllocation(n, m, c, chain.widths[c + 1])


def _coset(width: int, tau: int) -> Iterable[frozenset]:
    g = frozenset((tau,))
    for h in CoordSubgroup(width):
        yield h ^ g


def block_members(n: int, m: int, cap: int = ENUM_CAP) -> frozenset:
    """The block ``F_n g_nm``."""
    if chain_size(n) > cap:
        raise LocFinError(f"block ({n}, {m}) has {chain_size(n)} elements, above the enumeration cap {cap}")
    return frozenset(_coset(level_width(n), translate_coordinate(n, m)))


def decode_block(g: frozenset) -> tuple[int, int] | None:
    """The block ``(n, m)`` containing ``g``, or None if ``g`` lies in no block."""
    if not g:
        return None
    tau = max(g)
    if tau == 0 or (tau + 1) & tau:
        return None
    n, m = cantor_inverse((tau + 1).bit_length() - 2)
    w = level_width(n)
    if any(i >= w for i in g if i != tau):
        return None
    return n, m


# ---------------------------------------------------------------------------
# families


@dataclass(frozen=True)
class BlockFamily:
    """``X_W`` truncated to blocks with Cantor index at most ``cantor_max``."""

    seed: BinarySeed
    cantor_max: int

    @property
    def coord_bound(self) -> int:
        return level_width(self.cantor_max + 1) + 1

    def blocks(self) -> list[tuple[int, int]]:
        return [b for b in map(cantor_inverse, range(self.cantor_max + 1)) if self.seed.contains(b[0])]

    def members(self, cap: int = ENUM_CAP) -> frozenset:
        out: set = set()
        for n, m in self.blocks():
            out |= block_members(n, m, cap)
        return frozenset(out)

    def size(self) -> int:
        return sum(chain_size(n) for n, _ in self.blocks())

    def __contains__(self, g: frozenset) -> bool:
        return family_membership(self, g)


def family_membership(family: BlockFamily, g: frozenset) -> bool:
    if not is_f2_element(g):
        raise LocFinError(f"{g!r} is not an element of ⊕Z_2")
    if g and max(g) >= family.coord_bound:
        raise LocFinError(f"coordinate {max(g)} lies beyond the truncation")
    b = decode_block(g)
    return b is not None and family.seed.contains(b[0])


class TracedSubset:
    """``Z = X_W \\ removed`` for a finite set of removed elements.

    Membership is decided for every element of the group, not only inside the
    truncation.
    """

    def __init__(self, family: BlockFamily, removed: Iterable[frozenset] = ()):
        self.family = family
        self.removed = frozenset(removed)
        by_block: dict = {}
        for r in self.removed:
            b = decode_block(r) if is_f2_element(r) else None
            if b is None or not family.seed.contains(b[0]) or cantor(*b) > family.cantor_max:
                raise LocFinError(f"removed element {sorted(r)!r} is not in the truncated family")
            by_block.setdefault(b, set()).add(r)
        self.removed_by_block = {b: frozenset(v) for b, v in by_block.items()}

    def contains(self, g: frozenset) -> bool:
        b = decode_block(g)
        return b is not None and self.family.seed.contains(b[0]) and g not in self.removed

    def block_count(self, n: int, m: int) -> int:
        return chain_size(n) - len(self.removed_by_block.get((n, m), ()))

    def removed_supports(self) -> list[list[int]]:
        return sorted(sorted(r) for r in self.removed)


def check_covering(Z: TracedSubset, t: int, cap: int = ENUM_CAP) -> None:
    """Raise unless every element of the truncated ``X_W`` lies in ``F_t Z``."""
    if not Z.removed:
        return
    if chain_size(t) > cap:
        raise LocFinError(f"|F_{t}| exceeds the enumeration cap")
    F = CoordSubgroup(level_width(t))
    for r in Z.removed:
        if not any(Z.contains(r ^ f) for f in F):
            raise LocFinError(f"covering fails: F_{t}·{sorted(r)} misses Z")


# ---------------------------------------------------------------------------
# disjointness of the guard cosets


@dataclass
class DisjointnessReport:
    bound: int
    blocks: int
    total_points: int
    distinct_points: int
    collisions: list = field(default_factory=list)
    allocation_violations: list = field(default_factory=list)

    @property
    def pairs_checked(self) -> int:
        """Block pairs covered: every element is attributed to a single owner block."""
        return self.blocks * (self.blocks - 1) // 2

    @property
    def ok(self) -> bool:
        return not self.collisions and not self.allocation_violations and self.total_points == self.distinct_points


def verify_translate_disjointness(
    bound: int,
    tau_override: dict | None = None,
    cap: int = ENUM_CAP,
) -> DisjointnessReport:
    """Enumerate the guard cosets ``F_max(n,m) g_nm`` for ``n, m <= bound`` and look for overlaps."""
    tau_override = tau_override or {}
    owner: dict = {}
    collisions: set = set()
    violations = []
    total = 0
    pairs = [(n, m) for n in range(bound + 1) for m in range(bound + 1)]
    for n, m in pairs:
        a = max(n, m)
        if chain_size(a) > cap:
            raise LocFinError(f"guard coset of ({n}, {m}) exceeds the enumeration cap")
        tau = tau_override.get((n, m), translate_coordinate(n, m))
        if tau < level_width(a + 1):
            violations.append(((n, m), tau))
        for g in _coset(level_width(a), tau):
            total += 1
            prev = owner.setdefault(g, (n, m))
            if prev != (n, m):
                collisions.add((prev, (n, m)))
    return DisjointnessReport(bound, len(pairs), total, len(owner), sorted(collisions), violations)


# ---------------------------------------------------------------------------
# traces and ball counts


@dataclass(frozen=True)
class TraceCount:
    n: int
    m: int
    t: int
    count: int
    bound: Fraction
    applicable: bool

    @property
    def holds(self) -> bool:
        return not self.applicable or self.count >= self.bound


def block_trace_count(n: int, m: int, Z: TracedSubset, t: int) -> TraceCount:
    """``|F_n g_nm ∩ Z|`` against ``|F_n| / |F_t|`` (checked when ``n > t``)."""
    check_covering(Z, t)
    bound = Fraction(chain_size(n), chain_size(t)) if n >= t else Fraction(1)
    tc = TraceCount(n, m, t, Z.block_count(n, m), bound, n > t)
    if not tc.holds:
        raise AssertionError(f"trace bound fails on block ({n}, {m})")
    return tc


@dataclass(frozen=True)
class BlockCount:
    """Range of ``|B_Z(y, F_level)|`` over ``y`` in one block of ``Z``."""

    block: tuple[int, int]
    cantor: int
    lo: int
    hi: int
    local: bool
    route: str

    def to_json(self) -> dict:
        return {"block": list(self.block), "cantor": self.cantor, "lo": self.lo, "hi": self.hi,
                "local": self.local, "route": self.route}


def _structural_counts(Z: TracedSubset, n: int, m: int, level: int) -> tuple[int, int] | None:
    c = cantor(n, m)
    removed = Z.removed_by_block.get((n, m), frozenset())
    if len(removed) == chain_size(n):
        return None
    if c + 1 < level:
        # y ∈ F_level, so the ball is F_level ∩ Z: every block below the level
        total = 0
        for c2 in range(level - 1):
            n2, m2 = cantor_inverse(c2)
            if Z.family.seed.contains(n2):
                total += Z.block_count(n2, m2)
        return total, total
    if level >= n:
        v = Z.block_count(n, m)
        return v, v
    s0 = chain_size(level)
    w = level_width(level)
    hits = Counter(frozenset(i for i in r if i >= w) for r in removed)
    cosets = chain_size(n) // s0
    partial = [s0 - h for h in hits.values() if h < s0]
    vals = partial + ([s0] if len(hits) < cosets else [])
    return min(vals), max(vals)


def _explicit_counts(Z: TracedSubset, n: int, m: int, level: int) -> tuple[int, int] | None:
    F = CoordSubgroup(level_width(level))
    counts = [sum(1 for f in F if Z.contains(y ^ f)) for y in block_members(n, m) if Z.contains(y)]
    return (min(counts), max(counts)) if counts else None


def ball_counts(Z: TracedSubset, n: int, m: int, level: int, explicit_cap: int = EXPLICIT_CAP) -> BlockCount | None:
    """Counts of ``B_Z(y, F_level)`` for ``y`` in block ``(n, m)``; None if the block misses ``Z``."""
    c = cantor(n, m)
    got = _structural_counts(Z, n, m, level)
    route = "structural"
    if chain_size(n) * chain_size(level) <= explicit_cap:
        ex = _explicit_counts(Z, n, m, level)
        if ex != got:
            raise AssertionError(f"block ({n}, {m}) level {level}: explicit {ex} vs structural {got}")
        route = "explicit"
    if got is None:
        return None
    return BlockCount((n, m), c, got[0], got[1], c + 1 >= level, route)


# ---------------------------------------------------------------------------
# the four conditions


STATED_C7 = "for every F there is a finite Y' with |B_X(y, H)| >= l off Y'"
IMPLEMENTED_C7 = "for each probe F_j: |B_X(y, F_j)| <= l off a finite Y' of non-local blocks"


@dataclass
class ConditionOutcome:
    level: int
    threshold: int
    relation: str
    blocks: list
    exceptional: list = field(default_factory=list)
    nonlocal_blocks: list = field(default_factory=list)
    passed: bool = False

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "threshold": self.threshold,
            "relation": self.relation,
            "blocks": [b.to_json() for b in self.blocks],
            "exceptional": [list(b) for b in self.exceptional],
            "nonlocal": [list(b) for b in self.nonlocal_blocks],
            "pass": self.passed,
        }


@dataclass
class ConditionReport:
    seeds: tuple[BinarySeed, BinarySeed]
    s: int
    t: int
    k: int
    l: int
    cantor_max: int
    probes: tuple[int, ...]
    c6: ConditionOutcome
    c7: list
    c8: ConditionOutcome
    c9: list
    traces: list
    partition_ok: bool
    removed: tuple = ((), ())

    @property
    def passed(self) -> bool:
        return (self.c6.passed and self.c8.passed and bool(self.c8.blocks) and self.partition_ok
                and all(o.passed for o in self.c7) and all(o.passed for o in self.c9)
                and all(tc.holds for tc in self.traces))

    def conditions_json(self) -> dict:
        return {
            "c6": self.c6.to_json(),
            "c7": {"probes": [o.to_json() for o in self.c7], "stated": STATED_C7, "implemented": IMPLEMENTED_C7},
            "c8": self.c8.to_json(),
            "c9": {"probes": [o.to_json() for o in self.c9]},
            "trace13": [{"block": [tc.n, tc.m], "count": tc.count, "bound": tc.bound, "holds": tc.holds}
                        for tc in self.traces],
            "partition": self.partition_ok,
        }


def _counts(Z: TracedSubset, blocks: Sequence, level: int, explicit_cap: int) -> list:
    out = []
    for n, m in blocks:
        bc = ball_counts(Z, n, m, level, explicit_cap)
        if bc is not None:
            out.append(bc)
    return out


def check_criterion_conditions(
    W: BinarySeed,
    W2: BinarySeed,
    s: int,
    t: int,
    cantor_max: int,
    probes: Sequence[int] | None = None,
    Z: TracedSubset | None = None,
    Z2: TracedSubset | None = None,
    explicit_cap: int = EXPLICIT_CAP,
    max_level: int = MAX_LEVEL,
) -> ConditionReport:
    """Evaluate the four non-asymorphism conditions for ``Z`` (inside ``X_W``) against ``Z2`` (inside ``X_W2``).

    ``Y`` is the part of ``Z`` in ``Y_s``; ``Z2`` splits into ``B`` (levels above
    ``s``) and ``C`` (levels below), with ``k = |F_s|/|F_t|`` and ``l = |F_s|``.
    """
    if W == W2:
        raise SeedError("identical seeds")
    if not s > t:
        raise LocFinError(f"need s > t, got s={s}, t={t}")
    k, l = chain_size(s) // chain_size(t), chain_size(s)
    if not k < l:
        raise LocFinError(f"k = {k} and l = {l} violate k < l (t must be at least 1)")
    if not W.contains(s) or W2.contains(s):
        raise LocFinError(f"s={s} must lie in W \\ W'")
    if s <= shared_max(W, W2):
        raise LocFinError(f"s={s} does not exceed max(W ∩ W')")
    probes = tuple(range(s + 2)) if probes is None else tuple(sorted(set(probes)))
    top = max((s + 1,) + probes)
    if top > max_level:
        raise LocFinError(f"level {top} exceeds the supported maximum {max_level}")
    if any(p < 0 for p in probes):
        raise LocFinError("probe levels must be nonnegative")

    Z = Z or TracedSubset(BlockFamily(W, cantor_max))
    Z2 = Z2 or TracedSubset(BlockFamily(W2, cantor_max))
    if Z.family.seed != W or Z2.family.seed != W2:
        raise LocFinError("traced subsets do not match the seeds")
    check_covering(Z, t)
    check_covering(Z2, t)

    all_blocks = [cantor_inverse(c) for c in range(cantor_max + 1)]
    Y_blocks = [b for b in all_blocks if b[0] == s]
    B_blocks = [b for b in all_blocks if b[0] > s and W2.contains(b[0])]
    C_blocks = [b for b in all_blocks if b[0] < s and W2.contains(b[0])]
    if not Y_blocks:
        raise LocFinError(f"truncation cantor_max={cantor_max} contains no block of Y_{s}")
    partition_ok = not W2.contains(s)

    traces = [block_trace_count(n, m, Z, t) for n, m in Y_blocks]

    H = max(t, s)
    rows = _counts(Z, Y_blocks, H, explicit_cap)
    c6 = ConditionOutcome(H, k, ">=", rows, passed=bool(rows) and all(b.lo >= k for b in rows))

    def probe(Zs, blocks, j, threshold, relation, bad) -> ConditionOutcome:
        rows = _counts(Zs, blocks, j, explicit_cap)
        exc = [b.block for b in rows if bad(b)]
        nl = [b.block for b in rows if not b.local]
        return ConditionOutcome(j, threshold, relation, rows, exc, nl, set(exc) <= set(nl))

    c7 = [probe(Z, Y_blocks, j, l, "<=", lambda b: b.hi > l) for j in probes]

    K = max(t, s + 1)
    rows = _counts(Z2, B_blocks, K, explicit_cap)
    c8 = ConditionOutcome(K, l, ">", rows, passed=all(b.lo > l for b in rows))

    c9 = [probe(Z2, C_blocks, j, k, "<", lambda b: b.hi >= k) for j in probes]

    return ConditionReport((W, W2), s, t, k, l, cantor_max, probes, c6, c7, c8, c9, traces, partition_ok,
                           (tuple(Z.removed_supports()), tuple(Z2.removed_supports())))


# ---------------------------------------------------------------------------
# the refuter


def _branch_codes_after(seed: BinarySeed, skip: int, floor: int, limit: int = 1 << 20):
    for n, code in enumerate(seed.codes(), start=1):
        if code > limit:
            return
        if n > skip and code > floor:
            yield code


def choose_s(W: BinarySeed, W2: BinarySeed, t: int) -> int:
    """Least ``s ∈ W \\ W2`` with ``s > t`` and ``s > max(W ∩ W2)``."""
    if W == W2:
        raise SeedError("identical seeds")
    for s in _branch_codes_after(W, lcp_bound(W, W2), t):
        return s
    raise LocFinError("no admissible s within the seed enumeration bound")


def minimal_truncation(W: BinarySeed, W2: BinarySeed, s: int) -> int:
    """Least Cantor bound that contains a block of ``Y_s`` and a block of ``B``."""
    for b in _branch_codes_after(W2, 0, s):
        return max(cantor(b, 0), cantor(s, 0))
    raise LocFinError("no level of W' above s within the seed enumeration bound")


@dataclass
class LocFinCertificate:
    report: ConditionReport

    @property
    def valid(self) -> bool:
        return self.report.passed

    def to_payload(self) -> dict:
        rep = self.report
        return {
            "case": "locfin",
            "seeds": [str(x) for x in rep.seeds],
            "t": rep.t,
            "s": rep.s,
            "k": rep.k,
            "l": rep.l,
            "probes": list(rep.probes),
            "conditions": rep.conditions_json(),
            "truncation": {"cantor_max": rep.cantor_max},
            "removed": [[list(x) for x in side] for side in rep.removed],
            "verdict": "refuted" if self.valid else "inconclusive",
        }


def refute_locfin_pair(
    W: BinarySeed,
    W2: BinarySeed,
    t: int,
    cantor_max: int | None = None,
    probes: Sequence[int] | None = None,
    Z: TracedSubset | None = None,
    Z2: TracedSubset | None = None,
) -> LocFinCertificate:
    """Certificate that ``X_W`` and ``X_W2`` are not coarsely equivalent via ``Z``, ``Z2`` at scale ``t``.

    The four conditions force a contradiction: an asymorphism would send an
    infinite part of ``Y`` into ``B`` or into ``C``, and the recorded counts
    rule out both.
    """
    if t < 1:
        raise LocFinError("t must be at least 1")
    s = choose_s(W, W2, t)
    need = minimal_truncation(W, W2, s)
    if cantor_max is None:
        cantor_max = need
    elif cantor_max < need:
        raise LocFinError(f"cantor_max={cantor_max} is too small; the blocks used need {need}")
    if Z is None:
        Z = TracedSubset(BlockFamily(W, cantor_max))
    if Z2 is None:
        Z2 = TracedSubset(BlockFamily(W2, cantor_max))
    return LocFinCertificate(check_criterion_conditions(W, W2, s, t, cantor_max, probes, Z, Z2))
