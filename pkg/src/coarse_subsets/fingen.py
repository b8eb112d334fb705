"""Interval families in ℕ and the counting refutation for finitely generated groups.

A geodesic ray in a Cayley graph is isometric to ℕ, so it is enough to build
pairwise coarsely non-equivalent subsets of ℕ. We fix the interval sequence

    a_0 = 1,  b_n = a_n (n + 1) + 1,  a_{n+1} = b_n + 1,

which gives ``b_n - a_n = n a_n + 1 > n a_n``, and put ``I_W = ⋃_{n ∈ W} [a_n, b_n]``
for each branch set ``W``. All arithmetic is exact; the endpoints grow
faster than factorials, so subsets are handled as unions of intervals and
never enumerated pointwise.
"""

from __future__ import annotations

import bisect
import dataclasses
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .adfamily import BinarySeed, SeedError, lcp_bound, shared_max
from .ballean import AsymorphismReport, IntegerLine, MetricSpace, PartialBijection, is_asymorphism_at_budget


class RefutationError(ValueError):
    """A precondition of the counting argument does not hold."""


class CountingArgumentError(RefutationError):
    pass


class LargenessError(CountingArgumentError):
    pass


class GapViolation(CountingArgumentError):
    pass


# ---------------------------------------------------------------------------
# interval unions


class IntervalSet:
    """Finite union of closed integer intervals, kept sorted and merged."""

    def __init__(self, intervals: Iterable[tuple[int, int]] = ()):
        merged: list[list[int]] = []
        for lo, hi in sorted((int(a), int(b)) for a, b in intervals):
            if lo > hi:
                continue
            if merged and lo <= merged[-1][1] + 1:
                merged[-1][1] = max(merged[-1][1], hi)
            else:
                merged.append([lo, hi])
        self.intervals: tuple[tuple[int, int], ...] = tuple((a, b) for a, b in merged)
        self._los = [a for a, _ in self.intervals]

    @classmethod
    def from_points(cls, points: Iterable[int]) -> "IntervalSet":
        return cls((p, p) for p in points)

    def __contains__(self, x: int) -> bool:
        i = bisect.bisect_right(self._los, x) - 1
        return i >= 0 and x <= self.intervals[i][1]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, IntervalSet) and self.intervals == other.intervals

    def __repr__(self) -> str:
        return f"IntervalSet({list(self.intervals)})"

    def __bool__(self) -> bool:
        return bool(self.intervals)

    def count(self) -> int:
        return sum(b - a + 1 for a, b in self.intervals)

    def points(self) -> Iterator[int]:
        for a, b in self.intervals:
            yield from range(a, b + 1)

    def min(self) -> int:
        return self.intervals[0][0]

    def max(self) -> int:
        return self.intervals[-1][1]

    def restrict(self, lo: int, hi: int) -> "IntervalSet":
        return IntervalSet((max(a, lo), min(b, hi)) for a, b in self.intervals if b >= lo and a <= hi)

    def minus(self, lo: int, hi: int) -> "IntervalSet":
        out = []
        for a, b in self.intervals:
            if b < lo or a > hi:
                out.append((a, b))
                continue
            if a < lo:
                out.append((a, lo - 1))
            if b > hi:
                out.append((hi + 1, b))
        return IntervalSet(out)

    def issubset(self, other: "IntervalSet") -> bool:
        for a, b in self.intervals:
            i = bisect.bisect_right(other._los, a) - 1
            if i < 0 or other.intervals[i][1] < b:
                return False
        return True

    def max_gap(self) -> int | None:
        """Largest difference between consecutive points (None if fewer than two)."""
        if not self.intervals or (len(self.intervals) == 1 and self.intervals[0][0] == self.intervals[0][1]):
            return None
        gap = 1 if any(b > a for a, b in self.intervals) else 0
        for (_, b), (a, _) in zip(self.intervals, self.intervals[1:]):
            gap = max(gap, a - b)
        return gap

    def expand(self, r: int) -> "IntervalSet":
        return IntervalSet((max(0, a - r), b + r) for a, b in self.intervals)

    def covers(self, Y: "IntervalSet", r: int) -> bool:
        """Every point of ``Y`` lies within ``r`` of this set."""
        return Y.issubset(self.expand(r))


# ---------------------------------------------------------------------------
# the interval sequence


@dataclass(frozen=True)
class IntervalSequence:
    entries: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        for n, (a, b) in enumerate(self.entries):
            if not b - a > n * a:
                raise ValueError(f"interval {n} = [{a}, {b}] violates b - a > n a")
            if n and not self.entries[n - 1][1] < a:
                raise ValueError(f"interval {n} does not start after interval {n - 1}")

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.entries)

    def __getitem__(self, n: int) -> tuple[int, int]:
        if not 0 <= n < len(self.entries):
            raise RefutationError(f"interval sequence has {len(self.entries)} entries; index {n} needs length {n + 1}")
        return self.entries[n]

    def index_of(self, x: int) -> int | None:
        """Index ``n`` with ``x ∈ [a_n, b_n]``, if any stored interval contains ``x``."""
        los = [a for a, _ in self.entries]
        i = bisect.bisect_right(los, x) - 1
        if i >= 0 and x <= self.entries[i][1]:
            return i
        return None


_canonical: list[tuple[int, int]] = []


def _extend_canonical(count: int) -> None:
    while len(_canonical) < count:
        n = len(_canonical)
        a = 1 if n == 0 else _canonical[-1][1] + 1
        _canonical.append((a, a * (n + 1) + 1))


def generate_intervals(count: int) -> IntervalSequence:
    if count < 1:
        raise ValueError("count must be at least 1")
    _extend_canonical(count)
    return IntervalSequence(tuple(_canonical[:count]))


def canonical_interval(n: int) -> tuple[int, int]:
    _extend_canonical(n + 1)
    return _canonical[n]


def _canonical_length_covering(x: int) -> int:
    n = 0
    while canonical_interval(n)[1] < x:
        n += 1
    return n + 1


@dataclass(frozen=True)
class IntervalUnionSet:
    """``I_W ∩ [0, x_max]`` with lazy membership beyond ``x_max``."""

    seed: BinarySeed
    sequence: IntervalSequence
    x_max: int
    intervals: IntervalSet

    def points(self) -> list[int]:
        return list(self.intervals.points())

    def __contains__(self, x: int) -> bool:
        if x <= self.x_max:
            return x in self.intervals
        n = 0
        while canonical_interval(n)[1] < x:
            n += 1
        return canonical_interval(n)[0] <= x and self.seed.contains(n)


def assemble_interval_union(seed: BinarySeed, sequence: IntervalSequence, x_max: int) -> IntervalUnionSet:
    if sequence.entries[-1][1] < x_max:
        if sequence.entries == tuple(_canonical[: len(sequence)]):
            need = _canonical_length_covering(x_max)
            raise RefutationError(f"sequence too short: covering x_max={x_max} needs length {need}")
        raise RefutationError(f"sequence ends at {sequence.entries[-1][1]} < x_max={x_max}")
    parts = [(a, min(b, x_max)) for n, (a, b) in enumerate(sequence.entries) if a <= x_max and seed.contains(n)]
    return IntervalUnionSet(seed, sequence, x_max, IntervalSet(parts))


def interval_union_upto(seed: BinarySeed, sequence: IntervalSequence, last_index: int) -> IntervalSet:
    """``⋃{I_n : n ∈ W, n <= last_index}``."""
    return IntervalSet(sequence[n] for n in range(last_index + 1) if seed.contains(n))


# ---------------------------------------------------------------------------
# geodesic ray in ℤ^d


@dataclass(frozen=True)
class GeodesicRaySpec:
    """Ray ``v_n = n e_1`` in the Cayley graph of ℤ^d with generators ±e_i."""

    dimension: int

    def __post_init__(self) -> None:
        if self.dimension < 1:
            raise ValueError("dimension must be at least 1")

    def generators(self) -> list[tuple[int, ...]]:
        d = self.dimension
        gens = []
        for i in range(d):
            for s in (1, -1):
                gens.append(tuple(s if j == i else 0 for j in range(d)))
        return gens

    def vertex(self, n: int) -> tuple[int, ...]:
        return (n,) + (0,) * (self.dimension - 1)


class BFSBudgetExceeded(RuntimeError):
    pass


def cayley_bfs(start: tuple, generators: Sequence[tuple], max_depth: int, budget: int) -> dict:
    """Word-metric distances from ``start`` to every vertex within ``max_depth``."""
    dist = {start: 0}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        dv = dist[v]
        if dv == max_depth:
            continue
        for g in generators:
            w = tuple(a + b for a, b in zip(v, g))
            if w not in dist:
                dist[w] = dv + 1
                if len(dist) > budget:
                    raise BFSBudgetExceeded(f"BFS visited more than {budget} vertices")
                queue.append(w)
    return dist


@dataclass(frozen=True)
class RayReport:
    spec: GeodesicRaySpec
    n_max: int
    distances: dict  # (n, m) -> word distance
    geodesic: bool
    asymorphism: AsymorphismReport


def geodesic_reduction(spec: GeodesicRaySpec, n_max: int, bfs_budget: int = 1_000_000) -> RayReport:
    """Check by BFS that the ray is geodesic up to ``n_max`` and compare it with ℕ."""
    gens = spec.generators()
    dist: dict = {}
    visited = 0
    for n in range(n_max + 1):
        table = cayley_bfs(spec.vertex(n), gens, n_max, bfs_budget - visited)
        visited += len(table)
        for m in range(n_max + 1):
            dist[(n, m)] = table[spec.vertex(m)]
    geodesic = all(d == abs(n - m) for (n, m), d in dist.items())

    ray_pts = [spec.vertex(n) for n in range(n_max + 1)]
    index = {v: n for n, v in enumerate(ray_pts)}
    ray = MetricSpace(ray_pts, lambda u, v: dist[(index[u], index[v])],
                      reliable=lambda v, r: index[v] + r <= n_max)
    line = IntegerLine(range(n_max + 1), n_max)
    f = PartialBijection(ray, line, index)
    return RayReport(spec, n_max, dist, geodesic, is_asymorphism_at_budget(f, n_max))


# ---------------------------------------------------------------------------
# the refutation


def _radius_growth(a: int, b: int, r: int) -> bool:
    return b - a > 2 * r * a


def _scale_growth(a: int, b: int, t: int) -> bool:
    return b - a > 2 * t


_MAX_WITNESS = 1 << 20


def _first_witness(W: BinarySeed, skip: int, floor: int, r: int, t: int) -> int:
    for n, m in enumerate(W.codes(), start=1):
        if m > _MAX_WITNESS:
            raise RefutationError("no witness interval below the search horizon")
        if n <= skip or m <= floor:
            continue
        a, b = canonical_interval(m)
        if _radius_growth(a, b, r) and _scale_growth(a, b, t):
            return m
    raise AssertionError("unreachable")


def find_witness_interval(W: BinarySeed, W2: BinarySeed, r: int, t: int) -> int:
    """Least ``m ∈ W \\ W2`` above ``max(W ∩ W2)`` with ``b_m - a_m > 2r a_m`` and ``> 2t``."""
    if W == W2:
        raise SeedError("identical seeds")
    if r < 1:
        raise RefutationError("r must be at least 1")
    return _first_witness(W, lcp_bound(W, W2), 0, r, t)


@dataclass(frozen=True)
class FinGenCertificate:
    seeds: tuple[BinarySeed, BinarySeed]
    r: int
    t: int
    m: int
    a_m: int
    b_m: int
    lcp: int
    shared_max: int
    m_in_W: bool
    m_notin_W2: bool
    radius_growth: bool
    scale_growth: bool
    gap_bound: int
    max_gap: int | None
    trace: tuple[tuple[int, int], ...]
    count: int
    k_lb: Fraction
    capacity: int
    default_subsets: bool
    inverse: "FinGenCertificate | None" = field(default=None)

    @property
    def k(self) -> int:
        return self.count - 1

    @property
    def meets_stated_bound(self) -> bool:
        return self.k >= self.k_lb

    @property
    def valid(self) -> bool:
        ok = (self.m_in_W and self.m_notin_W2 and self.m > self.shared_max and self.radius_growth and self.scale_growth
              and self.k_lb > self.capacity and self.k > self.capacity
              and self.max_gap is not None and self.max_gap <= self.gap_bound)
        return ok and (self.inverse is None or self.inverse.valid)

    def to_payload(self) -> dict:
        a, b = self.a_m, self.b_m
        out = {
            "case": "fingen",
            "seeds": [str(s) for s in self.seeds],
            "r": self.r,
            "t": self.t,
            "m": self.m,
            "interval": {"a": a, "b": b},
            "witness": {
                "lcp": self.lcp,
                "shared_max": self.shared_max,
                "m_in_W": self.m_in_W,
                "m_notin_W2": self.m_notin_W2,
            },
            "inequalities": {
                "length": b - a,
                "radius_growth_rhs": 2 * self.r * a,
                "radius_growth": self.radius_growth,
                "scale_growth_rhs": 2 * self.t,
                "scale_growth": self.scale_growth,
                "gap_bound": self.gap_bound,
                "max_gap": self.max_gap,
                "count": self.count,
                "k": self.k,
                "k_lb": self.k_lb,
                "k_meets_stated_bound": self.meets_stated_bound,
                "capacity": self.capacity,
            },
            "trace": [[lo, hi] for lo, hi in self.trace],
            "default_subsets": self.default_subsets,
            "verdict": "refuted" if self.valid else "invalid",
        }
        if self.inverse is not None:
            inv = self.inverse.to_payload()
            out["inverse"] = {k: inv[k] for k in ("m", "interval", "witness", "inequalities", "trace", "verdict")}
        return out


def _as_interval_set(X) -> IntervalSet:
    if isinstance(X, IntervalSet):
        return X
    if isinstance(X, IntervalUnionSet):
        return X.intervals
    return IntervalSet.from_points(X)


def verify_counting_argument(
    X,
    X2,
    r: int,
    t: int,
    m: int,
    sequence: IntervalSequence,
    seeds: tuple[BinarySeed, BinarySeed],
) -> FinGenCertificate:
    """Evaluate the counting argument at witness interval ``I_m``.

    ``X`` and ``X2`` are large subsets of ``I_W`` and ``I_W2`` (``None`` means the
    whole set). With ``Z = X ∩ I_m`` listed increasingly as ``z_0 < ... < z_k``,
    consecutive points are at most ``2r + 2`` apart; a map with the bounds
    ``t`` at radius ``2r + 2`` cannot push ``Z`` into ``[1, a_m - 1]`` because
    ``k`` exceeds that capacity.
    """
    W, W2 = seeds
    if r < 1:
        raise RefutationError("r must be at least 1")
    a, b = sequence[m]
    m_in_W, m_notin_W2 = W.contains(m), not W2.contains(m)
    smax = shared_max(W, W2)
    if not m_in_W or not m_notin_W2:
        raise RefutationError(f"m={m} is not in W \\ W'")
    if m <= smax:
        raise RefutationError(f"m={m} does not exceed max(W ∩ W') = {smax}")
    c4, c5 = _radius_growth(a, b, r), _scale_growth(a, b, t)
    if not c4:
        raise RefutationError(f"b_m - a_m = {b - a} is not > 2r a_m = {2 * r * a}")
    if not c5:
        raise RefutationError(f"b_m - a_m = {b - a} is not > 2t = {2 * t}")

    # largeness is checked on I_W ∩ [0, b_m]; points of X up to b_m + r may cover it
    last = min(m + 1, len(sequence) - 1)
    zone, ext = interval_union_upto(W, sequence, m), interval_union_upto(W, sequence, last)
    default = X is None and X2 is None
    Xs = ext if X is None else _as_interval_set(X)
    Xw = Xs.restrict(0, b + r)
    if not Xw.issubset(ext):
        raise LargenessError("X is not a subset of I_W")
    if not Xw.covers(zone, r):
        raise LargenessError(f"X is not large in I_W at radius {r}")
    if X2 is not None:
        zone2, ext2 = interval_union_upto(W2, sequence, m), interval_union_upto(W2, sequence, last)
        X2w = _as_interval_set(X2).restrict(0, b + r)
        if not X2w.issubset(ext2):
            raise LargenessError("X' is not a subset of I_W'")
        if not X2w.covers(zone2, r):
            raise LargenessError(f"X' is not large in I_W' at radius {r}")

    Z = Xs.restrict(a, b)
    gap = Z.max_gap()
    gap_bound = 2 * r + 2
    if not Z or (gap is None and Z.count() != 1) or (gap is not None and gap > gap_bound):
        raise GapViolation(f"consecutive points of X ∩ I_m are {gap} apart, more than {gap_bound}")
    count = Z.count()
    k_lb = Fraction(b - a, 2 * r) - 1
    capacity = a - 1
    cert = FinGenCertificate(
        seeds=(W, W2), r=r, t=t, m=m, a_m=a, b_m=b, lcp=lcp_bound(W, W2), shared_max=smax,
        m_in_W=m_in_W, m_notin_W2=m_notin_W2, radius_growth=c4, scale_growth=c5, gap_bound=gap_bound,
        max_gap=gap, trace=Z.intervals, count=count, k_lb=k_lb, capacity=capacity,
        default_subsets=default,
    )
    if not count - 1 > capacity:
        raise CountingArgumentError(f"|Z| - 1 = {count - 1} does not exceed the capacity a_m - 1 = {capacity}")
    return cert


def refute_fingen_pair(
    W: BinarySeed,
    W2: BinarySeed,
    r: int,
    t: int,
    X=None,
    X2=None,
) -> FinGenCertificate:
    """Certificate that ``I_W`` and ``I_W2`` admit no asymorphism between large subsets at scale ``(r, t)``.

    Carries the forward witness ``m`` and, for the case where the image of
    ``z_0`` lies beyond ``b_m``, an inverse witness ``s ∈ W2 \\ W`` above ``m``
    evaluated for ``f^{-1}``.
    """
    m = find_witness_interval(W, W2, r, t)
    s = _first_witness(W2, lcp_bound(W, W2), m, r, t)
    seq = generate_intervals(max(m, s) + 2)
    cert = verify_counting_argument(X, X2, r, t, m, seq, (W, W2))
    inv = verify_counting_argument(X2, X, r, t, s, seq, (W2, W))
    return dataclasses.replace(cert, inverse=inv)
