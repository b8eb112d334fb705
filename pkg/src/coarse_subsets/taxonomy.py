"""Thick, thin, large and small subsets, evaluated on finite truncations of ℕ.

``A`` is a subset of the truncation ``ℕ ∩ [0, N]`` with the metric ``|x - y|``:

* large at ``r``: ``B(A, r)`` covers the truncation (points whose ``r``-ball
  reaches past ``N`` are exempt);
* thick at ``r``: some ball ``B(x, r)`` with ``x + r <= N`` lies inside ``A``;
  reported per radius only, never as an absolute verdict;
* thin: off a bounded exceptional set every ``A``-ball ``B_A(x, r)`` is ``{x}``;
  at a truncation this is reported as the exceptional sets per radius and
  a verdict that they stay away from the edge;
* small: ``L \\ A`` is large for every large ``L``; only refutable here, by a
  large ``L`` with ``L \\ A`` not large at the budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

from .ballean import (BalleanError, IntegerLine, PartialBijection, expansion_modulus, expansion_profile,
                      is_large_at)


class TaxonomyError(BalleanError):
    pass


class TaxonomyBudgetError(TaxonomyError):
    """The radius budget is too large for the truncation to answer reliably."""


@dataclass
class TaxonomyReport:
    truncation: tuple[int, int]
    budget: int
    size: int
    large_at: int | None
    thick: dict
    exceptional: dict
    thin_at_budget: bool
    small: str
    small_witness: dict | None = None
    notes: list = field(default_factory=list)

    @property
    def thick_radii(self) -> list[int]:
        return [r for r, c in self.thick.items() if c is not None]

    def to_json(self) -> dict:
        return {
            "truncation": list(self.truncation),
            "budget": self.budget,
            "size": self.size,
            "large": {"radius": self.large_at, "verdict": "large" if self.large_at is not None else "not at budget"},
            "thick": {str(r): {"thick": c is not None, "centre": c} for r, c in self.thick.items()},
            "thin": {"exceptional": {str(r): sorted(e) for r, e in self.exceptional.items()},
                     "thin_at_budget": self.thin_at_budget},
            "small": {"verdict": self.small, "witness": self.small_witness},
            "notes": self.notes,
        }


def _check_line(space) -> IntegerLine:
    if not isinstance(space, IntegerLine) or space.truncation_bound is None:
        raise TaxonomyError("taxonomy is evaluated on truncated integer lines")
    return space


def exceptional_set(space: IntegerLine, A: Iterable[int], r: int) -> frozenset:
    """``{x ∈ A : |B_A(x, r)| > 1}``."""
    sub = space.subspace(A)
    pts = sub.sorted_points
    return frozenset(x for i, x in enumerate(pts)
                     if (i > 0 and x - pts[i - 1] <= r) or (i + 1 < len(pts) and pts[i + 1] - x <= r))


def classify_subset_taxonomy(space: IntegerLine, A: Iterable[int], radius_budget: int) -> TaxonomyReport:
    space = _check_line(space)
    A = space._check_subset(A)
    lo, N = space.sorted_points[0], space.truncation_bound
    if radius_budget < 0:
        raise TaxonomyError("budget must be nonnegative")
    if 2 * radius_budget > N - lo:
        raise TaxonomyBudgetError(f"budget {radius_budget} exceeds the reliability margin of [{lo}, {N}]")
    if not A:
        raise TaxonomyError("empty subset")
    radii = range(radius_budget + 1)

    large_at = next((r for r in radii if is_large_at(space, A, r)), None)

    thick = {}
    for r in radii:
        thick[r] = next((x for x in sorted(A) if x + r <= N and space.ball(x, r) <= A), None)

    exceptional = {r: exceptional_set(space, A, r) for r in radii}
    middle = (lo + N) // 2
    thin = all(x <= middle for e in exceptional.values() for x in e)

    rest = space.points - A
    witness = None
    small = "inconclusive"
    if not rest or not any(is_large_at(space, rest, r) for r in radii):
        small = "refuted"
        gap = next((x for x in sorted(space.points)
                    if x + radius_budget <= N and not (space.ball(x, radius_budget) & rest)), None)
        witness = {"L": "truncation", "uncovered_point": gap}
    notes = ["thickness is reported per radius, relative to the truncation",
             "smallness is only ever refuted; 'inconclusive' is not a positive verdict"]
    return TaxonomyReport((lo, N), radius_budget, len(A), large_at, thick, exceptional, thin, small,
                          witness, notes)


# ---------------------------------------------------------------------------
# subset descriptions


def space_from_json(obj: dict) -> IntegerLine:
    if not isinstance(obj, dict) or obj.get("kind") != "interval":
        raise TaxonomyError("space spec must be {'kind': 'interval', 'lo': .., 'hi': ..}")
    try:
        lo, hi = int(obj["lo"]), int(obj["hi"])
    except (KeyError, ValueError, TypeError) as exc:
        raise TaxonomyError(f"malformed space spec {obj!r}") from exc
    if not 0 <= lo <= hi:
        raise TaxonomyError("need 0 <= lo <= hi")
    return IntegerLine.interval(lo, hi)


def subset_from_json(obj: dict, space: IntegerLine) -> frozenset:
    """Subset described by ``points``, ``arithmetic``, ``squares``, ``triangular`` or ``geometric_blocks``."""
    if not isinstance(obj, dict):
        raise TaxonomyError("set spec must be a JSON object")
    kind = obj.get("kind")
    pts = space.points
    if kind == "points":
        out = frozenset(obj.get("points", ()))
        if not out <= pts:
            raise TaxonomyError("set points lie outside the truncation")
        return out
    if kind == "arithmetic":
        step, offset = int(obj.get("step", 2)), int(obj.get("offset", 0))
        if step < 1:
            raise TaxonomyError("step must be positive")
        return frozenset(x for x in pts if x >= offset and (x - offset) % step == 0)
    if kind == "squares":
        return frozenset(x for x in pts if math.isqrt(x) ** 2 == x)
    if kind == "triangular":
        return frozenset(x for x in pts if math.isqrt(8 * x + 1) ** 2 == 8 * x + 1)
    if kind == "geometric_blocks":
        base, factor = int(obj.get("base", 4)), int(obj.get("factor", 2))
        if base < 2 or factor < 1:
            raise TaxonomyError("need base >= 2 and factor >= 1")
        out, b = set(), 1
        while b <= space.truncation_bound:
            out.update(x for x in range(b, factor * b + 1) if x in pts)
            b *= base
        return frozenset(out)
    raise TaxonomyError(f"unknown set kind {kind!r}")


# ---------------------------------------------------------------------------
# thin pairs and large subsets


def positive_expansion_centres(f: PartialBijection, budget: int) -> dict:
    """Per radius, the centres whose ball is not sent to a single point's ball of radius 0."""
    return {a: frozenset(x for x, v in expansion_profile(f, a).items() if v is None or v > 0)
            for a in range(budget + 1)}


@dataclass
class ThinPairCheck:
    forward: dict
    inverse: dict
    exceptional_source: dict
    exceptional_target: dict

    @property
    def ok(self) -> bool:
        return all(self.forward[a] <= self.exceptional_source[a] for a in self.forward) and \
            all(self.inverse[a] <= self.exceptional_target[a] for a in self.inverse)


def check_thin_pair_bijection(f: PartialBijection, budget: int) -> ThinPairCheck:
    """Check that ``f`` and its inverse move balls only at the exceptional points of source and target."""
    S, T = _check_line(f.source), _check_line(f.target)
    return ThinPairCheck(
        positive_expansion_centres(f, budget),
        positive_expansion_centres(f.inverse(), budget),
        {a: exceptional_set(S, S.points, a) for a in range(budget + 1)},
        {a: exceptional_set(T, T.points, a) for a in range(budget + 1)},
    )


@dataclass
class LargeEquivalence:
    r: int
    bijection: PartialBijection
    source_dense: bool
    target_dense: bool
    forward: object
    inverse: object

    @property
    def ok(self) -> bool:
        def within(tab):
            return tab.finite and all(v <= a + 2 * self.r for a, v in tab.entries.items())

        return self.source_dense and self.target_dense and within(self.forward) and within(self.inverse)


def nearest_point_equivalence(space: IntegerLine, L1: Iterable[int], L2: Iterable[int], r: int,
                              budget: int | None = None) -> LargeEquivalence:
    """Match two sets large at ``r`` by left-greedy nearest points.

    Each ``x ∈ L1`` (increasing) takes the least unused ``z ∈ L2`` with
    ``|x - z| <= r``. The matched parts ``Y ⊆ L1``, ``Y' ⊆ L2`` are ``2r``-dense
    in ``L1`` and ``L2`` and the matching moves points by at most ``r``, so its
    moduli satisfy ``μ(α) <= α + 2r`` in both directions.
    """
    space = _check_line(space)
    L1, L2 = space._check_subset(L1), space._check_subset(L2)
    for L in (L1, L2):
        if not is_large_at(space, L, r):
            raise TaxonomyError(f"input set is not large at r={r}")
    targets = sorted(L2)
    used: set = set()
    pairs = {}
    for x in sorted(L1):
        z = next((z for z in targets if abs(z - x) <= r and z not in used), None)
        if z is not None:
            used.add(z)
            pairs[x] = z
    N = space.truncation_bound
    Y = IntegerLine(pairs, N)
    Yp = IntegerLine(pairs.values(), N)
    f = PartialBijection(Y, Yp, pairs)
    budget = r if budget is None else budget
    return LargeEquivalence(
        r, f,
        bool(is_large_at(space.subspace(L1), pairs, 2 * r)),
        bool(is_large_at(space.subspace(L2), pairs.values(), 2 * r)),
        expansion_modulus(f, budget),
        expansion_modulus(f.inverse(), budget),
    )
