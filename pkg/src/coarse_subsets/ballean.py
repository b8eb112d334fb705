"""Truncated balleans, ball operators and coarse-map moduli.

Two ballean flavours are supported. Metric balleans use integer radii and
``B(x, r) = {y : d(x, y) <= r}``. Group balleans use finite radius sets and
``B(g, F) = Fg | {g}``; a nested chain of radius sets can be attached so that
radii may also be named by their chain index.

Every space carries an optional truncation: the host universe was cut at
some bound, and balls that might reach past it are *boundary-unreliable*.
Decisions that quantify over all points skip unreliable centres and report
how many were skipped.
"""

from __future__ import annotations

import bisect
import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Collection, Hashable, Iterable, Iterator, Mapping, Sequence

Point = Hashable


class BalleanError(ValueError):
    """Invalid point, radius or map for a space."""


class FiniteSpace:
    """A finite truncation of a ballean.

    Subclasses implement ``_ball``, ``radius_at``, ``radius_index`` and
    ``is_reliable``. Public operators validate their inputs and delegate.
    """

    points: frozenset

    # -- to be provided by subclasses -------------------------------------
    def _ball(self, x: Point, r: Any) -> frozenset:
        raise NotImplementedError

    def _check_radius(self, r: Any) -> None:
        raise NotImplementedError

    def radius_at(self, index: int) -> Any:
        """Radius with the given index in the space's radius scale."""
        raise NotImplementedError

    def radius_index(self, x: Point, y: Point) -> int | None:
        """Smallest radius index ``i`` with ``y in B(x, radius_at(i))``."""
        raise NotImplementedError

    def is_reliable(self, x: Point, r: Any) -> bool:
        return True

    def subspace(self, Y: Iterable[Point]) -> "FiniteSpace":
        raise NotImplementedError

    # -- shared machinery --------------------------------------------------
    def _check_point(self, x: Point) -> None:
        if x not in self.points:
            raise BalleanError(f"unknown point {x!r}")

    def _check_subset(self, A: Iterable[Point]) -> frozenset:
        A = frozenset(A)
        extra = A - self.points
        if extra:
            raise BalleanError(f"{len(extra)} points outside the space, e.g. {next(iter(extra))!r}")
        return A

    def _star_ball(self, x: Point, r: Any) -> frozenset:
        return frozenset(y for y in self.points if x in self._ball(y, r))

    def ball(self, x: Point, r: Any) -> frozenset:
        self._check_point(x)
        self._check_radius(r)
        return self._ball(x, r)

    def star_ball(self, x: Point, r: Any) -> frozenset:
        self._check_point(x)
        self._check_radius(r)
        return self._star_ball(x, r)

    def set_ball(self, A: Iterable[Point], r: Any) -> frozenset:
        A = self._check_subset(A)
        self._check_radius(r)
        out: set = set()
        for a in A:
            out |= self._ball(a, r)
        return frozenset(out)

    def diameter_index(self) -> int:
        """Largest radius index between two stored points (0 for singletons)."""
        best = 0
        for x, y in itertools.combinations(self.points, 2):
            i = self.radius_index(x, y)
            if i is not None and i > best:
                best = i
        return best


# ---------------------------------------------------------------------------
# metric flavour


class MetricSpace(FiniteSpace):
    """Finite metric ballean with integer radii.

    ``reliable(x, r)`` may be supplied to mark balls that could reach past a
    truncation; by default the space is treated as complete.
    """

    def __init__(
        self,
        points: Iterable[Point],
        dist: Callable[[Point, Point], int],
        truncation_bound: Any = None,
        reliable: Callable[[Point, int], bool] | None = None,
    ):
        self.points = frozenset(points)
        self.dist = dist
        self.truncation_bound = truncation_bound
        self._reliable = reliable

    def _check_radius(self, r: Any) -> None:
        if not isinstance(r, int) or isinstance(r, bool) or r < 0:
            raise BalleanError(f"metric radius must be a nonnegative integer, got {r!r}")

    def _ball(self, x: Point, r: int) -> frozenset:
        return frozenset(y for y in self.points if self.dist(x, y) <= r)

    def _star_ball(self, x: Point, r: int) -> frozenset:
        return self._ball(x, r)

    def radius_at(self, index: int) -> int:
        return index

    def radius_index(self, x: Point, y: Point) -> int:
        return self.dist(x, y)

    def is_reliable(self, x: Point, r: int) -> bool:
        return True if self._reliable is None else self._reliable(x, r)

    def subspace(self, Y: Iterable[Point]) -> "MetricSpace":
        return MetricSpace(self._check_subset(Y), self.dist, self.truncation_bound, self._reliable)


class IntegerLine(MetricSpace):
    """A finite subset of the natural numbers with ``d(x, y) = |x - y|``.

    If ``truncation_bound`` is given, the set is understood as the trace of an
    infinite set on ``[0, truncation_bound]``; a ball ``B(x, r)`` is reliable
    only when ``x + r <= truncation_bound``.
    """

    def __init__(self, points: Iterable[int], truncation_bound: int | None = None):
        pts = sorted(set(points))
        if pts and pts[0] < 0:
            raise BalleanError("IntegerLine points must be natural numbers")
        if truncation_bound is not None and pts and pts[-1] > truncation_bound:
            raise BalleanError("points exceed the truncation bound")
        self.sorted_points = tuple(pts)
        super().__init__(pts, _abs_dist, truncation_bound)

    @classmethod
    def interval(cls, lo: int, hi: int, truncated: bool = True) -> "IntegerLine":
        """``N ∩ [lo, hi]``; truncated at ``hi`` unless ``truncated=False``."""
        return cls(range(lo, hi + 1), hi if truncated else None)

    def _ball(self, x: int, r: int) -> frozenset:
        i = bisect.bisect_left(self.sorted_points, x - r)
        j = bisect.bisect_right(self.sorted_points, x + r)
        return frozenset(self.sorted_points[i:j])

    def is_reliable(self, x: int, r: int) -> bool:
        return self.truncation_bound is None or x + r <= self.truncation_bound

    def edge_distance(self, x: int) -> int | None:
        """Distance from ``x`` to the truncation edge (None when complete)."""
        return None if self.truncation_bound is None else self.truncation_bound - x

    def subspace(self, Y: Iterable[int]) -> "IntegerLine":
        return IntegerLine(self._check_subset(Y), self.truncation_bound)

    def __repr__(self) -> str:
        n = len(self.sorted_points)
        return f"IntegerLine({n} points, truncation_bound={self.truncation_bound})"


def _abs_dist(x: int, y: int) -> int:
    return abs(x - y)


# ---------------------------------------------------------------------------
# group flavour


class GroupSpace(FiniteSpace):
    """Subset of a group with balls ``B(g, F) = (Fg | {g}) ∩ points``.

    ``chain`` lists nested radius sets addressable by index (``F_0 ⊂ F_1 ⊂ ...``).
    ``within(g)`` tells whether ``g`` lies in the truncated part of the host
    group where membership in ``points`` has been decided.
    """

    def __init__(
        self,
        points: Iterable[Point],
        mul: Callable[[Point, Point], Point],
        inv: Callable[[Point], Point],
        identity: Point,
        is_element: Callable[[Point], bool],
        chain: Sequence[Collection] = (),
        within: Callable[[Point], bool] | None = None,
    ):
        self.points = frozenset(points)
        self.mul = mul
        self.inv = inv
        self.identity = identity
        self.is_element = is_element
        self.chain = tuple(chain)
        self.within = within

    def resolve(self, r: Any) -> Collection:
        if isinstance(r, int) and not isinstance(r, bool):
            if not 0 <= r < len(self.chain):
                raise BalleanError(f"chain radius index {r} out of range")
            return self.chain[r]
        return r

    def _check_radius(self, r: Any) -> None:
        F = self.resolve(r)
        for f in _sample_elements(F):
            if not self.is_element(f):
                raise BalleanError(f"radius contains {f!r}, which is not an element of the ambient group")

    def _ball(self, x: Point, r: Any) -> frozenset:
        F = self.resolve(r)
        out = {x}
        for f in F:
            g = self.mul(f, x)
            if g in self.points:
                out.add(g)
        return frozenset(out)

    def _star_ball(self, x: Point, r: Any) -> frozenset:
        F = self.resolve(r)
        out = {x}
        for f in F:
            g = self.mul(self.inv(f), x)
            if g in self.points:
                out.add(g)
        return frozenset(out)

    def radius_at(self, index: int) -> Collection:
        return self.resolve(index)

    def radius_index(self, x: Point, y: Point) -> int | None:
        if x == y:
            return 0
        d = self.mul(y, self.inv(x))
        for i, F in enumerate(self.chain):
            if d in F:
                return i
        return None

    def is_reliable(self, x: Point, r: Any) -> bool:
        if self.within is None:
            return True
        return all(self.within(self.mul(f, x)) for f in self.resolve(r))

    def product(self, F: Any, G: Any) -> frozenset:
        """The product set ``FG``."""
        return frozenset(self.mul(f, g) for f in self.resolve(F) for g in self.resolve(G))

    def inverse_set(self, F: Any) -> frozenset:
        return frozenset(self.inv(f) for f in self.resolve(F))

    def subspace(self, Y: Iterable[Point]) -> "GroupSpace":
        return GroupSpace(self._check_subset(Y), self.mul, self.inv, self.identity,
                          self.is_element, self.chain, self.within)


def _sample_elements(F: Collection) -> Iterable:
    if isinstance(F, CoordSubgroup):
        return ()
    return F


# -- the elementary abelian 2-group ⊕_ω Z_2 --------------------------------
#
# Elements are frozensets of coordinate indices (the support); the group
# operation is symmetric difference and every element is its own inverse.


def f2_add(g: frozenset, h: frozenset) -> frozenset:
    return g ^ h


def f2_unit(i: int) -> frozenset:
    return frozenset((i,))


def is_f2_element(g: Any) -> bool:
    return isinstance(g, frozenset) and all(isinstance(i, int) and i >= 0 for i in g)


class CoordSubgroup(Collection):
    """The subgroup of ⊕_ω Z_2 supported on coordinates ``[0, width)``."""

    def __init__(self, width: int):
        if width < 0:
            raise BalleanError("subgroup width must be nonnegative")
        self.width = width

    def __contains__(self, g: object) -> bool:
        return is_f2_element(g) and all(i < self.width for i in g)  # type: ignore[union-attr]

    def __iter__(self) -> Iterator[frozenset]:
        coords = range(self.width)
        for k in range(self.width + 1):
            for c in itertools.combinations(coords, k):
                yield frozenset(c)

    def __len__(self) -> int:
        return 1 << self.width

    def __eq__(self, other: object) -> bool:
        if isinstance(other, CoordSubgroup):
            return self.width == other.width
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("CoordSubgroup", self.width))

    def __repr__(self) -> str:
        return f"CoordSubgroup({self.width})"


class F2Space(GroupSpace):
    """Finite subset of ⊕_ω Z_2 with a chain of coordinate subgroups.

    ``widths`` gives the chain ``F_i = CoordSubgroup(widths[i])``.
    ``coord_bound`` truncates the host group to elements supported below it.
    """

    def __init__(self, points: Iterable[frozenset], widths: Sequence[int] = (), coord_bound: int | None = None):
        pts = frozenset(points)
        for p in pts:
            if not is_f2_element(p):
                raise BalleanError(f"{p!r} is not an element of ⊕Z_2")
        self.widths = tuple(widths)
        if any(a > b for a, b in zip(self.widths, self.widths[1:])):
            raise BalleanError("chain widths must be nondecreasing")
        self.coord_bound = coord_bound
        within = None if coord_bound is None else (lambda g: all(i < coord_bound for i in g))
        super().__init__(pts, f2_add, lambda g: g, frozenset(), is_f2_element,
                         [CoordSubgroup(w) for w in self.widths], within)

    def _ball(self, x: frozenset, r: Any) -> frozenset:
        F = self.resolve(r)
        if isinstance(F, CoordSubgroup) and len(self.points) < len(F):
            w = F.width
            return frozenset(p for p in self.points if all(i < w for i in p ^ x)) | {x}
        return super()._ball(x, F)

    _star_ball = _ball  # every element is an involution

    def _check_radius(self, r: Any) -> None:
        F = self.resolve(r)
        if not isinstance(F, CoordSubgroup):
            super()._check_radius(F)

    def radius_index(self, x: frozenset, y: frozenset) -> int | None:
        d = x ^ y
        if not d:
            return 0
        top = max(d)
        for i, w in enumerate(self.widths):
            if top < w:
                return i
        return None

    def is_reliable(self, x: frozenset, r: Any) -> bool:
        if self.coord_bound is None:
            return True
        F = self.resolve(r)
        if isinstance(F, CoordSubgroup):
            return F.width <= self.coord_bound
        return super().is_reliable(x, F)

    def product(self, F: Any, G: Any) -> Collection:
        F, G = self.resolve(F), self.resolve(G)
        if isinstance(F, CoordSubgroup) and isinstance(G, CoordSubgroup):
            return CoordSubgroup(max(F.width, G.width))
        return super().product(F, G)

    def inverse_set(self, F: Any) -> Collection:
        return self.resolve(F)

    def subspace(self, Y: Iterable[frozenset]) -> "F2Space":
        return F2Space(self._check_subset(Y), self.widths, self.coord_bound)


# ---------------------------------------------------------------------------
# module-level operators


def ball(space: FiniteSpace, x: Point, r: Any) -> frozenset:
    return space.ball(x, r)


def star_ball(space: FiniteSpace, x: Point, r: Any) -> frozenset:
    return space.star_ball(x, r)


def set_ball(space: FiniteSpace, A: Iterable[Point], r: Any) -> frozenset:
    return space.set_ball(A, r)


@dataclass(frozen=True)
class Decision:
    """A truth value plus the number of points skipped as boundary-unreliable."""

    value: bool
    excluded: int = 0

    def __bool__(self) -> bool:
        return self.value


def is_large_at(space: FiniteSpace, Y: Iterable[Point], r: Any) -> Decision:
    """Whether ``B(Y, r)`` covers every point whose ``r``-ball is reliable."""
    Y = space._check_subset(Y)
    covered = space.set_ball(Y, r)
    excluded = 0
    for x in space.points:
        if x in covered:
            continue
        if not space.is_reliable(x, r):
            excluded += 1
            continue
        return Decision(False, excluded)
    return Decision(True, excluded)


# -- ballean axioms -----------------------------------------------------------


@dataclass
class AxiomReport:
    reflexivity_failures: list = field(default_factory=list)
    star_witnesses: dict = field(default_factory=dict)
    composition_witnesses: dict = field(default_factory=dict)
    connectivity_witnesses: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures and not self.reflexivity_failures


def _key(r: Any) -> Any:
    return r if isinstance(r, (int, CoordSubgroup)) else frozenset(r)


def check_ballean_axioms(space: FiniteSpace, radii: Sequence[Any], pairs: Sequence[tuple]) -> AxiomReport:
    """Look for witnesses of the three ballean axioms on a truncation.

    For metric spaces the witnesses are the least integer radii that work;
    for group spaces the canonical sets ``F^{-1} ∪ {e}`` and ``FᵦFₐ ∪ Fₐ ∪ Fᵦ``
    are proposed and verified. Failures are recorded, never raised.
    """
    if not radii or not pairs:
        raise BalleanError("radius and pair samples must be nonempty")
    rep = AxiomReport()
    pts = sorted(space.points, key=repr)

    for a in radii:
        for x in pts:
            if x not in space._ball(x, a):
                rep.reflexivity_failures.append((x, _key(a)))
    if rep.reflexivity_failures:
        rep.failures.append("reflexivity: x not in B(x, r)")

    metric = isinstance(space, MetricSpace)
    diam = space.diameter_index() if metric else None

    def star_ok(a: Any, a2: Any) -> bool:
        return all(space._ball(x, a) <= space._star_ball(x, a2) and space._star_ball(x, a) <= space._ball(x, a2)
                   for x in pts)

    def comp_ok(a: Any, b: Any, g: Any) -> bool:
        for x in pts:
            reach: set = set()
            for y in space._ball(x, a):
                reach |= space._ball(y, b)
            if not reach <= space._ball(x, g):
                return False
        return True

    for a in radii:
        if metric:
            found = next((c for c in range(diam + 1) if star_ok(a, c)), None)
        else:
            cand = _group_union(space, space.inverse_set(a), [space.identity])
            found = cand if star_ok(a, cand) else None
        if found is None:
            rep.failures.append(f"star: no symmetric witness for radius {_key(a)!r}")
        else:
            rep.star_witnesses[_key(a)] = _key(found)

    for a, b in itertools.product(radii, repeat=2):
        if metric:
            found = next((c for c in range(diam + 1) if comp_ok(a, b, c)), None)
        else:
            cand = _group_union(space, space.product(b, a), space.resolve(a), space.resolve(b))
            found = cand if comp_ok(a, b, cand) else None
        if found is None:
            rep.failures.append(f"composition: no witness for ({_key(a)!r}, {_key(b)!r})")
        else:
            rep.composition_witnesses[(_key(a), _key(b))] = _key(found)

    for x, y in pairs:
        space._check_point(x)
        space._check_point(y)
        if metric:
            w = space.radius_index(x, y)
            ok = w <= diam and y in space._ball(x, w)
        else:
            w = frozenset([space.mul(y, space.inv(x))])
            ok = y in space._ball(x, w)
        if ok:
            rep.connectivity_witnesses[(x, y)] = w
        else:
            rep.failures.append(f"connectivity: no radius joins {x!r} to {y!r}")
    return rep


def _group_union(space: GroupSpace, *sets: Collection) -> Collection:
    """Union of radius sets, kept symbolic when one subgroup already contains the rest."""
    subs = [s for s in sets if isinstance(s, CoordSubgroup)]
    if subs:
        big = max(subs, key=lambda s: s.width)
        if all(all(e in big for e in s) if not isinstance(s, CoordSubgroup) else s.width <= big.width
               for s in sets):
            return big
    out: set = set()
    for s in sets:
        out |= set(s)
    return frozenset(out)


# ---------------------------------------------------------------------------
# maps and moduli


class PartialBijection:
    """Finite injective map between the points of two spaces."""

    def __init__(self, source: FiniteSpace, target: FiniteSpace, pairs: Mapping[Point, Point]):
        pairs = dict(pairs)
        if len(set(pairs.values())) != len(pairs):
            raise BalleanError("map is not injective")
        if not set(pairs) <= source.points:
            raise BalleanError("domain is not contained in the source points")
        if not set(pairs.values()) <= target.points:
            raise BalleanError("image is not contained in the target points")
        self.source = source
        self.target = target
        self.pairs = pairs

    def __getitem__(self, x: Point) -> Point:
        return self.pairs[x]

    def __len__(self) -> int:
        return len(self.pairs)

    @property
    def domain(self) -> frozenset:
        return frozenset(self.pairs)

    @property
    def image(self) -> frozenset:
        return frozenset(self.pairs.values())

    def inverse(self) -> "PartialBijection":
        return PartialBijection(self.target, self.source, {v: k for k, v in self.pairs.items()})

    def compose(self, other: "PartialBijection") -> "PartialBijection":
        """``other ∘ self``."""
        return PartialBijection(self.source, other.target,
                                {x: other.pairs[y] for x, y in self.pairs.items() if y in other.pairs})

    def is_total(self) -> bool:
        return self.domain == self.source.points and self.image == self.target.points


@dataclass(frozen=True)
class ModulusTable:
    """``entries[α]`` is the least target radius index bounding images of α-balls.

    ``None`` means no radius in the target scale suffices. ``excluded[α]``
    counts centres skipped because their α-ball was boundary-unreliable;
    ``vacuous`` holds the radii at which every centre was skipped.
    """

    entries: dict
    budget: int
    excluded: dict = field(default_factory=dict)
    vacuous: frozenset = frozenset()

    def __getitem__(self, alpha: int) -> int | None:
        return self.entries[alpha]

    @property
    def finite(self) -> bool:
        return all(v is not None for v in self.entries.values())

    @property
    def reliable(self) -> bool:
        return not self.vacuous

    def is_monotone(self) -> bool:
        vals = [self.entries[a] for a in sorted(self.entries) if a not in self.vacuous]
        return all(v is not None for v in vals) and all(u <= v for u, v in zip(vals, vals[1:]))


def expansion_profile(f: PartialBijection, alpha: int) -> dict:
    """Per-centre expansion at radius index ``alpha``.

    Maps each reliable centre ``x`` to the largest target radius index between
    ``f(x)`` and ``f(y)`` over ``y ∈ B(x, α)`` in the domain (``None`` if some
    pair is beyond the target scale). Unreliable centres are omitted.
    """
    src, tgt = f.source, f.target
    R = src.radius_at(alpha)
    dom = f.domain
    out: dict = {}
    for x in dom:
        if not src.is_reliable(x, R):
            continue
        fx = f.pairs[x]
        best: int | None = 0
        for y in src._ball(x, R):
            if y not in dom or y == x:
                continue
            i = tgt.radius_index(fx, f.pairs[y])
            if i is None:
                best = None
                break
            if i > best:
                best = i
        out[x] = best
    return out


def expansion_modulus(f: PartialBijection, budget: int) -> ModulusTable:
    if not f.pairs:
        raise BalleanError("empty map")
    if budget < 0:
        raise BalleanError("budget must be nonnegative")
    entries: dict = {}
    excluded: dict = {}
    vacuous = set()
    for alpha in range(budget + 1):
        prof = expansion_profile(f, alpha)
        excluded[alpha] = len(f.pairs) - len(prof)
        if not prof:
            vacuous.add(alpha)
            entries[alpha] = 0
        elif any(v is None for v in prof.values()):
            entries[alpha] = None
        else:
            entries[alpha] = max(prof.values())
    return ModulusTable(entries, budget, excluded, frozenset(vacuous))


@dataclass(frozen=True)
class AsymorphismReport:
    bounded: bool
    forward: ModulusTable
    inverse: ModulusTable

    def __bool__(self) -> bool:
        return self.bounded


def is_asymorphism_at_budget(f: PartialBijection, budget: int) -> AsymorphismReport:
    """Both moduli of a bijection between two truncations, up to ``budget``."""
    if not f.is_total():
        raise BalleanError("map is not a bijection between the two truncations")
    fwd = expansion_modulus(f, budget)
    inv = expansion_modulus(f.inverse(), budget)
    return AsymorphismReport(fwd.finite and inv.finite and fwd.reliable and inv.reliable, fwd, inv)
