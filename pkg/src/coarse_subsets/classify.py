"""Decision procedures for countable abelian groups.

Two criteria are implemented:

* locally finite groups given as direct sums of finite cyclic groups: ``G1``
  and ``G2`` are asymorphic iff every finite subgroup order of one divides
  some finite subgroup order of the other, in both directions;
* abelian groups up to coarse equivalence: the torsion-free ranks agree and
  both groups are finitely generated or both are not.

Finite subgroup orders of an abelian group are closed under divisors and lcm,
so the first criterion reduces to comparing, prime by prime, the largest
exponent ``e`` such that a subgroup of order ``p**e`` exists (the capacity).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .snf import smith_normal_form

OMEGA = "omega"
INF = math.inf


class SpecError(ValueError):
    pass


def factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _check_int(x, what: str) -> int:
    if not isinstance(x, int) or isinstance(x, bool):
        raise SpecError(f"{what} must be an integer, got {x!r}")
    return x


@dataclass(frozen=True)
class CyclicSumSpec:
    """Direct sum of cyclic groups; ``summands`` are ``(order, multiplicity)`` with multiplicity an int or ``OMEGA``."""

    summands: tuple

    def __post_init__(self):
        if not self.summands:
            raise SpecError("at least one summand is required")
        merged: dict = {}
        for order, mult in self.summands:
            _check_int(order, "order")
            if order < 2:
                raise SpecError(f"cyclic orders must be at least 2, got {order}")
            if mult != OMEGA:
                _check_int(mult, "multiplicity")
                if mult < 1:
                    raise SpecError(f"multiplicity must be positive, got {mult}")
            prev = merged.get(order, 0)
            merged[order] = OMEGA if OMEGA in (prev, mult) else prev + mult
        object.__setattr__(self, "summands", tuple(sorted(merged.items())))

    @classmethod
    def of(cls, *orders: int) -> "CyclicSumSpec":
        """Finite sum ``Z_{k1} ⊕ Z_{k2} ⊕ ...``."""
        return cls(tuple((k, 1) for k in orders))

    @classmethod
    def omega(cls, order: int) -> "CyclicSumSpec":
        return cls(((order, OMEGA),))

    @property
    def is_finite(self) -> bool:
        return all(m != OMEGA for _, m in self.summands)

    @property
    def order(self) -> int | None:
        if not self.is_finite:
            return None
        return math.prod(k**m for k, m in self.summands)

    def orders(self) -> list[int]:
        """Cyclic factor orders with repetition (finite specs only)."""
        if not self.is_finite:
            raise SpecError("infinite sum has no finite list of factors")
        return [k for k, m in self.summands for _ in range(m)]

    @classmethod
    def from_json(cls, obj: dict) -> "CyclicSumSpec":
        if not isinstance(obj, dict) or obj.get("kind") != "cyclic_sum":
            raise SpecError("expected a spec with kind 'cyclic_sum'")
        try:
            return cls(tuple((s["order"], s.get("multiplicity", 1)) for s in obj["summands"]))
        except (KeyError, TypeError) as exc:
            raise SpecError(f"malformed cyclic_sum spec: {obj!r}") from exc

    def to_json(self) -> dict:
        return {"kind": "cyclic_sum", "summands": [{"order": k, "multiplicity": m} for k, m in self.summands]}

    def __str__(self) -> str:
        return " ⊕ ".join(f"Z{k}" if m == 1 else f"Z{k}^{m if m != OMEGA else 'ω'}" for k, m in self.summands)


@dataclass(frozen=True)
class CapacityFunction:
    """Prime ``p`` → largest ``e`` (possibly ``inf``) with a subgroup of order ``p**e``; absent primes are 0."""

    values: dict

    def __getitem__(self, p: int):
        return self.values.get(p, 0)

    def primes(self) -> set:
        return set(self.values)

    def realizes(self, n: int) -> bool:
        """Whether a finite subgroup of order ``n`` exists."""
        return all(e <= self[p] for p, e in factorize(n).items())

    def to_json(self) -> dict:
        return {str(p): ("inf" if v == INF else v) for p, v in sorted(self.values.items())}


def subgroup_capacity(spec: CyclicSumSpec) -> CapacityFunction:
    cap: dict = {}
    for k, mult in spec.summands:
        for p, e in factorize(k).items():
            cap[p] = INF if mult == OMEGA else cap.get(p, 0) + e * mult
    return CapacityFunction(cap)


@dataclass(frozen=True)
class DivisibilityCheck:
    holds: bool
    failing_prime: int | None = None
    witness_order: int | None = None  # a realizable order with no realizable multiple on the other side


def _divides_into(c1: CapacityFunction, c2: CapacityFunction) -> DivisibilityCheck:
    for p in sorted(c1.primes() | c2.primes()):
        if c1[p] > c2[p]:
            return DivisibilityCheck(False, p, p ** (c2[p] + 1))
    return DivisibilityCheck(True)


CONDITION_II_NOTE = "second condition read as: every |H| divides some |F| (symmetric to the first)"


@dataclass(frozen=True)
class LocFinDecision:
    value: bool
    capacity_a: CapacityFunction
    capacity_b: CapacityFunction
    condition_i: DivisibilityCheck
    condition_ii: DivisibilityCheck
    note: str = CONDITION_II_NOTE

    def __bool__(self) -> bool:
        return self.value

    def to_json(self) -> dict:
        def cond(c):
            return {"holds": c.holds, "failing_prime": c.failing_prime, "witness_order": c.witness_order}

        return {
            "decision": self.value,
            "capacity_a": self.capacity_a.to_json(),
            "capacity_b": self.capacity_b.to_json(),
            "condition_i": cond(self.condition_i),
            "condition_ii": cond(self.condition_ii),
            "note": self.note,
        }


def decide_locfin_asymorphic(g1: CyclicSumSpec, g2: CyclicSumSpec) -> LocFinDecision:
    c1, c2 = subgroup_capacity(g1), subgroup_capacity(g2)
    i, ii = _divides_into(c1, c2), _divides_into(c2, c1)
    return LocFinDecision(i.holds and ii.holds, c1, c2, i, ii)


# ---------------------------------------------------------------------------
# coarse equivalence of abelian groups


def torsion_free_rank(generators: int, relations: Sequence[Sequence[int]]) -> int:
    """Rank of the free part of ``Z^generators / ⟨relations⟩``."""
    _check_int(generators, "generator count")
    if generators < 0:
        raise SpecError("generator count must be nonnegative")
    for row in relations:
        if len(row) != generators:
            raise SpecError(f"relation {list(row)} has {len(row)} entries, expected {generators}")
    if not relations:
        return generators
    return generators - smith_normal_form(relations).rank


@dataclass(frozen=True)
class AbelianSpec:
    rank: int
    finitely_generated: bool
    torsion: tuple = field(default=())  # finite cyclic orders, informational

    def __post_init__(self):
        if self.rank == OMEGA:
            raise SpecError("infinite torsion-free rank is outside the supported scope")
        _check_int(self.rank, "rank")
        if self.rank < 0:
            raise SpecError("rank must be nonnegative")

    @classmethod
    def free(cls, rank: int) -> "AbelianSpec":
        return cls(rank, True)

    @classmethod
    def from_cyclic_sum(cls, spec: CyclicSumSpec) -> "AbelianSpec":
        return cls(0, spec.is_finite, tuple(spec.orders()) if spec.is_finite else ())

    @classmethod
    def from_presentation(cls, generators: int, relations: Sequence[Sequence[int]]) -> "AbelianSpec":
        rank = torsion_free_rank(generators, relations)
        torsion = tuple(d for d in smith_normal_form(relations).diagonal if d > 1) if relations else ()
        return cls(rank, True, torsion)

    @classmethod
    def from_json(cls, obj: dict) -> "AbelianSpec":
        if not isinstance(obj, dict):
            raise SpecError("group spec must be a JSON object")
        kind = obj.get("kind")
        try:
            if kind == "cyclic_sum":
                return cls.from_cyclic_sum(CyclicSumSpec.from_json(obj))
            if kind == "presentation":
                return cls.from_presentation(obj["generators"], obj.get("relations", []))
            if kind == "abelian":
                return cls(obj["rank"], obj["finitely_generated"], tuple(obj.get("torsion", ())))
        except (KeyError, TypeError) as exc:
            raise SpecError(f"malformed {kind} spec: {obj!r}") from exc
        raise SpecError(f"unknown group spec kind {kind!r}")

    def to_json(self) -> dict:
        return {"kind": "abelian", "rank": self.rank, "finitely_generated": self.finitely_generated,
                "torsion": list(self.torsion)}


@dataclass(frozen=True)
class AbelianDecision:
    value: bool
    rank_a: int
    rank_b: int
    fg_a: bool
    fg_b: bool

    def __bool__(self) -> bool:
        return self.value

    def to_json(self) -> dict:
        return {"decision": self.value, "rank_a": self.rank_a, "rank_b": self.rank_b,
                "finitely_generated_a": self.fg_a, "finitely_generated_b": self.fg_b}


def decide_abelian_coarse_equiv(a: AbelianSpec, b: AbelianSpec) -> AbelianDecision:
    return AbelianDecision(a.rank == b.rank and a.finitely_generated == b.finitely_generated,
                           a.rank, b.rank, a.finitely_generated, b.finitely_generated)


# ---------------------------------------------------------------------------
# brute force: explicit subgroup enumeration for finite groups


def _partitions(n: int, largest: int | None = None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


def abelian_groups_of_order(n: int) -> list[CyclicSumSpec]:
    """All abelian groups of order ``n`` up to isomorphism, as sums of prime-power cyclic groups."""
    if n < 2:
        return []
    choices = [[tuple(p**e for e in part) for part in _partitions(a)] for p, a in sorted(factorize(n).items())]
    out = []

    def rec(i, acc):
        if i == len(choices):
            out.append(CyclicSumSpec.of(*acc))
            return
        for c in choices[i]:
            rec(i + 1, acc + c)

    rec(0, ())
    return out


def realizable_orders_bruteforce(spec: CyclicSumSpec) -> frozenset:
    """Orders of all subgroups, found by enumerating every subgroup of the explicit group."""
    moduli = spec.orders()
    n = math.prod(moduli)

    def decode(x):
        out = []
        for k in reversed(moduli):
            out.append(x % k)
            x //= k
        return out[::-1]

    def encode(v):
        x = 0
        for k, a in zip(moduli, v):
            x = x * k + a
        return x

    vecs = [decode(x) for x in range(n)]
    add = [[encode([(a + b) % k for a, b, k in zip(vecs[x], vecs[y], moduli)]) for y in range(n)] for x in range(n)]

    def join(H: frozenset, g: int) -> frozenset:
        out, cur = set(H), g
        while cur not in H:
            out.update(add[h][cur] for h in H)
            cur = add[cur][g]
        return frozenset(out)

    trivial = frozenset((0,))
    seen = {trivial}
    frontier = [trivial]
    while frontier:
        nxt = []
        for H in frontier:
            covered = set(H)
            for g in range(n):
                if g in covered:
                    continue
                covered.update(add[h][g] for h in H)  # ⟨H, h + g⟩ = ⟨H, g⟩ on the whole coset
                J = join(H, g)
                if J not in seen:
                    seen.add(J)
                    nxt.append(J)
        frontier = nxt
    return frozenset(len(H) for H in seen)


def conditions_by_orders(orders1: frozenset, orders2: frozenset) -> bool:
    """Direct evaluation: each order on either side divides some order on the other."""
    def into(a, b):
        return all(any(h % f == 0 for h in b) for f in a)

    return into(orders1, orders2) and into(orders2, orders1)
