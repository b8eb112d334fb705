"""Almost disjoint family of subsets of ω from branches of the binary tree.

Nonempty binary strings are coded bijectively onto ``{1, 2, 3, ...}`` by
``code(s) = 2**len(s) + int(s, 2) - 1``. An infinite binary word ``w`` names
the set ``{code(w[:n]) : n >= 1}``; two distinct words share exactly the codes
of their common prefixes, so the family of all branches is almost disjoint.
Words are restricted here to eventually periodic ones, written as a finite
prefix followed by a repeated period.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator


class SeedError(ValueError):
    pass


def _check_bits(s: str, what: str) -> None:
    if any(c not in "01" for c in s):
        raise SeedError(f"{what} must be a binary string, got {s!r}")


def _primitive_root(p: str) -> str:
    n = len(p)
    for d in range(1, n + 1):
        if n % d == 0 and p[:d] * (n // d) == p:
            return p[:d]
    return p


@dataclass(frozen=True, init=False)
class BinarySeed:
    """Eventually periodic binary word ``prefix + period + period + ...`` in normal form.

    Normal form: the period is primitive and the prefix does not end with the
    period's last bit, so distinct seeds denote distinct words.
    """

    prefix: str
    period: str

    def __init__(self, prefix: str, period: str):
        _check_bits(prefix, "prefix")
        _check_bits(period, "period")
        if not period:
            raise SeedError("period must be nonempty")
        period = _primitive_root(period)
        while prefix and prefix[-1] == period[-1]:
            prefix = prefix[:-1]
            period = period[-1] + period[:-1]
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "period", period)

    @classmethod
    def parse(cls, text: str) -> "BinarySeed":
        """Parse ``"prefix:period"``; the prefix may be empty (``":1"``)."""
        if text.count(":") != 1:
            raise SeedError(f"seed must look like 'prefix:period', got {text!r}")
        pre, per = text.split(":")
        return cls(pre, per)

    @classmethod
    def from_json(cls, obj: dict) -> "BinarySeed":
        try:
            return cls(obj["prefix"], obj["period"])
        except (KeyError, TypeError) as exc:
            raise SeedError(f"seed object needs 'prefix' and 'period': {obj!r}") from exc

    def to_json(self) -> dict:
        return {"prefix": self.prefix, "period": self.period}

    def __str__(self) -> str:
        return f"{self.prefix}:{self.period}"

    def bit(self, i: int) -> str:
        if i < len(self.prefix):
            return self.prefix[i]
        return self.period[(i - len(self.prefix)) % len(self.period)]

    def word(self, n: int) -> str:
        """The first ``n`` bits."""
        return "".join(self.bit(i) for i in range(n))

    def codes(self) -> Iterator[int]:
        """Members of the branch set in increasing order (infinite)."""
        value, n = 0, 0
        while True:
            value = 2 * value + (self.bit(n) == "1")
            n += 1
            yield (1 << n) + value - 1

    def contains(self, code: int) -> bool:
        if code < 1:
            return False
        s = decode_string(code)
        return self.word(len(s)) == s


def encode_string(s: str) -> int:
    _check_bits(s, "string")
    if not s:
        raise SeedError("cannot encode the empty string")
    return (1 << len(s)) + int(s, 2) - 1


def decode_string(code: int) -> str:
    if code < 1:
        raise SeedError("codes start at 1")
    n = (code + 1).bit_length() - 1
    return format(code + 1 - (1 << n), f"0{n}b")


def branch_members(seed: BinarySeed, n_max: int) -> list[int]:
    """``{code(w[:n]) : 1 <= n <= n_max}``, increasing."""
    if n_max < 1:
        raise SeedError("n_max must be at least 1")
    it = seed.codes()
    return [next(it) for _ in range(n_max)]


def lcp_bound(seed1: BinarySeed, seed2: BinarySeed) -> int:
    """Length of the longest common prefix of two distinct seed words.

    This equals the size of the intersection of their branch sets.
    """
    if seed1 == seed2:
        raise SeedError("identical seeds have infinite intersection")
    horizon = max(len(seed1.prefix), len(seed2.prefix)) + math.lcm(len(seed1.period), len(seed2.period))
    for i in range(horizon):
        if seed1.bit(i) != seed2.bit(i):
            return i
    # unreachable for normalized seeds: agreement that long forces equal words
    raise SeedError(f"seeds {seed1} and {seed2} denote the same word")


def shared_max(seed1: BinarySeed, seed2: BinarySeed) -> int:
    """``max(W1 ∩ W2)``, or 0 when the branch sets are disjoint."""
    L = lcp_bound(seed1, seed2)
    return encode_string(seed1.word(L)) if L else 0
