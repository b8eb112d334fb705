"""Exhaustive search for bijections with bounded expansion in both directions.

Used as ground truth for non-asymorphism claims on small truncations. A search
either returns a bijection meeting the bounds, or reports exhaustion, which is
a proof that none exists. Instances above the cap raise ``SearchCapExceeded``
instead; that outcome proves nothing.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Mapping

from .ballean import BalleanError, FiniteSpace, ModulusTable

DEFAULT_SEARCH_CAP = 12
_INF = float("inf")


class SearchCapExceeded(BalleanError):
    pass


def search_cap() -> int:
    raw = os.environ.get("COARSE_SEARCH_CAP")
    return int(raw) if raw else DEFAULT_SEARCH_CAP


@dataclass(frozen=True)
class SearchResult:
    status: str  # "found" or "exhausted"
    bijection: dict | None
    nodes: int

    @property
    def exhausted(self) -> bool:
        return self.status == "exhausted"


def _as_bounds(bound: ModulusTable | Mapping[int, int] | None) -> dict:
    if bound is None:
        return {}
    if isinstance(bound, ModulusTable):
        return {a: v for a, v in bound.entries.items() if v is not None}
    return dict(bound)


def _allowed(bounds: dict, dist: int | None):
    """Largest image distance allowed for a pair at source distance ``dist``."""
    if dist is None:
        return _INF
    caps = [v for a, v in bounds.items() if dist <= a]
    return min(caps) if caps else _INF


def _distance_matrix(space: FiniteSpace, pts: list) -> list:
    n = len(pts)
    D = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            d = space.radius_index(pts[i], pts[j])
            d = _INF if d is None else d
            D[i][j] = D[j][i] = d
    return D


def search_bounded_bijection(
    X: FiniteSpace,
    A: FiniteSpace,
    bound: ModulusTable | Mapping[int, int] | None,
    inverse_bound: ModulusTable | Mapping[int, int] | None = None,
    cap: int | None = None,
) -> SearchResult:
    """Backtracking search for ``f: X -> A`` with ``μ_f <= bound`` and ``μ_{f^-1} <= inverse_bound``.

    Bounds map a radius index α to the largest allowed image radius index.
    Source points are placed in nearest-to-placed order; for each, target
    candidates are tried by distance to the image of its nearest placed
    neighbour, and a branch is cut at the first violated pair.
    """
    cap = search_cap() if cap is None else cap
    if len(X.points) != len(A.points):
        raise BalleanError(f"size mismatch: {len(X.points)} vs {len(A.points)} points")
    if len(X.points) > cap:
        raise SearchCapExceeded(f"instance of {len(X.points)} points exceeds search cap {cap}")

    fwd, inv = _as_bounds(bound), _as_bounds(inverse_bound)
    xs = sorted(X.points, key=repr)
    ts = sorted(A.points, key=repr)
    n = len(xs)
    if n == 0:
        return SearchResult("found", {}, 0)
    DS = _distance_matrix(X, xs)
    DT = _distance_matrix(A, ts)

    fwd_cache: dict = {}
    inv_cache: dict = {}

    def allow_fwd(d):
        if d not in fwd_cache:
            fwd_cache[d] = _allowed(fwd, None if d == _INF else d)
        return fwd_cache[d]

    def allow_inv(d):
        if d not in inv_cache:
            inv_cache[d] = _allowed(inv, None if d == _INF else d)
        return inv_cache[d]

    # placement order: greedy nearest to the already placed points
    order = [0]
    rest = set(range(1, n))
    while rest:
        nxt = min(rest, key=lambda j: (min(DS[i][j] for i in order), j))
        order.append(nxt)
        rest.remove(nxt)
    anchor = {order[0]: None}
    for k in range(1, n):
        j = order[k]
        anchor[j] = min(order[:k], key=lambda i: (DS[i][j], i))

    assign = [-1] * n
    used = [False] * n
    nodes = 0

    def consistent(i: int, a: int) -> bool:
        for j in range(n):
            b = assign[j]
            if b < 0:
                continue
            ds, dt = DS[i][j], DT[a][b]
            if dt > allow_fwd(ds) or ds > allow_inv(dt):
                return False
        return True

    def rec(k: int) -> bool:
        nonlocal nodes
        if k == n:
            return True
        i = order[k]
        ref = anchor[i]
        cands = [a for a in range(n) if not used[a]]
        if ref is not None:
            fa = assign[ref]
            cands.sort(key=lambda a: (DT[fa][a], a))
        for a in cands:
            nodes += 1
            if not consistent(i, a):
                continue
            assign[i] = a
            used[a] = True
            if rec(k + 1):
                return True
            assign[i] = -1
            used[a] = False
        return False

    if rec(0):
        return SearchResult("found", {xs[i]: ts[assign[i]] for i in range(n)}, nodes)
    return SearchResult("exhausted", None, nodes)


@dataclass(frozen=True)
class MinimumModulus:
    alpha: int
    value: int
    witness: dict
    refuted_below: tuple  # bounds proved infeasible by exhaustion
    nodes: int


def minimize_modulus(
    X: FiniteSpace,
    A: FiniteSpace,
    alpha: int,
    inverse_bound: Mapping[int, int] | None = None,
    cap: int | None = None,
) -> MinimumModulus:
    """Least ``μ_f(alpha)`` over all bijections ``X -> A``, proved by exhaustion below it."""
    xs = sorted(A.points, key=repr)
    top = max((d for d in (A.radius_index(p, q) for p in xs for q in xs) if d is not None), default=0)
    refuted = []
    nodes = 0
    for b in range(top + 1):
        res = search_bounded_bijection(X, A, {alpha: b}, inverse_bound, cap)
        nodes += res.nodes
        if res.status == "found":
            return MinimumModulus(alpha, b, res.bijection, tuple(refuted), nodes)
        refuted.append(b)
    raise BalleanError("no bijection meets any finite bound (target radius scale too short)")
