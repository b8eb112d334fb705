"""Exact Smith normal form over the integers."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> Matrix:
    if not A:
        return []
    cols = len(B[0]) if B else 0
    return [[sum(a * B[k][j] for k, a in enumerate(row)) for j in range(cols)] for row in A]


def determinant(A: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(r) for r in A]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k]), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


@dataclass(frozen=True)
class SNFResult:
    diagonal: tuple[int, ...]
    U: Matrix
    V: Matrix
    D: Matrix

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


def _shape(A: Sequence[Sequence[int]]) -> tuple[int, int]:
    rows = len(A)
    cols = len(A[0]) if rows else 0
    if any(len(r) != cols for r in A):
        raise ValueError("ragged matrix")
    if any(not isinstance(x, int) or isinstance(x, bool) for r in A for x in r):
        raise ValueError("matrix entries must be integers")
    return rows, cols


def smith_normal_form(A: Sequence[Sequence[int]]) -> SNFResult:
    """``U·A·V = D`` with ``U``, ``V`` unimodular and ``d_1 | d_2 | ...`` on the diagonal.

    The pivot is always the entry of least nonzero absolute value in the
    remaining block, ties broken in row-major order.
    """
    rows, cols = _shape(A)
    M = [list(r) for r in A]
    U, V = identity(rows), identity(cols)

    def swap_rows(i, j):
        M[i], M[j] = M[j], M[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for R in (M, V):
            for r in R:
                r[i], r[j] = r[j], r[i]

    def add_row(dst, src, q):  # row dst += q * row src
        for R in (M, U):
            R[dst] = [a + q * b for a, b in zip(R[dst], R[src])]

    def add_col(dst, src, q):  # col dst += q * col src
        for R in (M, V):
            for r in R:
                r[dst] += q * r[src]

    for t in range(min(rows, cols)):
        while True:
            cands = [(abs(M[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if M[i][j]]
            if not cands:
                break
            _, i, j = min(cands)
            swap_rows(t, i)
            swap_cols(t, j)
            p = M[t][t]
            dirty = False
            for i in range(t + 1, rows):
                q = M[i][t] // p
                if q:
                    add_row(i, t, -q)
                dirty |= M[i][t] != 0
            for j in range(t + 1, cols):
                q = M[t][j] // p
                if q:
                    add_col(j, t, -q)
                dirty |= M[t][j] != 0
            if dirty:
                continue
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if M[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if t < rows and t < cols and M[t][t] < 0:
            for R in (M, U):
                R[t] = [-a for a in R[t]]
    diag = tuple(M[i][i] for i in range(min(rows, cols)))
    return SNFResult(diag, U, V, M)


def determinantal_divisors(A: Sequence[Sequence[int]]) -> list[int]:
    """``[g_1, g_2, ...]`` where ``g_k`` is the gcd of all ``k×k`` minors (brute force)."""
    rows, cols = _shape(A)
    out = []
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for ri in itertools.combinations(range(rows), k):
            for ci in itertools.combinations(range(cols), k):
                g = math.gcd(g, determinant([[A[i][j] for j in ci] for i in ri]))
        out.append(g)
    return out


def invariant_factors_from_minors(A: Sequence[Sequence[int]]) -> list[int]:
    """Invariant factors ``d_k = g_k / g_{k-1}`` recovered from the determinantal divisors."""
    out, prev = [], 1
    for g in determinantal_divisors(A):
        if g == 0:
            out.append(0)
            prev = 0
            continue
        out.append(g // prev)
        prev = g
    return out
