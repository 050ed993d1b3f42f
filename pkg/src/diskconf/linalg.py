"""Exact linear algebra over the integers and rationals.

Everything here works on plain Python ``int`` / ``Fraction`` lists of rows so
results never depend on a floating-point tolerance.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def _copy_int_matrix(m: Sequence[Sequence[int]]) -> list[list[int]]:
    rows = [list(map(int, row)) for row in m]
    if rows:
        width = len(rows[0])
        if any(len(row) != width for row in rows):
            raise ValueError("ragged matrix")
    return rows


def bareiss_det(m: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix by fraction-free elimination.

    Every intermediate entry is itself a minor of ``m``, so all divisions
    are exact and the result is an exact ``int``.
    """
    a = _copy_int_matrix(m)
    n = len(a)
    if n == 0:
        return 1
    if any(len(row) != n for row in a):
        raise ValueError("matrix is not square")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i = a[i]
            row_k = a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = akk
    return sign * a[n - 1][n - 1]


def integer_rank(m: Sequence[Sequence[int]]) -> int:
    """Rank over the rationals of an integer matrix (fraction-free)."""
    a = _copy_int_matrix(m)
    if not a:
        return 0
    nrows, ncols = len(a), len(a[0])
    rank = 0
    prev = 1
    for col in range(ncols):
        if rank == nrows:
            break
        pivot = next((i for i in range(rank, nrows) if a[i][col] != 0), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        p = a[rank][col]
        for i in range(rank + 1, nrows):
            aic = a[i][col]
            row_i = a[i]
            row_r = a[rank]
            for j in range(col + 1, ncols):
                row_i[j] = (row_i[j] * p - aic * row_r[j]) // prev
            row_i[col] = 0
        prev = p
        rank += 1
    return rank


def solve_rational(m: Sequence[Sequence[int]], b: Sequence[int]) -> list[Fraction]:
    """Solve ``m x = b`` exactly for a nonsingular square ``m``."""
    n = len(m)
    a = [[Fraction(v) for v in row] + [Fraction(bi)] for row, bi in zip(m, b)]
    if len(b) != n or any(len(row) != n + 1 for row in a):
        raise ValueError("shape mismatch")
    for col in range(n):
        pivot = next((i for i in range(col, n) if a[i][col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("matrix is singular")
        a[col], a[pivot] = a[pivot], a[col]
        inv = 1 / a[col][col]
        row_c = [v * inv for v in a[col]]
        a[col] = row_c
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [vi - f * vc for vi, vc in zip(a[i], row_c)]
    return [row[n] for row in a]
