"""Exact rational linear solving over sparse column vectors."""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Hashable, List, Optional, Sequence

Vector = Dict[Hashable, Fraction]


def solve_columns(columns: Sequence[Vector], target: Vector) -> Optional[List[Fraction]]:
    """Find c with sum_j c_j columns[j] == target, or None if inconsistent.

    Gauss-Jordan elimination on the augmented matrix; free variables are set
    to zero, so the returned solution is the one supported on pivot columns.
    """
    rows_index: Dict[Hashable, int] = {}
    for col in columns:
        for key in col:
            rows_index.setdefault(key, len(rows_index))
    for key in target:
        rows_index.setdefault(key, len(rows_index))
    n_rows, n_cols = len(rows_index), len(columns)
    M = [[Fraction(0)] * (n_cols + 1) for _ in range(n_rows)]
    for j, col in enumerate(columns):
        for key, v in col.items():
            M[rows_index[key]][j] = Fraction(v)
    for key, v in target.items():
        M[rows_index[key]][n_cols] = Fraction(v)

    pivots = []
    r = 0
    for c in range(n_cols):
        pr = next((i for i in range(r, n_rows) if M[i][c]), None)
        if pr is None:
            continue
        M[r], M[pr] = M[pr], M[r]
        inv = 1 / M[r][c]
        M[r] = [v * inv for v in M[r]]
        for i in range(n_rows):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    for i in range(r, n_rows):
        if M[i][n_cols]:
            return None
    sol = [Fraction(0)] * n_cols
    for i, c in enumerate(pivots):
        sol[c] = M[i][n_cols]
    return sol


def rank(columns: Sequence[Vector]) -> int:
    """Rank of the matrix with the given sparse columns."""
    rows_index: Dict[Hashable, int] = {}
    for col in columns:
        for key in col:
            rows_index.setdefault(key, len(rows_index))
    M = [[Fraction(0)] * len(columns) for _ in range(len(rows_index))]
    for j, col in enumerate(columns):
        for key, v in col.items():
            M[rows_index[key]][j] = Fraction(v)
    r = 0
    for c in range(len(columns)):
        pr = next((i for i in range(r, len(M)) if M[i][c]), None)
        if pr is None:
            continue
        M[r], M[pr] = M[pr], M[r]
        for i in range(r + 1, len(M)):
            if M[i][c]:
                f = M[i][c] / M[r][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        r += 1
    return r
