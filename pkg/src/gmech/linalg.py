"""Exact Gauss-Jordan elimination over the rationals."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and the pivot columns.

    Works on a copy; entries are coerced to Fraction.
    """
    a = [[Fraction(x) for x in row] for row in rows]
    if not a:
        return a, []
    n_rows, n_cols = len(a), len(a[0])
    pivots = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        piv = next((k for k in range(r, n_rows) if a[k][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        lead = a[r][c]
        if lead != 1:
            a[r] = [x / lead for x in a[r]]
        for k in range(n_rows):
            if k != r and a[k][c] != 0:
                f = a[k][c]
                a[k] = [x - f * y for x, y in zip(a[k], a[r])]
        pivots.append(c)
        r += 1
    return a, pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    """Basis of the right null space, one vector per free column."""
    if not rows:
        return []
    n_cols = len(rows[0])
    reduced, pivots = rref(rows)
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n_cols
        v[f] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -reduced[r][f]
        basis.append(v)
    return basis


def solve(rows: Sequence[Sequence], rhs: Sequence) -> list[Fraction]:
    """Unique solution of a consistent full-column-rank system.

    Raises ValueError if the system is inconsistent or underdetermined.
    """
    n_cols = len(rows[0])
    aug = [list(row) + [b] for row, b in zip(rows, rhs)]
    reduced, pivots = rref(aug)
    if n_cols in pivots:
        raise ValueError("inconsistent system")
    if len(pivots) != n_cols:
        raise ValueError("system is underdetermined")
    x = [Fraction(0)] * n_cols
    for r, c in enumerate(pivots):
        x[c] = reduced[r][n_cols]
    return x
