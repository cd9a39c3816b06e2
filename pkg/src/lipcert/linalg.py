"""Dense exact linear algebra over Fractions: rank, solve, products."""

from __future__ import annotations

from fractions import Fraction

_ZERO = Fraction(0)


def mat_vec(matrix, vec):
    return [sum(a * b for a, b in zip(row, vec)) for row in matrix]


def mat_mul(a, b):
    cols = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in cols] for row in a]


def identity(n):
    return [[Fraction(1) if i == j else _ZERO for j in range(n)] for i in range(n)]


def rank(matrix) -> int:
    """Rank via fraction-exact Gaussian elimination."""
    rows = [list(r) for r in matrix]
    if not rows:
        return 0
    m, n = len(rows), len(rows[0])
    r = 0
    for c in range(n):
        pivot = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        prow = rows[r]
        inv = Fraction(1) / prow[c]
        rows[r] = prow = [x * inv for x in prow]
        for i in range(m):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], prow)]
        r += 1
        if r == m:
            break
    return r


def solve_exact(matrix, rhs):
    """One exact solution of A x = rhs (A may be rectangular), or None.

    Free variables are set to zero; returns None when the system is
    inconsistent.
    """
    m = len(matrix)
    n = len(matrix[0]) if m else 0
    aug = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    pivot_cols = []
    r = 0
    for c in range(n):
        pivot = next((i for i in range(r, m) if aug[i][c] != 0), None)
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        prow = aug[r]
        inv = Fraction(1) / prow[c]
        aug[r] = prow = [x * inv for x in prow]
        for i in range(m):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], prow)]
        pivot_cols.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if aug[i][n] != 0:
            return None
    x = [_ZERO] * n
    for i, c in enumerate(pivot_cols):
        x[c] = aug[i][n]
    return x
