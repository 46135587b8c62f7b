"""Small exact-rational matrix helpers (lists of lists of Fraction)."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]


class SingularMatrixError(ArithmeticError):
    pass


def to_matrix(rows: Sequence[Sequence[object]]) -> Matrix:
    return [[Fraction(v) for v in row] for row in rows]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    cols = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in cols] for row in a]


def matvec(a: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> list[Fraction]:
    return [sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a]


def transpose(a: Sequence[Sequence[Fraction]]) -> Matrix:
    return [list(col) for col in zip(*a)]


def _eliminate(aug: Matrix, ncols: int) -> tuple[Matrix, list[int]]:
    """Gauss-Jordan on the first ``ncols`` columns; returns (rref, pivot columns)."""
    m = [row[:] for row in aug]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(a: Sequence[Sequence[Fraction]]) -> int:
    if not a:
        return 0
    return len(_eliminate([list(map(Fraction, row)) for row in a], len(a[0]))[1])


def inverse(a: Sequence[Sequence[Fraction]]) -> Matrix:
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("matrix must be square")
    aug = [list(map(Fraction, row)) + e for row, e in zip(a, identity(n))]
    rref, pivots = _eliminate(aug, n)
    if len(pivots) < n:
        raise SingularMatrixError("matrix is singular")
    return [row[n:] for row in rref]


def solve(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> list[Fraction]:
    """Unique solution of a square nonsingular system."""
    n = len(a)
    aug = [list(map(Fraction, row)) + [Fraction(bi)] for row, bi in zip(a, b)]
    rref, pivots = _eliminate(aug, n)
    if len(pivots) < n:
        raise SingularMatrixError("system is singular")
    return [rref[i][n] for i in range(n)]


def determinant(a: Sequence[Sequence[Fraction]]) -> Fraction:
    m = [list(map(Fraction, row)) for row in a]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            if f:
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return det


def format_matrix(a: Sequence[Sequence[Fraction]]) -> str:
    cells = [[str(v) for v in row] for row in a]
    width = max((len(c) for row in cells for c in row), default=1)
    return "\n".join("[" + " ".join(c.rjust(width) for c in row) + "]" for row in cells)
