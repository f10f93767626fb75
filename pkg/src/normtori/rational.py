"""Dense exact linear algebra over Q on plain lists of lists.

Matrices are ``list[list[Fraction | int]]`` in row-major order.  A matrix with
zero rows carries no column count, so functions that need the shape of an
empty matrix take it explicitly.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]


def to_fraction_matrix(a: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in a]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def zeros(rows: int, cols: int) -> Matrix:
    return [[Fraction(0)] * cols for _ in range(rows)]


def transpose(a: Sequence[Sequence], cols: int | None = None) -> Matrix:
    if not a:
        return [[] for _ in range(cols or 0)]
    return [list(col) for col in zip(*a)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence],
           cols: int | None = None) -> Matrix:
    """Product ``a @ b``.  ``cols`` is needed only when ``b`` has no rows."""
    if b:
        cols = len(b[0])
    cols = cols or 0
    return [[sum((row[k] * b[k][j] for k in range(len(b))), Fraction(0)) for j in range(cols)]
            for row in a]


def matvec(a: Sequence[Sequence], x: Sequence) -> list[Fraction]:
    return [sum((r * v for r, v in zip(row, x)), Fraction(0)) for row in a]


def columns(a: Sequence[Sequence], cols: int) -> list[list[Fraction]]:
    return [[row[j] for row in a] for j in range(cols)]


def from_columns(cols: Sequence[Sequence], rows: int) -> Matrix:
    return [[Fraction(c[i]) for c in cols] for i in range(rows)]


def kron(a: Sequence[Sequence], b: Sequence[Sequence], a_cols: int, b_cols: int) -> Matrix:
    out = zeros(len(a) * len(b), a_cols * b_cols)
    for i, ra in enumerate(a):
        for k, rb in enumerate(b):
            out[i * len(b) + k] = [Fraction(x) * y for x in ra for y in rb]
    return out


def _echelon(a: Matrix, cols: int) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns (first-pivot rule)."""
    m = [row[:] for row in a]
    pivots = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
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


def rank(a: Sequence[Sequence], cols: int | None = None) -> int:
    if not a:
        return 0
    return len(_echelon(to_fraction_matrix(a), len(a[0]) if cols is None else cols)[1])


def pivot_columns(a: Sequence[Sequence], cols: int) -> list[int]:
    """Indices of the first-pivot column basis of the column space."""
    if not a:
        return []
    return _echelon(to_fraction_matrix(a), cols)[1]


def det(a: Sequence[Sequence]) -> Fraction:
    """Determinant by fraction-exact elimination; the empty matrix has det 1."""
    m = to_fraction_matrix(a)
    n = len(m)
    result = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            result = -result
        result *= m[c][c]
        inv = 1 / m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return result


def inverse(a: Sequence[Sequence]) -> Matrix:
    n = len(a)
    aug = [list(row) + e for row, e in zip(to_fraction_matrix(a), identity(n))]
    red, pivots = _echelon(aug, 2 * n)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in red]


def solve(a: Sequence[Sequence], b: Sequence, cols: int) -> list[Fraction] | None:
    """One solution of ``a x = b``, free variables set to zero; None if inconsistent."""
    aug = [list(r) + [Fraction(v)] for r, v in zip(to_fraction_matrix(a), b)]
    red, pivots = _echelon(aug, cols + 1)
    if cols in pivots:
        return None
    x = [Fraction(0)] * cols
    for i, c in enumerate(pivots):
        x[c] = red[i][cols]
    return x


def nullspace(a: Sequence[Sequence], cols: int) -> list[list[Fraction]]:
    """Basis of the right kernel of ``a``."""
    if not a:
        return [[Fraction(int(i == j)) for i in range(cols)] for j in range(cols)]
    red, pivots = _echelon(to_fraction_matrix(a), cols)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -red[i][f]
        basis.append(v)
    return basis


def is_zero(a: Sequence[Sequence]) -> bool:
    return all(x == 0 for row in a for x in row)
