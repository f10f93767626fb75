"""Integer matrices and their Smith normal form."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence


@dataclass(frozen=True)
class IntegerMatrix:
    """An exact integer matrix stored row-major.

    ``rows`` and ``cols`` are kept explicitly so that empty shapes such as
    0x3 survive round trips.
    """

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, "
                f"got {len(self.entries)}")
        for x in self.entries:
            if not isinstance(x, int) or isinstance(x, bool):
                raise TypeError(f"integer matrix entry {x!r} is not an int")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntegerMatrix:
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged matrix rows")
        return cls(len(rows), cols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> IntegerMatrix:
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def zero(cls, rows: int, cols: int) -> IntegerMatrix:
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def diagonal(cls, diag: Sequence[int], rows: int | None = None,
                 cols: int | None = None) -> IntegerMatrix:
        rows = len(diag) if rows is None else rows
        cols = len(diag) if cols is None else cols
        out = [[0] * cols for _ in range(rows)]
        for i, d in enumerate(diag):
            out[i][i] = d
        return cls.from_rows(out, cols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def tolist(self) -> list[list[int]]:
        return [list(self.entries[i * self.cols:(i + 1) * self.cols]) for i in range(self.rows)]

    def column(self, j: int) -> list[int]:
        return [self[i, j] for i in range(self.rows)]

    def transpose(self) -> IntegerMatrix:
        return IntegerMatrix.from_rows(
            [[self[i, j] for i in range(self.rows)] for j in range(self.cols)], self.rows)

    def __matmul__(self, other: IntegerMatrix) -> IntegerMatrix:
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        a, b = self.tolist(), other.tolist()
        return IntegerMatrix.from_rows(
            [[sum(a[i][k] * b[k][j] for k in range(self.cols)) for j in range(other.cols)]
             for i in range(self.rows)], other.cols)

    def __str__(self) -> str:
        return str(self.tolist())


def int_det(a: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant of a square integer matrix."""
    m = [list(r) for r in a]
    n = len(m)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            p = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if p is None:
                return 0
            m[k], m[p] = m[p], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


@dataclass(frozen=True)
class SnfDecomposition:
    """``A = u @ s @ v`` with ``u``, ``v`` unimodular and ``s`` in Smith form.

    ``u_inv`` and ``v_inv`` are the exact inverses, so that
    ``u_inv @ A @ v_inv == s``.  The columns of ``v_inv`` past the rank span
    the integer kernel of ``A``.
    """

    u: IntegerMatrix
    s: IntegerMatrix
    v: IntegerMatrix
    u_inv: IntegerMatrix
    v_inv: IntegerMatrix

    @property
    def diagonal(self) -> list[int]:
        return [self.s[i, i] for i in range(min(self.s.rows, self.s.cols))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)

    @property
    def invariant_factors(self) -> list[int]:
        """Nonzero diagonal entries, including any leading ones."""
        return [d for d in self.diagonal if d != 0]


def smith_normal_form(a: IntegerMatrix | Sequence[Sequence[int]]) -> SnfDecomposition:
    """Smith normal form with smallest-absolute-value pivoting.

    Row operations are mirrored on ``P`` / ``P^-1`` and column operations on
    ``Q`` / ``Q^-1`` so that ``P A Q = S`` holds throughout.
    """
    if not isinstance(a, IntegerMatrix):
        a = IntegerMatrix.from_rows(a)
    m, n = a.rows, a.cols
    s = a.tolist()
    p = [[int(i == j) for j in range(m)] for i in range(m)]
    p_inv = [row[:] for row in p]
    q = [[int(i == j) for j in range(n)] for i in range(n)]
    q_inv = [row[:] for row in q]

    def swap_rows(i, j):
        s[i], s[j] = s[j], s[i]
        p[i], p[j] = p[j], p[i]
        for row in p_inv:
            row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        for row in s:
            row[i], row[j] = row[j], row[i]
        for row in q:
            row[i], row[j] = row[j], row[i]
        q_inv[i], q_inv[j] = q_inv[j], q_inv[i]

    def add_row(dst, src, c):
        # row_dst += c * row_src
        s[dst] = [x + c * y for x, y in zip(s[dst], s[src])]
        p[dst] = [x + c * y for x, y in zip(p[dst], p[src])]
        for row in p_inv:
            row[src] -= c * row[dst]

    def add_col(dst, src, c):
        # col_dst += c * col_src
        for row in s:
            row[dst] += c * row[src]
        for row in q:
            row[dst] += c * row[src]
        q_inv[src] = [x - c * y for x, y in zip(q_inv[src], q_inv[dst])]

    def negate_row(i):
        s[i] = [-x for x in s[i]]
        p[i] = [-x for x in p[i]]
        for row in p_inv:
            row[i] = -row[i]

    for t in range(min(m, n)):
        nonzero = [(abs(s[i][j]), i, j) for i in range(t, m) for j in range(t, n) if s[i][j]]
        if not nonzero:
            break
        _, i0, j0 = min(nonzero)
        swap_rows(t, i0)
        swap_cols(t, j0)
        while True:
            for i in range(t + 1, m):
                if s[i][t]:
                    add_row(i, t, -(s[i][t] // s[t][t]))
            for j in range(t + 1, n):
                if s[t][j]:
                    add_col(j, t, -(s[t][j] // s[t][t]))
            rest = [(abs(s[i][t]), i, 'r') for i in range(t + 1, m) if s[i][t]]
            rest += [(abs(s[t][j]), j, 'c') for j in range(t + 1, n) if s[t][j]]
            if rest:
                _, k, kind = min(rest)
                if kind == 'r':
                    swap_rows(t, k)
                else:
                    swap_cols(t, k)
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if s[i][j] % s[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if s[t][t] < 0:
            negate_row(t)

    S = IntegerMatrix.from_rows(s, n)
    P, P_inv = IntegerMatrix.from_rows(p, m), IntegerMatrix.from_rows(p_inv, m)
    Q, Q_inv = IntegerMatrix.from_rows(q, n), IntegerMatrix.from_rows(q_inv, n)
    return SnfDecomposition(u=P_inv, s=S, v=Q_inv, u_inv=P, v_inv=Q)


def minors_gcd_factors(a: Sequence[Sequence[int]]) -> list[int]:
    """Invariant factors from gcds of k x k minors (slow, independent oracle)."""
    from itertools import combinations

    rows = [list(r) for r in a]
    m = len(rows)
    n = len(rows[0]) if rows else 0
    out, prev = [], 1
    for k in range(1, min(m, n) + 1):
        g = 0
        for ri in combinations(range(m), k):
            for ci in combinations(range(n), k):
                g = gcd(g, int_det([[rows[i][j] for j in ci] for i in ri]))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


def is_unimodular(a: IntegerMatrix) -> bool:
    return a.rows == a.cols and abs(int_det(a.tolist())) == 1


def divisibility_chain(factors: Iterable[int]) -> bool:
    f = list(factors)
    return all(b % a == 0 for a, b in zip(f, f[1:]))
