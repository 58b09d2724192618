"""Exact integer matrices and a few rational linear-algebra helpers.

Everything here works on Python ints and ``fractions.Fraction``; there is no
floating point anywhere in the lattice layer.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, List, Sequence, Tuple

Row = Tuple[int, ...]
RatVec = Tuple[Fraction, ...]
RatMat = List[List[Fraction]]


class IntMatrix:
    """Immutable rows x cols matrix of Python ints."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Iterable[Iterable[int]], cols: int | None = None):
        rows = tuple(tuple(int(x) for x in r) for r in entries)
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged matrix")
        self.rows = len(rows)
        self.cols = cols
        self.entries = rows

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls([[0] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def diagonal(cls, diag: Sequence[int]) -> "IntMatrix":
        n = len(diag)
        return cls([[diag[i] if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "IntMatrix":
        return cls([[c[i] for c in columns] for i in range(rows)], cols=len(columns))

    def __getitem__(self, ij: Tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> Row:
        return self.entries[i]

    def col(self, j: int) -> Row:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> List[Row]:
        return [self.col(j) for j in range(self.cols)]

    def tolist(self) -> List[List[int]]:
        return [list(r) for r in self.entries]

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix([[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)],
                         cols=self.rows)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        oc = other.columns()
        return IntMatrix([[sum(a * b for a, b in zip(r, c)) for c in oc] for r in self.entries],
                         cols=other.cols)

    def apply(self, v: Sequence[int]) -> Row:
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self.entries)

    def det(self) -> int:
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        return bareiss_det([list(r) for r in self.entries])

    def is_unimodular(self) -> bool:
        return self.rows == self.cols and abs(self.det()) == 1

    def is_diagonal(self) -> bool:
        return all(self.entries[i][j] == 0
                   for i in range(self.rows) for j in range(self.cols) if i != j)

    def diag(self) -> Row:
        return tuple(self.entries[i][i] for i in range(min(self.rows, self.cols)))

    def to_json(self) -> List[List[str]]:
        return [[str(x) for x in r] for r in self.entries]

    @classmethod
    def from_json(cls, data: Sequence[Sequence[str | int]]) -> "IntMatrix":
        return cls([[int(x) for x in r] for r in data])

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, IntMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        return f"IntMatrix({self.tolist()!r})"


def bareiss_det(a: List[List[int]]) -> int:
    """Fraction-free determinant; destroys ``a``."""
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


# --- rational helpers -------------------------------------------------------

def frac_vec(v: Iterable) -> RatVec:
    return tuple(Fraction(x) for x in v)


def common_denominator(values: Iterable[Fraction]) -> int:
    d = 1
    for x in values:
        q = Fraction(x).denominator
        d = d * q // gcd(d, q)
    return d


def _rat_dot(r: Sequence, c: Sequence) -> Fraction:
    # zero terms are skipped: the matrices here are sparse and Fraction products are slow
    acc = Fraction(0)
    for x, y in zip(r, c):
        if x and y:
            acc += x * y
    return acc


def rat_matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> RatMat:
    bt = list(zip(*b))
    return [[_rat_dot(r, c) for c in bt] for r in a]


def rat_apply(a: Sequence[Sequence], v: Sequence) -> RatVec:
    return tuple(_rat_dot(r, v) for r in a)


def rat_transpose(a: Sequence[Sequence]) -> RatMat:
    return [list(c) for c in zip(*a)]


def rat_inverse(a: Sequence[Sequence]) -> RatMat:
    """Gauss-Jordan inverse over Q; raises ``ZeroDivisionError`` when singular."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(a)]
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        m[c], m[p] = m[p], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [row[n:] for row in m]


def rat_solve(a: Sequence[Sequence], b: Sequence) -> RatVec | None:
    """One rational solution of ``a x = b`` (free variables set to zero), or None."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    m = [[Fraction(x) for x in a[i]] + [Fraction(b[i])] for i in range(rows)]
    pivots = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    if any(m[i][cols] != 0 for i in range(r, rows)):
        return None
    x = [Fraction(0)] * cols
    for i, c in enumerate(pivots):
        x[c] = m[i][cols]
    return tuple(x)


def rat_rank(a: Sequence[Sequence]) -> int:
    m = [[Fraction(x) for x in row] for row in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        for i in range(r + 1, rows):
            if m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
    return r


def frac_mod1(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


def vec_mod1(v: Iterable[Fraction]) -> RatVec:
    return tuple(frac_mod1(Fraction(x)) for x in v)
