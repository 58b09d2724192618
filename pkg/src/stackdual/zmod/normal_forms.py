"""Smith and Hermite normal forms over Z, plus the integer solvers built on them."""

from __future__ import annotations

from typing import List, Sequence, Tuple

from .matrix import IntMatrix

Mat = List[List[int]]


def _identity(n: int) -> Mat:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _snf_lists(m: Mat, rows: int, cols: int) -> Tuple[Mat, Mat, Mat]:
    a = [r[:] for r in m]
    u = _identity(rows)
    v = _identity(cols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):
        for r in a:
            r[dst] += q * r[src]
        for r in v:
            r[dst] += q * r[src]

    for t in range(min(rows, cols)):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            changed = False
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // a[t][t]))
                    if a[i][t]:
                        swap_rows(t, i)
                        changed = True
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // a[t][t]))
                    if a[t][j]:
                        swap_cols(t, j)
                        changed = True
            if changed:
                continue
            p = a[t][t]
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if a[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return u, a, v


def smith_normal_form(m: IntMatrix) -> Tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(U, D, V)`` with ``U @ m @ V == D``, U and V unimodular, D a divisor chain."""
    u, d, v = _snf_lists(m.tolist(), m.rows, m.cols)
    return (IntMatrix(u, cols=m.rows), IntMatrix(d, cols=m.cols), IntMatrix(v, cols=m.cols))


def hermite_columns(m: IntMatrix) -> IntMatrix:
    """Column-style Hermite normal form of the lattice spanned by the columns of ``m``.

    The result has independent columns in lower echelon shape: pivot rows strictly
    increase, pivots are positive, entries right of a pivot vanish and entries
    left of a pivot lie in ``[0, pivot)``.  Two generator sets span the same
    lattice exactly when their Hermite forms agree.
    """
    rows = m.rows
    cols = [list(c) for c in m.columns()]
    c = 0
    for i in range(rows):
        if c >= len(cols):
            break
        # gcd-combine row i of columns c.. into column c
        for j in range(c + 1, len(cols)):
            while cols[j][i]:
                q = cols[c][i] // cols[j][i]
                cols[c] = [x - q * y for x, y in zip(cols[c], cols[j])]
                cols[c], cols[j] = cols[j], cols[c]
        if cols[c][i] == 0:
            continue
        if cols[c][i] < 0:
            cols[c] = [-x for x in cols[c]]
        p = cols[c][i]
        for j in range(c):
            q = cols[j][i] // p
            if q:
                cols[j] = [x - q * y for x, y in zip(cols[j], cols[c])]
        c += 1
    basis = cols[:c]
    return IntMatrix.from_columns(basis, rows)


def integer_kernel(m: IntMatrix) -> List[Tuple[int, ...]]:
    """Z-basis of ``{x : m x = 0}``."""
    u, d, v = smith_normal_form(m)
    r = sum(1 for x in d.diag() if x)
    return [v.col(j) for j in range(r, m.cols)]


def solve_integer(m: IntMatrix, b: Sequence[int]) -> Tuple[int, ...] | None:
    """An integer solution of ``m x = b`` or None."""
    u, d, v = smith_normal_form(m)
    ub = u.apply(b)
    y = [0] * m.cols
    for i in range(m.rows):
        di = d[i, i] if i < m.cols else 0
        if di == 0:
            if ub[i]:
                return None
        else:
            if ub[i] % di:
                return None
            y[i] = ub[i] // di
    return v.apply(y)


def in_column_span(m: IntMatrix, b: Sequence[int]) -> bool:
    if m.cols == 0:
        return not any(b)
    return solve_integer(m, b) is not None


def unimodular_inverse(m: IntMatrix) -> IntMatrix:
    """Inverse of a unimodular integer matrix."""
    n = m.rows
    cols = []
    for j in range(n):
        e = [int(i == j) for i in range(n)]
        x = solve_integer(m, e)
        if x is None:
            raise ValueError("matrix is not unimodular")
        cols.append(x)
    return IntMatrix.from_columns(cols, n)
