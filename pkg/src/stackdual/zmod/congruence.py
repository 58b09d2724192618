"""Matrices over Z/N and lifting to GL_s(Z)."""

from __future__ import annotations

import itertools
from math import gcd
from typing import Iterator, List, Optional

from .matrix import IntMatrix
from .normal_forms import smith_normal_form, unimodular_inverse


def det_mod(m: IntMatrix, n: int) -> int:
    return m.det() % n if n > 1 else 0


def reduce_mod(m: IntMatrix, n: int) -> IntMatrix:
    return IntMatrix([[x % n for x in row] for row in m.entries], cols=m.cols)


def is_unit_mod(a: int, n: int) -> bool:
    return gcd(a, n) == 1


def _diag_lift_2x2(u: int, n: int) -> IntMatrix:
    """Integer matrix of determinant 1 congruent to ``diag(u, u^-1)`` mod ``n``."""
    n2 = n * n
    d = pow(u, -1, n2)
    c = (u * d - 1) // n2
    # [[u, n], [n*c, d]] has determinant u*d - n*n*c = 1
    return IntMatrix([[u, n], [n * c, d]])


def lift_to_gl(m: IntMatrix, n: int) -> Optional[IntMatrix]:
    """A matrix in GL_s(Z) reducing to ``m`` mod ``n``, or None if none exists.

    For s >= 2 a lift exists exactly when ``det m = +-1 mod n``, because
    SL_s(Z) -> SL_s(Z/n) is onto; for s = 1 the entry itself must be +-1 mod n.
    The construction reduces ``m`` to Smith form over Z, replaces the diagonal
    by a determinant +-1 matrix with the same residues and transforms back.
    """
    s = m.rows
    if s == 0:
        return IntMatrix.identity(0)
    if n == 1:
        return IntMatrix.identity(s)
    det = m.det() % n
    if det not in (1 % n, (-1) % n):
        return None
    if s == 1:
        return IntMatrix([[1 if m[0, 0] % n == 1 % n else -1]])
    u, d, v = smith_normal_form(m)
    diag = list(d.diag())
    uinv, vinv = unimodular_inverse(u), unimodular_inverse(v)
    # diag(d_1..d_s) = prod_i M_i * diag(1..1, eps) mod n, M_i = diag(p_i, p_i^-1) in slots i, i+1
    lift = IntMatrix.identity(s)
    p = 1
    for i in range(s - 1):
        p = p * diag[i] % n
        block = _diag_lift_2x2(p, n)
        e = [[int(a == b) for b in range(s)] for a in range(s)]
        e[i][i], e[i][i + 1] = block[0, 0], block[0, 1]
        e[i + 1][i], e[i + 1][i + 1] = block[1, 0], block[1, 1]
        lift = lift @ IntMatrix(e)
    eps_res = p * diag[s - 1] % n
    eps = 1 if eps_res == 1 % n else -1
    last = IntMatrix.diagonal([1] * (s - 1) + [eps])
    dlift = lift @ last
    result = uinv @ dlift @ vinv
    if reduce_mod(result, n) != reduce_mod(m, n) or abs(result.det()) != 1:
        raise AssertionError("lift construction failed")
    return result


def invertible_matrices_mod(s: int, n: int, det_pm1_only: bool = False) -> Iterator[IntMatrix]:
    """All s x s matrices over Z/n that are invertible (optionally with det = +-1)."""
    for entries in itertools.product(range(n), repeat=s * s):
        m = IntMatrix([entries[i * s:(i + 1) * s] for i in range(s)], cols=s)
        d = m.det() % n if n > 1 else 0
        if n == 1:
            yield m
            continue
        if det_pm1_only:
            if d in (1, n - 1):
                yield m
        elif gcd(d, n) == 1:
            yield m


def inverse_mod(m: IntMatrix, n: int) -> IntMatrix:
    """Inverse of ``m`` over Z/n (``m`` must be invertible there)."""
    s = m.rows
    det = m.det() % n
    if gcd(det, n) != 1:
        raise ValueError("matrix not invertible mod n")
    # adjugate via cofactors
    adj: List[List[int]] = [[0] * s for _ in range(s)]
    for i in range(s):
        for j in range(s):
            minor = IntMatrix([[m[a, b] for b in range(s) if b != j] for a in range(s) if a != i],
                              cols=s - 1)
            adj[j][i] = (-1) ** (i + j) * minor.det()
    dinv = pow(det, -1, n)
    return IntMatrix([[x * dinv % n for x in row] for row in adj], cols=s)
