"""Exactness checks and duals of short exact sequences ``0 -> A -> B -> C -> 0``.

An isogeny of diagonalizable groups ``1 -> K -> T1 -> T2 -> 1`` is encoded by
its cocharacter sequence ``0 -> X_*(T1) -> X_*(T2) -> K -> 0``.  Dualizing takes
characters and then the homology of the tensor product with the circle group;
on cocharacter data this is

    0 -> B^* --f^T--> A^* --delta--> C^v -> 0

with ``delta(lam)([y]) = <lam, f^{-1} y> mod 1``.  The kernel ``C^v`` of the dual
isogeny is reported through :func:`tor1_with_circle`.  Sequences of finite
groups dualize to the reversed Pontryagin sequence and sequences of lattices to
the transposed one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from ..errors import NotExact, UnsupportedShape
from .groups import FinAbGroup, FinAbHom, TorIdentification, relation_matrix, tor1_with_circle
from .matrix import IntMatrix, rat_inverse
from .normal_forms import in_column_span, integer_kernel, solve_integer


def _hstack(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    return IntMatrix([ra + rb for ra, rb in zip(a.entries, b.entries)], cols=a.cols + b.cols)


def _in_relations(g: FinAbGroup, v: Sequence[int]) -> bool:
    return g.reduce(v) == g.zero()


def kernel_generators(f: FinAbHom) -> List[Tuple[int, ...]]:
    """Generators of ``ker f`` as vectors in source coordinates."""
    joint = _hstack(f.matrix, relation_matrix(f.target))
    return [k[:f.source.ngens] for k in integer_kernel(joint)]


def exactness_report(f: FinAbHom, g: FinAbHom) -> List[str]:
    """Failures of exactness of ``0 -> A -f-> B -g-> C -> 0`` (empty when exact)."""
    problems = []
    if f.target != g.source:
        return ["middle groups differ"]
    a, b, c = f.source, f.target, g.target
    for j in range(a.ngens):
        e = [int(i == j) for i in range(a.ngens)]
        if not _in_relations(c, g(f(e))):
            problems.append("g o f != 0")
            break
    for k in kernel_generators(f):
        if not _in_relations(a, k):
            problems.append("f is not injective")
            break
    span_f = _hstack(f.matrix, relation_matrix(b)) if b.ngens else f.matrix
    for k in kernel_generators(g):
        if not in_column_span(span_f, k):
            problems.append("ker g is not contained in im f")
            break
    span_g = _hstack(g.matrix, relation_matrix(c)) if c.ngens else g.matrix
    for j in range(c.ngens):
        e = [int(i == j) for i in range(c.ngens)]
        if not in_column_span(span_g, e):
            problems.append("g is not surjective")
            break
    return problems


def check_exact(f: FinAbHom, g: FinAbHom) -> None:
    problems = exactness_report(f, g)
    if problems:
        raise NotExact("; ".join(problems))


@dataclass(frozen=True)
class DualSequence:
    """The dual sequence ``0 -> C' -f_dual-> B' -g_dual-> A' -> 0``.

    ``kernel`` identifies the finite end with ``Tor_1(-, C^x)`` when the input
    was an isogeny; it is None otherwise.
    """

    f: FinAbHom
    g: FinAbHom
    shape: str
    kernel: TorIdentification | None = None


def dualize_ses(f: FinAbHom, g: FinAbHom) -> DualSequence:
    check_exact(f, g)
    a, b, c = f.source, f.target, g.target
    if a.is_finite and b.is_finite and c.is_finite:
        return _dual_finite(f, g)
    if not a.invariant_factors and not b.invariant_factors:
        if c.is_finite:
            return _dual_isogeny(f, g)
        if not c.invariant_factors:
            return _dual_lattices(f, g)
    raise UnsupportedShape(
        f"dualization implemented for finite, lattice, and isogeny sequences; got {a} -> {b} -> {c}")


def _dual_hom(h: FinAbHom) -> FinAbHom:
    """Pontryagin transpose ``h^v : target^v -> source^v``."""
    s, t = h.source.invariant_factors, h.target.invariant_factors
    rows = [[h.matrix[i, j] * s[j] // t[i] for i in range(len(t))] for j in range(len(s))]
    return FinAbHom(FinAbGroup(t), FinAbGroup(s), IntMatrix(rows, cols=len(t)))


def _dual_finite(f: FinAbHom, g: FinAbHom) -> DualSequence:
    return DualSequence(_dual_hom(g), _dual_hom(f), "finite")


def _dual_lattices(f: FinAbHom, g: FinAbHom) -> DualSequence:
    a, b, c = f.source, f.target, g.target
    return DualSequence(FinAbHom(FinAbGroup((), c.free_rank), FinAbGroup((), b.free_rank), g.matrix.T),
                        FinAbHom(FinAbGroup((), b.free_rank), FinAbGroup((), a.free_rank), f.matrix.T),
                        "lattice")


def _dual_isogeny(f: FinAbHom, g: FinAbHom) -> DualSequence:
    a, b, c = f.source, f.target, g.target
    if a.free_rank != b.free_rank:
        raise NotExact("isogeny needs lattices of equal rank")
    n = a.free_rank
    finv = rat_inverse(f.matrix.tolist())
    span_g = _hstack(g.matrix, relation_matrix(c)) if c.ngens else g.matrix
    lifts = []
    for j in range(c.ngens):
        e = [int(i == j) for i in range(c.ngens)]
        sol = solve_integer(span_g, e)
        lifts.append(sol[:b.ngens])
    # delta(e_lam)(c_j) = sum_k finv[lam][k] * lift_j[k]
    rows = []
    for j, d in enumerate(c.invariant_factors):
        y = lifts[j]
        row = []
        for lam in range(n):
            val = sum((finv[lam][k] * y[k] for k in range(n)), Fraction(0))
            row.append(int(val * d) % d)
        rows.append(row)
    b_star = FinAbGroup((), b.free_rank)
    a_star = FinAbGroup((), a.free_rank)
    cdual = FinAbGroup(c.invariant_factors)
    f_dual = FinAbHom(b_star, a_star, f.matrix.T)
    g_dual = FinAbHom(a_star, cdual, IntMatrix(rows, cols=n))
    return DualSequence(f_dual, g_dual, "isogeny", tor1_with_circle(cdual))
