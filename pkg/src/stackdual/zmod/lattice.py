"""Full-rank or partial lattices inside ``Q^n``.

A :class:`Lattice` is stored as ``basis / denom`` with ``basis`` an integer
matrix in column Hermite form and ``denom`` the smallest positive integer that
clears all denominators.  That pair is canonical, so equality is structural.
Rational scaling is needed because coweight and weight lattices (for example
``1/2 Z h`` for PGL2) are not integral in the coroot/root coordinates used
throughout the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, List, Sequence, Tuple

from ..errors import NotSublattice, RankMismatch
from .groups import CokernelData, FinAbGroup, cokernel_data
from .matrix import IntMatrix, RatVec, common_denominator, rat_inverse, rat_solve, rat_transpose
from .normal_forms import hermite_columns, integer_kernel, smith_normal_form, unimodular_inverse


@dataclass(frozen=True)
class Lattice:
    ambient_rank: int
    basis: IntMatrix
    denom: int = 1

    @classmethod
    def from_generators(cls, gens: Iterable[Sequence], ambient_rank: int) -> "Lattice":
        gens = [tuple(Fraction(x) for x in g) for g in gens]
        for g in gens:
            if len(g) != ambient_rank:
                raise ValueError("generator has wrong length")
        d = common_denominator(x for g in gens for x in g)
        cols = [[int(x * d) for x in g] for g in gens]
        if not cols:
            return cls(ambient_rank, IntMatrix.zeros(ambient_rank, 0), 1)
        h = hermite_columns(IntMatrix.from_columns(cols, ambient_rank))
        g = d
        for row in h.entries:
            for x in row:
                g = gcd(g, x)
        if g > 1:
            h = IntMatrix([[x // g for x in row] for row in h.entries], cols=h.cols)
            d //= g
        return cls(ambient_rank, h, d)

    @classmethod
    def standard(cls, n: int) -> "Lattice":
        return cls(n, IntMatrix.identity(n), 1)

    @property
    def rank(self) -> int:
        return self.basis.cols

    def basis_vectors(self) -> List[RatVec]:
        return [tuple(Fraction(x, self.denom) for x in c) for c in self.basis.columns()]

    def basis_matrix(self) -> List[List[Fraction]]:
        """Rational ``ambient_rank x rank`` matrix whose columns are the basis."""
        return [[Fraction(x, self.denom) for x in row] for row in self.basis.entries]

    def coordinates(self, v: Sequence) -> RatVec | None:
        """Rational coordinates of ``v`` in the lattice basis, or None if outside the span."""
        return rat_solve(self.basis_matrix(), [Fraction(x) for x in v])

    def contains(self, v: Sequence) -> bool:
        c = self.coordinates(v)
        return c is not None and all(x.denominator == 1 for x in c)

    def contains_lattice(self, other: "Lattice") -> bool:
        return all(self.contains(v) for v in other.basis_vectors())

    def is_full_rank(self) -> bool:
        return self.rank == self.ambient_rank

    def dual(self) -> "Lattice":
        """``{x : <x, v> in Z for all v in self}`` for a full-rank lattice."""
        if not self.is_full_rank():
            raise RankMismatch("dual lattice needs full rank")
        inv_t = rat_transpose(rat_inverse(self.basis_matrix()))
        return Lattice.from_generators(rat_transpose(inv_t), self.ambient_rank)

    def scaled(self, k: Fraction) -> "Lattice":
        return Lattice.from_generators([[x * k for x in v] for v in self.basis_vectors()],
                                       self.ambient_rank)

    def to_json(self) -> dict:
        return {"ambient_rank": self.ambient_rank, "denominator": str(self.denom),
                "basis": self.basis.to_json()}

    def __repr__(self) -> str:
        return f"Lattice(rank={self.rank}, basis={self.basis.tolist()}, denom={self.denom})"


def hnf(lat: Lattice) -> Lattice:
    return Lattice.from_generators(lat.basis_vectors(), lat.ambient_rank)


def lattice_sum(a: Lattice, b: Lattice) -> Lattice:
    _same_ambient(a, b)
    return Lattice.from_generators(a.basis_vectors() + b.basis_vectors(), a.ambient_rank)


def lattice_intersection(a: Lattice, b: Lattice) -> Lattice:
    _same_ambient(a, b)
    n = a.ambient_rank
    d = a.denom * b.denom // gcd(a.denom, b.denom)
    ba = [[x * (d // a.denom) for x in row] for row in a.basis.entries]
    bb = [[x * (d // b.denom) for x in row] for row in b.basis.entries]
    joint = IntMatrix([ra + [-x for x in rb] for ra, rb in zip(ba, bb)], cols=a.rank + b.rank)
    gens = []
    for k in integer_kernel(joint):
        c = k[:a.rank]
        gens.append([Fraction(sum(ba[i][j] * c[j] for j in range(a.rank)), d) for i in range(n)])
    return Lattice.from_generators(gens, n)


def saturation(lat: Lattice) -> Lattice:
    """``(lat tensor Q) intersect Z^n``."""
    n = lat.ambient_rank
    if lat.rank == 0:
        return lat
    u, d, v = smith_normal_form(lat.basis)
    uinv = unimodular_inverse(u)
    return Lattice.from_generators([uinv.col(j) for j in range(lat.rank)], n)


def inclusion_matrix(big: Lattice, small: Lattice) -> IntMatrix:
    """Integer matrix expressing ``small``'s basis in ``big``'s basis."""
    _same_ambient(big, small)
    if big.rank != small.rank:
        raise RankMismatch(f"ranks differ: {big.rank} vs {small.rank}")
    cols = []
    for v in small.basis_vectors():
        c = big.coordinates(v)
        if c is None or any(x.denominator != 1 for x in c):
            raise NotSublattice(f"{v} is not in the larger lattice")
        cols.append([int(x) for x in c])
    return IntMatrix.from_columns(cols, big.rank)


@dataclass(frozen=True)
class LatticeQuotient:
    """``big / small`` with coordinates for vectors of ``big``."""

    big: Lattice
    small: Lattice
    data: CokernelData

    @property
    def group(self) -> FinAbGroup:
        return self.data.group

    def class_of(self, v: Sequence) -> Tuple[int, ...]:
        c = self.big.coordinates(v)
        if c is None or any(x.denominator != 1 for x in c):
            raise NotSublattice(f"{tuple(v)} is not in the lattice")
        return self.data.coords([int(x) for x in c])

    def representative(self, x: Sequence[int]) -> RatVec:
        c = self.data.lift(x)
        bm = self.big.basis_matrix()
        return tuple(sum((bm[i][j] * c[j] for j in range(len(c))), Fraction(0))
                     for i in range(self.big.ambient_rank))

    def generators(self) -> List[RatVec]:
        k = self.group.ngens
        return [self.representative([int(i == j) for i in range(k)]) for j in range(k)]


def finite_quotient_data(big: Lattice, small: Lattice) -> LatticeQuotient:
    return LatticeQuotient(big, small, cokernel_data(inclusion_matrix(big, small)))


def finite_quotient(big: Lattice, small: Lattice) -> FinAbGroup:
    return finite_quotient_data(big, small).group


def _same_ambient(a: Lattice, b: Lattice) -> None:
    if a.ambient_rank != b.ambient_rank:
        raise RankMismatch("lattices live in different ambient spaces")
