"""Finitely generated abelian groups in invariant-factor form, their maps and duals.

A :class:`FinAbGroup` is ``Z/d_1 + ... + Z/d_k + Z^r`` with ``d_1 | ... | d_k``
and every ``d_i >= 2``.  Elements are integer tuples of length ``k + r``: the
torsion coordinates come first (reduced into ``[0, d_i)``), the free ones last.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .matrix import IntMatrix
from .normal_forms import smith_normal_form, unimodular_inverse

Elem = Tuple[int, ...]


class Phase:
    """An element of Q/Z, kept as a reduced fraction in ``[0, 1)``."""

    __slots__ = ("value",)

    def __init__(self, numerator: int | Fraction = 0, denominator: int = 1):
        v = Fraction(numerator) / denominator
        self.value = v - (v.numerator // v.denominator)

    @property
    def numerator(self) -> int:
        return self.value.numerator

    @property
    def denominator(self) -> int:
        return self.value.denominator

    def __add__(self, other: "Phase") -> "Phase":
        return Phase(self.value + _as_frac(other))

    __radd__ = __add__

    def __sub__(self, other: "Phase") -> "Phase":
        return Phase(self.value - _as_frac(other))

    def __neg__(self) -> "Phase":
        return Phase(-self.value)

    def __mul__(self, k: int) -> "Phase":
        return Phase(self.value * k)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Phase):
            return self.value == other.value
        if isinstance(other, (int, Fraction)):
            return self == Phase(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.value)

    def __bool__(self) -> bool:
        return self.value != 0

    def exp(self) -> complex:
        import cmath
        return cmath.exp(2j * cmath.pi * float(self.value))

    def to_json(self) -> str:
        return f"{self.numerator}/{self.denominator}"

    def __repr__(self) -> str:
        return f"Phase({self.numerator}/{self.denominator})"


def _as_frac(x: "Phase | int | Fraction") -> Fraction:
    return x.value if isinstance(x, Phase) else Fraction(x)


@dataclass(frozen=True)
class FinAbGroup:
    invariant_factors: Tuple[int, ...] = ()
    free_rank: int = 0
    presentation: Optional[IntMatrix] = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        f = tuple(int(d) for d in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", f)
        if any(d < 2 for d in f):
            raise ValueError(f"invariant factors must be >= 2: {f}")
        if any(b % a for a, b in zip(f, f[1:])):
            raise ValueError(f"invariant factors must form a divisor chain: {f}")
        if self.free_rank < 0:
            raise ValueError("negative free rank")

    @classmethod
    def from_orders(cls, orders: Iterable[int], free_rank: int = 0) -> "FinAbGroup":
        """Normalize ``Z/n_1 + ... + Z/n_k + Z^r`` (orders 0 and 1 allowed)."""
        orders = list(orders)
        if not orders:
            return cls((), free_rank)
        g = cokernel(IntMatrix.diagonal(orders))
        return cls(g.invariant_factors, g.free_rank + free_rank)

    @classmethod
    def cyclic(cls, n: int) -> "FinAbGroup":
        return cls.from_orders([n])

    @property
    def ngens(self) -> int:
        return len(self.invariant_factors) + self.free_rank

    @property
    def moduli(self) -> Tuple[int, ...]:
        """Per-coordinate modulus, 0 for free coordinates."""
        return self.invariant_factors + (0,) * self.free_rank

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self) -> int:
        if self.free_rank:
            raise ValueError("infinite group has no order")
        n = 1
        for d in self.invariant_factors:
            n *= d
        return n

    @property
    def exponent(self) -> int:
        if self.free_rank:
            return 0
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def is_trivial(self) -> bool:
        return not self.invariant_factors and not self.free_rank

    def zero(self) -> Elem:
        return (0,) * self.ngens

    def reduce(self, x: Sequence[int]) -> Elem:
        if len(x) != self.ngens:
            raise ValueError(f"element {tuple(x)} has wrong length for {self}")
        return tuple(int(a) % m if m else int(a) for a, m in zip(x, self.moduli))

    def contains(self, x: Sequence[int]) -> bool:
        return len(x) == self.ngens and all(
            (0 <= a < m) if m else True for a, m in zip(x, self.moduli))

    def add(self, x: Sequence[int], y: Sequence[int]) -> Elem:
        return self.reduce([a + b for a, b in zip(x, y)])

    def neg(self, x: Sequence[int]) -> Elem:
        return self.reduce([-a for a in x])

    def scale(self, k: int, x: Sequence[int]) -> Elem:
        return self.reduce([k * a for a in x])

    def element_order(self, x: Sequence[int]) -> int:
        if any(x[len(self.invariant_factors):]):
            return 0
        n = 1
        for a, d in zip(x, self.invariant_factors):
            k = d // gcd(a, d)
            n = n * k // gcd(n, k)
        return n

    def elements(self) -> Iterator[Elem]:
        if self.free_rank:
            raise ValueError("cannot enumerate an infinite group")
        return itertools.product(*(range(d) for d in self.invariant_factors))

    def to_json(self) -> dict:
        return {"invariant_factors": list(self.invariant_factors), "free_rank": self.free_rank}

    @classmethod
    def from_json(cls, data: dict) -> "FinAbGroup":
        return cls.from_orders(data.get("invariant_factors", []), data.get("free_rank", 0))

    def __str__(self) -> str:
        parts = [f"Z/{d}" for d in self.invariant_factors]
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " x ".join(parts) if parts else "trivial"


@dataclass(frozen=True)
class CokernelData:
    """``Z^n / im(M)`` together with the coordinate change into canonical form.

    ``coords(v)`` sends a vector of ``Z^n`` to its canonical element and
    ``lift(x)`` sends a canonical element back to a representative in ``Z^n``.
    """

    group: FinAbGroup
    to_coords: IntMatrix  # ngens x n
    lifts: IntMatrix  # n x ngens

    def coords(self, v: Sequence[int]) -> Elem:
        return self.group.reduce(self.to_coords.apply(v))

    def lift(self, x: Sequence[int]) -> Tuple[int, ...]:
        return self.lifts.apply(x)


def cokernel_data(m: IntMatrix) -> CokernelData:
    n = m.rows
    if m.cols == 0:
        m = IntMatrix.zeros(n, 1)
    u, d, _ = smith_normal_form(m)
    diag = [d[i, i] if i < d.cols else 0 for i in range(n)]
    uinv = unimodular_inverse(u) if n else IntMatrix.identity(0)
    tors = [i for i in range(n) if diag[i] > 1]
    free = [i for i in range(n) if diag[i] == 0]
    keep = tors + free
    group = FinAbGroup(tuple(diag[i] for i in tors), len(free), presentation=m)
    to_coords = IntMatrix([u.row(i) for i in keep], cols=n)
    lifts = IntMatrix.from_columns([uinv.col(i) for i in keep], n)
    return CokernelData(group, to_coords, lifts)


def cokernel(m: IntMatrix) -> FinAbGroup:
    """Cokernel of ``m : Z^cols -> Z^rows`` with free rank carried separately."""
    return cokernel_data(m).group


def relation_matrix(g: FinAbGroup) -> IntMatrix:
    return IntMatrix.diagonal(list(g.moduli))


@dataclass(frozen=True)
class FinAbHom:
    """Homomorphism ``source -> target`` given on canonical generators."""

    source: FinAbGroup
    target: FinAbGroup
    matrix: IntMatrix

    def __post_init__(self):
        m = self.matrix
        if (m.rows, m.cols) != (self.target.ngens, self.source.ngens):
            raise ValueError("matrix shape does not match groups")
        red = IntMatrix([[x % mt if mt else x for x in row]
                         for row, mt in zip(m.entries, self.target.moduli)], cols=m.cols)
        object.__setattr__(self, "matrix", red)
        for i, mt in enumerate(self.target.moduli):
            for j, ms in enumerate(self.source.moduli):
                x = red[i, j]
                if ms == 0:
                    continue
                if (mt == 0 and x) or (mt and (x * ms) % mt):
                    raise ValueError(f"entry ({i},{j}) = {x} is not well defined")

    def __call__(self, x: Sequence[int]) -> Elem:
        return self.target.reduce(self.matrix.apply(x))

    def compose(self, first: "FinAbHom") -> "FinAbHom":
        """``self o first``."""
        return FinAbHom(first.source, self.target, self.matrix @ first.matrix)

    @classmethod
    def identity(cls, g: FinAbGroup) -> "FinAbHom":
        return cls(g, g, IntMatrix.identity(g.ngens))

    def is_bijective(self) -> bool:
        if not (self.source.is_finite and self.target.is_finite):
            raise ValueError("bijectivity check needs finite groups")
        if self.source.order != self.target.order:
            return False
        return len({self(x) for x in self.source.elements()}) == self.target.order


@dataclass(frozen=True)
class Pairing:
    """Bilinear map ``left x right -> Q/Z`` given by a Gram matrix of fractions."""

    left: FinAbGroup
    right: FinAbGroup
    gram: Tuple[Tuple[Fraction, ...], ...]

    def __call__(self, x: Sequence[int], y: Sequence[int]) -> Phase:
        s = Fraction(0)
        for i, a in enumerate(x):
            if a:
                row = self.gram[i]
                s += a * sum((row[j] * b for j, b in enumerate(y) if b), Fraction(0))
        return Phase(s)

    def adjoint(self) -> Callable[[Sequence[int]], Elem]:
        """``x -> pairing(x, -)`` written in coordinates of the dual of ``right``."""
        def f(x):
            out = []
            for j, d in enumerate(self.right.invariant_factors):
                v = sum((a * self.gram[i][j] for i, a in enumerate(x)), Fraction(0)) * d
                out.append(int(v) % d)
            return tuple(out)
        return f

    def is_perfect(self) -> bool:
        """Exhaustive check that both adjoint maps are injective."""
        if self.left.order != self.right.order:
            return False
        f = self.adjoint()
        if len({f(x) for x in self.left.elements()}) != self.left.order:
            return False
        flipped = Pairing(self.right, self.left, tuple(zip(*self.gram)) if self.gram else ())
        g = flipped.adjoint()
        return len({g(y) for y in self.right.elements()}) == self.right.order

    def is_symmetric(self) -> bool:
        n = len(self.gram)
        return all(Phase(self.gram[i][j]) == Phase(self.gram[j][i])
                   for i in range(n) for j in range(n))

    def gram_json(self) -> List[List[str]]:
        return [[Phase(x).to_json() for x in row] for row in self.gram]


def pontryagin_dual(a: FinAbGroup) -> Tuple[FinAbGroup, Pairing]:
    """Character group with the evaluation pairing ``(x, chi) -> sum x_i chi_i / d_i``."""
    if a.free_rank:
        raise ValueError("Pontryagin dual is only defined here for finite groups")
    dual = FinAbGroup(a.invariant_factors)
    k = len(a.invariant_factors)
    gram = tuple(tuple(Fraction(1, a.invariant_factors[i]) if i == j else Fraction(0)
                       for j in range(k)) for i in range(k))
    return dual, Pairing(a, dual, gram)


def double_dual_evaluation(a: FinAbGroup) -> Callable[[Elem], Elem]:
    """The evaluation map ``A -> A^vv`` in canonical coordinates."""
    dual, ev = pontryagin_dual(a)
    ddual, ev2 = pontryagin_dual(dual)

    def f(x):
        # find psi in A^vv with psi(chi) = chi(x); coordinates read off on basis characters
        out = []
        for j, d in enumerate(dual.invariant_factors):
            chi = tuple(int(i == j) for i in range(len(dual.invariant_factors)))
            out.append(int(ev(x, chi).value * d) % d)
        return tuple(out)
    return f


@dataclass(frozen=True)
class TorIdentification:
    """``Tor_1(A, C^x)`` with its identification to ``A``.

    ``circle_point(x)`` gives the torsion point of ``(C^x)^k`` (as phases) that
    corresponds to the element ``x`` of the returned group.
    """

    group: FinAbGroup
    source: FinAbGroup

    def to_source(self, x: Sequence[int]) -> Elem:
        return self.source.reduce(x)

    def circle_point(self, x: Sequence[int]) -> Tuple[Phase, ...]:
        return tuple(Phase(a, d) for a, d in zip(x, self.source.invariant_factors))


def tor1_with_circle(a: FinAbGroup) -> TorIdentification:
    if a.free_rank:
        # Tor vanishes on free summands
        a_tors = FinAbGroup(a.invariant_factors)
        return TorIdentification(a_tors, a_tors)
    return TorIdentification(FinAbGroup(a.invariant_factors), a)


def invariant_factors_from_counts(order: int, torsion_count: Callable[[int], int]) -> Tuple[int, ...]:
    """Invariant factors of a finite abelian group of given order.

    ``torsion_count(n)`` must return ``|{x : n x = 0}|``.  Independent of any
    presentation, so it doubles as an oracle for SNF-derived answers.
    """
    primes = _prime_factors(order)
    parts: Dict[int, List[int]] = {}
    for p in primes:
        counts = [1]
        e = 1
        while True:
            c = torsion_count(p ** e)
            counts.append(c)
            if c == counts[-2]:
                break
            e += 1
        # number of cyclic p-factors of exponent >= j is log_p(counts[j]/counts[j-1])
        ge = []
        for j in range(1, len(counts)):
            ratio = counts[j] // counts[j - 1]
            k = 0
            while ratio > 1:
                ratio //= p
                k += 1
            ge.append(k)
        exps = []
        for j, k in enumerate(ge):
            nxt = ge[j + 1] if j + 1 < len(ge) else 0
            exps += [j + 1] * (k - nxt)
        parts[p] = sorted(exps, reverse=True)
    width = max((len(v) for v in parts.values()), default=0)
    factors = [1] * width
    for p, exps in parts.items():
        for i, e in enumerate(exps):
            factors[width - 1 - i] *= p ** e
    return tuple(f for f in factors if f > 1)


def _prime_factors(n: int) -> List[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out
