"""The finite symplectic module ``H^1(C; A) = A^{2g}`` and its subgroups.

Elements are flat integer tuples laid out as ``(a_1, ..., a_g, b_1, ..., b_g)`` where each
block is an element of ``A`` in its own coordinates (A-cycles first, then B-cycles).  With
``u`` the symmetric pairing on ``A``::

    w((a, b), (a', b')) = sum_i u(a_i, b'_i) - u(a'_i, b_i)

Subgroups are stored as frozensets of elements; that makes equality canonical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

import numpy as np

from .errors import CapExceeded, Degenerate, NotASubgroup, NotContained
from .rootdata import center, center_pairing
from .zmod import FinAbGroup, Pairing, Phase, invariant_factors_from_counts

Elem = Tuple[int, ...]
DEFAULT_CAP = 2 ** 16


@dataclass(frozen=True)
class SymplecticModule:
    coefficient: FinAbGroup
    pairing: Optional[Pairing]
    genus: int

    def __post_init__(self):
        if self.genus < 1:
            raise ValueError("genus must be at least 1")
        if not self.coefficient.is_finite:
            raise ValueError("coefficient group must be finite")
        if self.coefficient.ngens and (self.pairing is None or not self.pairing.is_perfect()):
            raise Degenerate("coefficient pairing must be perfect")

    @classmethod
    def from_datum(cls, datum, genus: int) -> "SymplecticModule":
        """``H^1(C; Z)`` for the center ``Z`` of a simply connected datum."""
        cd = center(datum)
        p = center_pairing(datum) if cd.group.ngens else None
        return cls(cd.group, p, genus)

    @property
    def block(self) -> int:
        return self.coefficient.ngens

    @cached_property
    def moduli(self) -> Tuple[int, ...]:
        return tuple(self.coefficient.moduli) * (2 * self.genus)

    @property
    def order(self) -> int:
        return self.coefficient.order ** (2 * self.genus)

    @property
    def layout(self) -> str:
        return f"{self.genus} A-cycles then {self.genus} B-cycles, each a {self.coefficient} block"

    def zero(self) -> Elem:
        return (0,) * len(self.moduli)

    def reduce(self, x: Sequence[int]) -> Elem:
        return tuple(int(v) % m for v, m in zip(x, self.moduli))

    def add(self, x: Elem, y: Elem) -> Elem:
        return tuple((a + b) % m for a, b, m in zip(x, y, self.moduli))

    def neg(self, x: Elem) -> Elem:
        return tuple((-a) % m for a, m in zip(x, self.moduli))

    def scale(self, k: int, x: Elem) -> Elem:
        return tuple((k * a) % m for a, m in zip(x, self.moduli))

    def elements(self) -> Iterator[Elem]:
        return product(*[range(m) for m in self.moduli])

    def cycle(self, x: Elem, i: int) -> Elem:
        """Coordinates of the ``i``-th block (``0 .. 2g-1``) of ``x``."""
        k = self.block
        return tuple(x[i * k:(i + 1) * k])

    def omega(self, x: Elem, y: Elem) -> Phase:
        if not self.block:
            return Phase(0)
        g, p = self.genus, self.pairing
        acc = Phase(0)
        for i in range(g):
            acc = acc + p(self.cycle(x, i), self.cycle(y, g + i)) - p(self.cycle(y, i), self.cycle(x, g + i))
        return acc

    def element(self, a_cycles: Sequence[Sequence[int]], b_cycles: Sequence[Sequence[int]]) -> Elem:
        flat = [v for blk in list(a_cycles) + list(b_cycles) for v in blk]
        return self.reduce(flat)

    def a_part(self, x: Elem) -> Elem:
        n = self.genus * self.block
        return tuple(x[:n]) + (0,) * n

    def b_part(self, x: Elem) -> Elem:
        n = self.genus * self.block
        return (0,) * n + tuple(x[n:])

    def to_json(self) -> dict:
        return {"coefficient": self.coefficient.to_json(), "genus": self.genus,
                "order": self.order, "layout": self.layout,
                "pairing_gram": self.pairing.gram_json() if self.pairing else []}


# --- subgroups ----------------------------------------------------------------------

@dataclass(frozen=True)
class Subgroup:
    ambient: SymplecticModule = field(compare=False)
    elements: FrozenSet[Elem]

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def sorted_elements(self) -> Tuple[Elem, ...]:
        return tuple(sorted(self.elements))

    @cached_property
    def generators(self) -> Tuple[Elem, ...]:
        """Greedy generating set: scan elements in sorted order, keep those outside the span so far."""
        m = self.ambient
        span: Set[Elem] = {m.zero()}
        gens = []
        for x in self.sorted_elements:
            if x not in span:
                gens.append(x)
                span = set(_extend(m, frozenset(span), x))
        return tuple(gens)

    def __contains__(self, x: Elem) -> bool:
        return tuple(x) in self.elements

    def sort_key(self) -> Tuple:
        return (self.order, self.sorted_elements)

    def structure(self) -> FinAbGroup:
        m = self.ambient
        els = self.elements

        def torsion(k: int) -> int:
            z = m.zero()
            return sum(1 for x in els if m.scale(k, x) == z)
        return FinAbGroup.from_orders(invariant_factors_from_counts(self.order, torsion))

    def to_json(self) -> dict:
        return {"order": self.order, "structure": str(self.structure()),
                "generators": [list(g) for g in self.generators]}


def _extend(m: SymplecticModule, s: FrozenSet[Elem], x: Elem) -> FrozenSet[Elem]:
    """``<s, x>`` for a subgroup ``s``: union of cosets ``s + k x``."""
    out = set(s)
    kx = x
    while kx not in s:
        out.update(m.add(y, kx) for y in s)
        kx = m.add(kx, x)
    return frozenset(out)


def span(m: SymplecticModule, gens: Iterable[Sequence[int]]) -> Subgroup:
    s = frozenset([m.zero()])
    for g in gens:
        s = _extend(m, s, m.reduce(g))
    return Subgroup(m, s)


def subgroup_from_elements(m: SymplecticModule, elements: Iterable[Sequence[int]]) -> Subgroup:
    els = frozenset(m.reduce(x) for x in elements)
    if m.zero() not in els or any(m.add(x, y) not in els for x in els for y in els):
        raise NotASubgroup("elements are not closed under addition")
    return Subgroup(m, els)


class _Table:
    """Elements indexed ``0 .. |M|-1`` in ``itertools.product`` order, with an integer form.

    ``w(x, y) = (x^T W y mod e) / e`` where ``e`` is the exponent of the coefficient group.
    """

    def __init__(self, m: SymplecticModule):
        self.module = m
        self.mod = np.array(m.moduli, dtype=np.int64)
        n = len(m.moduli)
        w = np.ones(n, dtype=np.int64)
        for k in range(n - 2, -1, -1):
            w[k] = w[k + 1] * self.mod[k + 1]
        self.weights = w
        self.size = m.order
        self.digits = np.array(list(m.elements()), dtype=np.int64).reshape(self.size, n)
        self.e = m.coefficient.exponent if m.block else 1
        form = np.zeros((n, n), dtype=np.int64)
        k, g = m.block, m.genus
        if k:
            gram = [[int(x * self.e) for x in row] for row in m.pairing.gram]
            for i in range(g):
                for r in range(k):
                    for c in range(k):
                        form[i * k + r, (g + i) * k + c] += gram[r][c]
                        form[(g + i) * k + r, i * k + c] -= gram[c][r]
        self.rows = (self.digits @ form) % self.e

    def index(self, x: Sequence[int]) -> int:
        return int(np.dot(np.asarray(x, dtype=np.int64) % self.mod, self.weights))

    def element(self, i: int) -> Elem:
        return tuple(int(v) for v in self.digits[i])

    def add(self, idx: np.ndarray, j: int) -> np.ndarray:
        return ((self.digits[idx] + self.digits[j]) % self.mod) @ self.weights

    def perp(self, idx: np.ndarray, pool: np.ndarray | None = None) -> np.ndarray:
        """Indices ``y`` (from ``pool``, default all) with ``w(y, x) = 0`` for every ``x`` in ``idx``."""
        pool = np.arange(self.size) if pool is None else pool
        vals = (self.rows[pool] @ self.digits[idx].T) % self.e
        return pool[~vals.any(axis=1)]

    def extend(self, s: np.ndarray, x: int) -> np.ndarray:
        members = np.zeros(self.size, dtype=bool)
        members[s] = True
        parts, kx = [s], x
        while not members[kx]:
            parts.append(self.add(s, kx))
            kx = int(self.add(np.array([kx]), x)[0])
        return np.sort(np.concatenate(parts))

    def prime_steps(self, s: np.ndarray, pool: np.ndarray) -> Iterator[np.ndarray]:
        """``<s, x>`` for ``x`` in ``pool`` (a subgroup containing ``s``) of prime order mod ``s``."""
        members = np.zeros(self.size, dtype=bool)
        members[s] = True
        coset_sums = (self.digits[pool][:, None, :] + self.digits[s][None, :, :]) % self.mod
        labels = np.unique((coset_sums @ self.weights).min(axis=1))
        for x in labels.tolist():
            if members[x]:
                continue
            k, kx = 1, x
            while not members[kx]:
                kx = int(self.add(np.array([kx]), x)[0])
                k += 1
            if _prime_index(k):
                yield self.extend(s, x)

    def subgroup(self, idx: np.ndarray) -> "Subgroup":
        return Subgroup(self.module, frozenset(map(tuple, self.digits[idx].tolist())))

    def indices(self, gamma: "Subgroup") -> np.ndarray:
        return np.sort(np.array([self.index(x) for x in gamma.elements], dtype=np.int64))


_TABLES: Dict[SymplecticModule, _Table] = {}


def _table(m: SymplecticModule) -> _Table:
    t = _TABLES.get(m)
    if t is None:
        t = _TABLES[m] = _Table(m)
    return t


def annihilator(gamma: Subgroup) -> Subgroup:
    t = _table(gamma.ambient)
    return t.subgroup(t.perp(t.indices(gamma)))


def is_isotropic(gamma: Subgroup) -> bool:
    t = _table(gamma.ambient)
    idx = t.indices(gamma)
    return len(t.perp(idx, idx)) == len(idx)


def is_lagrangian(gamma: Subgroup) -> bool:
    return is_isotropic(gamma) and gamma.order ** 2 == gamma.ambient.order


def _check_cap(m: SymplecticModule, cap: int) -> None:
    if m.order > cap:
        raise CapExceeded(f"module has {m.order} elements, above the cap {cap}")


def _prime_index(k: int) -> bool:
    return k > 1 and all(k % p for p in range(2, int(k ** 0.5) + 1))


def _bfs(t: _Table, isotropic_only: bool, stop_order: int | None) -> Set[Tuple[int, ...]]:
    """Subgroups reachable from 0 by prime-index steps; optionally only isotropic ones."""
    zero = np.array([0], dtype=np.int64)
    seen = {(0,)}
    frontier = [zero]
    everything = np.arange(t.size)
    while frontier:
        nxt = []
        for s in frontier:
            if stop_order is not None and len(s) == stop_order:
                continue
            pool = t.perp(s) if isotropic_only else everything
            for u in t.prime_steps(s, pool):
                key = tuple(u.tolist())
                if key not in seen:
                    seen.add(key)
                    nxt.append(u)
        frontier = nxt
    return seen


def subgroup_indices(m: SymplecticModule, cap: int = 2 ** 12) -> List[Tuple[int, ...]]:
    """All subgroups as sorted index tuples into the product-ordered element list."""
    _check_cap(m, cap)
    return sorted(_bfs(_table(m), False, None), key=lambda k: (len(k), k))


def all_subgroups(m: SymplecticModule, cap: int = 2 ** 12) -> List[Subgroup]:
    """Every subgroup, reached from 0 through steps of prime index."""
    t = _table(m)
    return sorted((t.subgroup(np.array(k)) for k in subgroup_indices(m, cap)), key=Subgroup.sort_key)


def enumerate_lagrangians(m: SymplecticModule, cap: int = DEFAULT_CAP) -> List[Subgroup]:
    """Backtracking over isotropic subgroups grown by prime-index steps inside the annihilator."""
    _check_cap(m, cap)
    target = _isqrt_exact(m.order)
    t = _table(m)
    found = [k for k in _bfs(t, True, target) if len(k) == target]
    out = sorted((t.subgroup(np.array(k)) for k in found), key=Subgroup.sort_key)
    for g in out:
        if not is_lagrangian(g):
            raise AssertionError("enumerated subgroup is not Lagrangian")
    return out


def _isqrt_exact(n: int) -> int:
    r = math.isqrt(n)
    if r * r != n:
        raise Degenerate("module order is not a square")
    return r


def subgroup_quotient(small: Subgroup, big: Subgroup) -> FinAbGroup:
    if not small.elements <= big.elements:
        raise NotContained("first subgroup is not contained in the second")
    m = big.ambient
    n = big.order // small.order

    def torsion(k: int) -> int:
        return sum(1 for x in big.elements if m.scale(k, x) in small.elements) // small.order
    return FinAbGroup.from_orders(invariant_factors_from_counts(n, torsion))


def quotient_dual_check(gamma: Subgroup) -> Dict[str, object]:
    """``ann(gamma) -> (M / gamma)^dual``, ``x -> w(x, -)``: well defined and bijective."""
    m = gamma.ambient
    ann = annihilator(gamma)
    whole = Subgroup(m, frozenset(m.elements()))
    quotient = subgroup_quotient(gamma, whole)
    reps: Dict[Elem, Elem] = {}
    for y in m.elements():
        key = min(m.add(y, g) for g in gamma.elements)
        reps.setdefault(key, y)
    chars = set()
    for x in ann.elements:
        if any(m.omega(x, g) for g in gamma.generators):
            return {"ok": False, "reason": "character not trivial on gamma"}
        chars.add(tuple(m.omega(x, y) for y in reps.values()))
    injective = len(chars) == ann.order
    return {"ok": injective and ann.order == quotient.order, "quotient": quotient.to_json(),
            "annihilator_order": ann.order}
