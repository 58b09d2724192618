"""Weyl reflections on points of a maximal torus and their fixed points.

A point of the torus ``H = X_*(H) tensor C^x`` is written ``exp(2 pi i x)`` with
``x`` in ``X_*(H) tensor Q``; two vectors give the same point when they differ by
a cocharacter.  A root acts by ``alpha(exp(2 pi i x)) = e(<alpha, x>)``, and its
reflection sends ``x`` to ``x - <alpha, x> alpha^vee``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .errors import InvalidRoot, NotFixed, NotSemisimple, NotWeylStable
from .rootdata import RootDatum, simply_connected_cover
from .zmod import (FinAbGroup, IntMatrix, Phase, cokernel_data, invariant_factors_from_counts,
                   smith_normal_form)
from .zmod.lattice import finite_quotient_data
from .zmod.matrix import RatVec, rat_apply


def _pair(a: Sequence[Fraction], x: Sequence[Fraction]) -> Fraction:
    return sum((Fraction(p) * q for p, q in zip(a, x)), Fraction(0))


def _lattice_coords(d: RootDatum, x: Sequence) -> RatVec:
    c = d.cochar_lattice.coordinates(x)
    if c is None:
        raise ValueError("vector is outside X_* tensor Q")
    return c


@dataclass(frozen=True)
class TorusPoint:
    """``exp(2 pi i x)`` in the torus of ``datum``, with ``x`` reduced modulo ``X_*``."""

    datum: RootDatum
    coords: RatVec

    @classmethod
    def make(cls, datum: RootDatum, x: Sequence) -> "TorusPoint":
        y = _lattice_coords(datum, x)
        y = [v - (v.numerator // v.denominator) for v in y]
        return cls(datum, tuple(rat_apply(datum.cochar_lattice.basis_matrix(), y)))

    @classmethod
    def identity(cls, datum: RootDatum) -> "TorusPoint":
        return cls(datum, (Fraction(0),) * datum.rank)

    def lattice_coords(self) -> RatVec:
        return _lattice_coords(self.datum, self.coords)

    def __add__(self, other: "TorusPoint") -> "TorusPoint":
        return TorusPoint.make(self.datum, [a + b for a, b in zip(self.coords, other.coords)])

    def to_json(self) -> dict:
        return {"coords": [str(x) for x in self.coords],
                "lattice_coords": [str(x) for x in self.lattice_coords()]}


def _root(d: RootDatum, alpha: int) -> Tuple[RatVec, RatVec]:
    if not isinstance(alpha, int) or not 0 <= alpha < len(d.roots):
        raise InvalidRoot(f"root index {alpha!r} out of range for {len(d.roots)} roots")
    return d.roots[alpha], d.coroots[alpha]


def weyl_reflect(p: TorusPoint, alpha: int) -> TorusPoint:
    a, h = _root(p.datum, alpha)
    k = _pair(a, p.coords)
    return TorusPoint.make(p.datum, [x - k * y for x, y in zip(p.coords, h)])


def root_value(p: TorusPoint, alpha: int) -> Phase:
    """``alpha(exp(2 pi i x))`` recorded as ``<alpha, x> mod 1``."""
    a, _ = _root(p.datum, alpha)
    return Phase(_pair(a, p.coords))


def coroot_divisibility(d: RootDatum, alpha: int) -> int:
    """Largest ``m`` with ``alpha^vee / m`` in ``X_*``; always 1 or 2."""
    _, h = _root(d, alpha)
    g = 0
    for x in _lattice_coords(d, h):
        g = gcd(g, int(x))
    return g


@dataclass(frozen=True)
class FixedDecision:
    """Whether ``s_alpha`` fixes a point.

    With ``alpha^vee = m v`` for ``v`` primitive in ``X_*``, the point is fixed exactly
    when ``m <alpha, x>`` is an integer.  Half-integrality of ``<alpha, x>`` is necessary
    but only sufficient when ``m = 2``.
    """

    fixed: bool
    root_value: Phase
    coroot_divisibility: int
    half_integral: bool

    def __bool__(self) -> bool:
        return self.fixed


def is_fixed(p: TorusPoint, alpha: int) -> FixedDecision:
    a, h = _root(p.datum, alpha)
    k = _pair(a, p.coords)
    fixed = p.datum.cochar_lattice.contains([k * y for y in h])
    m = coroot_divisibility(p.datum, alpha)
    half = (2 * k).denominator == 1
    if fixed != ((m * k).denominator == 1) or (fixed and not half):
        raise AssertionError("fixed-point criterion disagrees with direct membership")
    return FixedDecision(fixed, Phase(k), m, half)


@dataclass(frozen=True)
class LiftDecision:
    """``lift`` is the preimage represented by the same vector; ``preimages`` lists all of them."""

    lifts: bool
    lift: Optional[TorusPoint]
    preimages: Tuple[TorusPoint, ...] = ()

    def __bool__(self) -> bool:
        return self.lifts


def lifts_to_simply_connected(p: TorusPoint, alpha: int) -> LiftDecision:
    """Whether a fixed point has a preimage in the simply connected cover fixed by ``s_alpha``.

    Preimages of ``x`` are ``x + lambda`` with ``lambda`` in ``X_*``; since ``<alpha, lambda>``
    is an integer they all share the root value, so either all of them are fixed or none is.
    """
    if not is_fixed(p, alpha):
        raise NotFixed("point is not fixed by the reflection")
    if root_value(p, alpha):
        return LiftDecision(False, None)
    sc = simply_connected_cover(p.datum)
    kernel = finite_quotient_data(p.datum.cochar_lattice, sc.cochar_lattice)
    pre = []
    for z in kernel.group.elements():
        lam = kernel.representative(z)
        pre.append(TorusPoint.make(sc, [a + b for a, b in zip(p.coords, lam)]))
    if not all(is_fixed(q, alpha) for q in pre):
        raise AssertionError("a preimage is not fixed in the simply connected cover")
    return LiftDecision(True, TorusPoint.make(sc, p.coords), tuple(pre))


# --- Weyl invariants ---------------------------------------------------------------

def _reflection_matrix(d: RootDatum, alpha: int) -> IntMatrix:
    """Matrix of ``s_alpha`` in the basis of ``X_*``; integral because ``X_*`` is stable."""
    basis = d.cochar_lattice.basis_vectors()
    a, h = d.roots[alpha], d.coroots[alpha]
    cols = []
    for b in basis:
        k = _pair(a, b)
        img = _lattice_coords(d, [x - k * y for x, y in zip(b, h)])
        cols.append([int(v) for v in img])
    return IntMatrix.from_columns(cols, d.rank)


@dataclass(frozen=True)
class WeylInvariants:
    """Points fixed by a set of reflections, as the group ``Z/d_1 x ... x Z/d_k``."""

    datum: RootDatum
    group: FinAbGroup
    generators: Tuple[TorusPoint, ...]
    reflections: Tuple[int, ...]

    def point(self, x: Sequence[int]) -> TorusPoint:
        acc = [Fraction(0)] * self.datum.rank
        for c, g in zip(x, self.generators):
            acc = [u + c * v for u, v in zip(acc, g.coords)]
        return TorusPoint.make(self.datum, acc)

    def points(self) -> List[TorusPoint]:
        return [self.point(x) for x in self.group.elements()]

    def class_of(self, p: TorusPoint) -> Tuple[int, ...]:
        for x in self.group.elements():
            if self.point(x) == p:
                return x
        raise NotFixed("point is not in the invariant group")

    def to_json(self) -> dict:
        return {"group": self.group.to_json(), "generators": [g.to_json() for g in self.generators]}


def torus_weyl_invariants(d: RootDatum, reflections: Iterable[int] | None = None) -> WeylInvariants:
    """Solve ``(s - 1) x in X_*`` for the given reflections (default: simple ones).

    With ``M`` the stacked ``S_i - I`` in lattice coordinates and ``U M V = D``, the
    solutions are ``V (D^+ Z^n)`` modulo ``Z^n``; a zero diagonal entry means a fixed
    subtorus.
    """
    refl = tuple(d.simple_indices) if reflections is None else tuple(reflections)
    for i in refl:
        _root(d, i)
    n = d.rank
    rows = []
    for i in refl:
        s = _reflection_matrix(d, i)
        rows += [[s[r, c] - int(r == c) for c in range(n)] for r in range(n)]
    if not rows or not d.is_semisimple():
        raise NotSemisimple("a Weyl-fixed subtorus makes the invariants infinite")
    m = IntMatrix(rows, cols=n)
    _, diag, v = smith_normal_form(m)
    divisors = [abs(diag[i, i]) if i < diag.rows else 0 for i in range(n)]
    if any(x == 0 for x in divisors):
        raise NotSemisimple("the reflections fix a subtorus")
    # D V^{-1} y in Z^n with y = V z: z_i in (1/d_i) Z
    gens, orders = [], []
    basis = d.cochar_lattice.basis_matrix()
    for i, di in enumerate(divisors):
        if di == 1:
            continue
        y = [Fraction(v[r, i], di) for r in range(n)]
        gens.append(TorusPoint.make(d, rat_apply(basis, y)))
        orders.append(di)
    gens, group = _normalize(d, gens, orders)
    return WeylInvariants(d, group, tuple(gens), refl)


def _normalize(d: RootDatum, gens: List[TorusPoint], orders: List[int]):
    """Rewrite ``prod Z/orders`` with generators ``gens`` in invariant-factor form."""
    k = len(orders)
    cd = cokernel_data(IntMatrix.diagonal(orders))
    new_gens = []
    for j in range(cd.group.ngens):
        e = [int(i == j) for i in range(cd.group.ngens)]
        c = cd.lift(e)
        acc = [Fraction(0)] * d.rank
        for ci, g in zip(c[:k], gens):
            acc = [u + ci * w for u, w in zip(acc, g.coords)]
        new_gens.append(TorusPoint.make(d, acc))
    return new_gens, cd.group


def brute_force_invariants(d: RootDatum, denominator: int,
                           reflections: Iterable[int] | None = None) -> FrozenSet[TorusPoint]:
    """All points in ``(1/denominator) X_* / X_*`` fixed by the given reflections (default: all roots)."""
    refl = range(len(d.roots)) if reflections is None else list(reflections)
    basis = d.cochar_lattice.basis_matrix()
    found = set()
    for y in product(range(denominator), repeat=d.rank):
        p = TorusPoint.make(d, rat_apply(basis, [Fraction(v, denominator) for v in y]))
        if all(weyl_reflect(p, i) == p for i in refl):
            found.add(p)
    return frozenset(found)


# --- global sections for constant cameral data -----------------------------------------

def weyl_orbit_of_roots(d: RootDatum, seeds: Iterable[int],
                        reflections: Iterable[int] | None = None) -> FrozenSet[int]:
    refl = list(d.simple_indices) if reflections is None else list(reflections)
    seen = set(seeds)
    stack = list(seen)
    while stack:
        i = stack.pop()
        for r in refl:
            j = _reflect_root(d, i, r)
            if j not in seen:
                seen.add(j)
                stack.append(j)
    return frozenset(seen)


def _reflect_root(d: RootDatum, i: int, r: int) -> int:
    a = d.roots[i]
    ar, hr = d.roots[r], d.coroots[r]
    k = _pair(a, hr)
    j = d.index_of_root([x - k * y for x, y in zip(a, ar)])
    if j < 0:
        raise AssertionError("root system is not closed under reflections")
    return j


@dataclass(frozen=True)
class JSections:
    """``{t in (H/Z)^W : alpha(t) = 1 for ramified alpha}`` inside the invariant group."""

    invariants: WeylInvariants
    group: FinAbGroup
    points: Tuple[TorusPoint, ...]
    ramified: Tuple[int, ...]
    image_of_cover: Optional[Tuple[TorusPoint, ...]] = None

    def to_json(self) -> dict:
        return {"group": self.group.to_json(), "order": self.group.order,
                "invariants": self.invariants.to_json(),
                "ramified_roots": list(self.ramified),
                "points": [p.to_json() for p in self.points]}


def j_global_sections(d: RootDatum, ramified_roots: Iterable[int],
                      reflections: Iterable[int] | None = None) -> JSections:
    ram = sorted(set(ramified_roots))
    for i in ram:
        _root(d, i)
    refl = None if reflections is None else list(reflections)
    if weyl_orbit_of_roots(d, ram, refl) != frozenset(ram):
        raise NotWeylStable("ramified roots are not closed under the Weyl action")
    inv = torus_weyl_invariants(d, refl)
    pts = [p for p in inv.points() if all(not root_value(p, a) for a in ram)]
    group = _subgroup_structure(inv, pts)
    image = None
    if len(ram) == len(d.roots) and refl is None:
        sc = simply_connected_cover(d)
        image = frozenset(TorusPoint.make(d, q.coords) for q in torus_weyl_invariants(sc).points())
        if image != frozenset(pts):
            raise AssertionError("sections with all roots ramified differ from H^W / Z")
        image = tuple(sorted(image, key=lambda p: p.coords))
    return JSections(inv, group, tuple(sorted(pts, key=lambda p: p.coords)), tuple(ram), image)


def _subgroup_structure(inv: WeylInvariants, pts: Sequence[TorusPoint]) -> FinAbGroup:
    classes = [inv.class_of(p) for p in pts]
    g = inv.group

    def torsion(m: int) -> int:
        return sum(1 for c in classes if g.scale(m, c) == g.zero())
    return FinAbGroup.from_orders(invariant_factors_from_counts(len(classes), torsion))


def point_from_coroot_multiple(d: RootDatum, alpha: int, k: Fraction) -> TorusPoint:
    """``exp(2 pi i k alpha^vee)``; convenient for rank-one examples such as ``1/4 h``."""
    _, h = _root(d, alpha)
    return TorusPoint.make(d, [k * x for x in h])
