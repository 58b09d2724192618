"""Root data of simple and semisimple groups, centers, Langlands duality, isomorphism.

Coordinates: for a simply connected semisimple group of rank r the cocharacter
space is ``Q^r`` with the simple coroots as standard basis, and the character
space is its dual with the standard pairing.  Simple roots are then the rows of
the Cartan matrix ``C[i][j] = <alpha_i, alpha_j^vee>``.  The coroot lattice is
``Z^r`` (cocharacters of the simply connected form) and the coweight lattice,
dual to the root lattice, gives the cocharacters of the adjoint form, so the
center of the simply connected group is coweights modulo coroots.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import InvalidType, NotCentralSubgroup, NotSemisimple, NotSimplyConnected
from .zmod import FinAbGroup, IntMatrix, Lattice, LatticeQuotient, Pairing
from .zmod.congruence import invertible_matrices_mod, lift_to_gl
from .zmod.lattice import finite_quotient_data
from .zmod.matrix import (RatVec, common_denominator, rat_apply, rat_inverse, rat_matmul,
                          rat_solve, rat_transpose, vec_mod1)
from .zmod.normal_forms import integer_kernel

Vec = Tuple[Fraction, ...]

_RANK_OK = {
    "A": lambda n: n >= 1,
    "B": lambda n: n >= 2,
    "C": lambda n: n >= 2,
    "D": lambda n: n >= 2,
    "E": lambda n: n in (6, 7, 8),
    "F": lambda n: n == 4,
    "G": lambda n: n == 2,
}


@dataclass(frozen=True, order=True)
class SimpleType:
    family: str
    rank: int

    def __post_init__(self):
        if self.family not in _RANK_OK or not isinstance(self.rank, int) \
                or not _RANK_OK[self.family](self.rank):
            raise InvalidType(f"no Dynkin type {self.family}{self.rank}")

    @classmethod
    def parse(cls, label: str) -> "SimpleType":
        label = label.strip()
        try:
            return cls(label[0].upper(), int(label[1:]))
        except (IndexError, ValueError):
            raise InvalidType(f"cannot parse Dynkin label {label!r}") from None

    @property
    def label(self) -> str:
        return f"{self.family}{self.rank}"

    @property
    def simply_laced(self) -> bool:
        return self.family in "ADE"

    def dual(self) -> "SimpleType":
        return SimpleType({"B": "C", "C": "B"}.get(self.family, self.family), self.rank)

    def __str__(self) -> str:
        return self.label


def parse_types(label: str) -> Tuple[SimpleType, ...]:
    """``"A1+A1"`` or ``"D4"`` -> tuple of simple types."""
    parts = [p for p in label.replace("x", "+").replace("×", "+").split("+") if p.strip()]
    if not parts:
        raise InvalidType(f"empty type label {label!r}")
    return tuple(SimpleType.parse(p) for p in parts)


def types_label(types: Sequence[SimpleType]) -> str:
    return "+".join(t.label for t in types)


# --- Euclidean models -------------------------------------------------------

def _e(n: int, *pairs) -> Vec:
    v = [Fraction(0)] * n
    for i, c in pairs:
        v[i] += Fraction(c)
    return tuple(v)


def euclidean_simple_roots(t: SimpleType) -> List[Vec]:
    """Bourbaki simple roots in an orthonormal basis."""
    n, f = t.rank, t.family
    if f == "A":
        return [_e(n + 1, (i, 1), (i + 1, -1)) for i in range(n)]
    if f in "BCD":
        out = [_e(n, (i, 1), (i + 1, -1)) for i in range(n - 1)]
        if f == "B":
            out.append(_e(n, (n - 1, 1)))
        elif f == "C":
            out.append(_e(n, (n - 1, 2)))
        else:
            out.append(_e(n, (n - 2, 1), (n - 1, 1)))
        return out
    if f == "E":
        h = Fraction(1, 2)
        e8 = [tuple([h, -h, -h, -h, -h, -h, -h, h]), _e(8, (0, 1), (1, 1))]
        e8 += [_e(8, (i, 1), (i - 1, -1)) for i in range(1, 7)]
        return e8[:n]
    if f == "F":
        h = Fraction(1, 2)
        return [_e(4, (1, 1), (2, -1)), _e(4, (2, 1), (3, -1)), _e(4, (3, 1)), (h, -h, -h, -h)]
    if f == "G":
        return [_e(3, (0, 1), (1, -1)), _e(3, (0, -2), (1, 1), (2, 1))]
    raise InvalidType(str(t))


def _dot(a: Sequence, b: Sequence) -> Fraction:
    return sum((Fraction(x) * y for x, y in zip(a, b)), Fraction(0))


def cartan_matrix(t: SimpleType) -> List[List[int]]:
    """``C[i][j] = <alpha_i, alpha_j^vee> = 2 (alpha_i, alpha_j) / (alpha_j, alpha_j)``."""
    return [list(r) for r in _cartan_rows(t)]


@lru_cache(maxsize=None)
def _cartan_rows(t: SimpleType) -> Tuple[Tuple[int, ...], ...]:
    # every Euclidean coordinate lies in (1/2) Z, so doubled roots give integer dot products
    s = [tuple(int(2 * x) for x in a) for a in euclidean_simple_roots(t)]
    dot = lambda a, b: sum(x * y for x, y in zip(a, b))
    return tuple(tuple(2 * dot(a, b) // dot(b, b) for b in s) for a in s)


def euclidean_coroots(t: SimpleType) -> List[Vec]:
    return [tuple(2 * x / _dot(a, a) for x in a) for a in euclidean_simple_roots(t)]


def block_cartan(types: Sequence[SimpleType]) -> List[List[int]]:
    r = sum(t.rank for t in types)
    out = [[0] * r for _ in range(r)]
    off = 0
    for t in types:
        c = cartan_matrix(t)
        for i in range(t.rank):
            for j in range(t.rank):
                out[off + i][off + j] = c[i][j]
        off += t.rank
    return out


# --- root data ----------------------------------------------------------------

@dataclass(frozen=True)
class RootDatum:
    """Cocharacter lattice plus paired roots (in ``V*``) and coroots (in ``V``).

    ``roots[i]`` pairs with ``coroots[i]``.  The character lattice is the dual
    of the cocharacter lattice.  ``types`` records the simple factors when known.
    """

    cochar_lattice: Lattice
    roots: Tuple[Vec, ...]
    coroots: Tuple[Vec, ...]
    types: Tuple[SimpleType, ...] = ()
    name: str = field(default="", compare=False)

    @property
    def rank(self) -> int:
        return self.cochar_lattice.ambient_rank

    @cached_property
    def char_lattice(self) -> Lattice:
        return self.cochar_lattice.dual()

    @cached_property
    def scaled_roots(self) -> Tuple[Tuple[int, ...], ...]:
        """Roots times a common denominator, for fast exact integer comparisons."""
        den = common_denominator(x for a in self.roots for x in a)
        return tuple(tuple(int(x * den) for x in a) for a in self.roots)

    @cached_property
    def simple_indices(self) -> Tuple[int, ...]:
        return tuple(_simple_system(self.scaled_roots))

    @cached_property
    def semisimple_rank(self) -> int:
        return len(self.simple_indices)

    def is_semisimple(self) -> bool:
        return self.semisimple_rank == self.rank

    def coroot_lattice(self) -> Lattice:
        # simple coroots span the coroot lattice
        return Lattice.from_generators([self.coroots[i] for i in self.simple_indices], self.rank)

    def root_lattice(self) -> Lattice:
        return Lattice.from_generators([self.roots[i] for i in self.simple_indices], self.rank)

    def is_simply_connected(self) -> bool:
        return self.is_semisimple() and self.cochar_lattice == self.coroot_lattice()

    def is_adjoint(self) -> bool:
        return self.is_semisimple() and self.char_lattice == self.root_lattice()

    def canonical(self) -> Tuple:
        return self._canonical

    @cached_property
    def _canonical(self) -> Tuple:
        # normalized fractions make (numerator, denominator) keys a deterministic total order
        key = lambda p: tuple((x.numerator, x.denominator) for v in p for x in v)
        return (self.cochar_lattice, tuple(sorted(zip(self.roots, self.coroots), key=key)))

    def same_as(self, other: "RootDatum") -> bool:
        return self.canonical() == other.canonical()

    def index_of_root(self, root: Sequence) -> int:
        v = tuple(Fraction(x) for x in root)
        try:
            return self.roots.index(v)
        except ValueError:
            return -1

    def validate(self) -> List[str]:
        """Structural checks; an empty list means the datum is consistent."""
        problems = []
        if len(self.roots) != len(self.coroots):
            problems.append("roots and coroots differ in number")
        for a, h in zip(self.roots, self.coroots):
            if _dot(a, h) != 2:
                problems.append(f"<{a},{h}> != 2")
                break
        if not all(self.char_lattice.contains(a) for a in self.roots):
            problems.append("a root is not a character")
        if not all(self.cochar_lattice.contains(h) for h in self.coroots):
            problems.append("a coroot is not a cocharacter")
        sr = self.scaled_roots
        rs = set(sr)
        for a, h in zip(sr, self.coroots):
            for b, braw in zip(sr, self.roots):
                k = _dot(braw, h)
                if k.denominator != 1:
                    problems.append("non-integral Cartan pairing")
                    return problems
                k = int(k)
                if tuple(x - k * y for x, y in zip(b, a)) not in rs:
                    problems.append("roots not closed under reflections")
                    return problems
        return problems

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "types": [t.label for t in self.types],
            "rank": self.rank,
            "cochar_lattice": self.cochar_lattice.to_json(),
            "char_lattice": self.char_lattice.to_json(),
            "num_roots": len(self.roots),
            "simple_roots": [[str(x) for x in self.roots[i]] for i in simple_system(self)],
            "simple_coroots": [[str(x) for x in self.coroots[i]] for i in simple_system(self)],
        }


def _all_roots(cartan: List[List[int]]) -> Tuple[List[Vec], List[Vec]]:
    """Orbit of the simple (root, coroot) pairs under the simple reflections."""
    r = len(cartan)
    simple_roots = [tuple(row) for row in cartan]
    simple_coroots = [tuple(int(i == j) for j in range(r)) for i in range(r)]
    pairs = list(zip(simple_roots, simple_coroots))
    seen = set(pairs)
    frontier = list(pairs)
    while frontier:
        nxt = []
        for a, h in frontier:
            for i in range(r):
                ai = simple_roots[i]
                ca = a[i]  # <a, e_i>
                ch = sum(x * y for x, y in zip(ai, h))
                na = tuple(x - ca * y for x, y in zip(a, ai))
                nh = tuple(x - ch * (k == i) for k, x in enumerate(h))
                if (na, nh) not in seen:
                    seen.add((na, nh))
                    pairs.append((na, nh))
                    nxt.append((na, nh))
        frontier = nxt
    to_f = lambda v: tuple(Fraction(x) for x in v)
    return [to_f(p[0]) for p in pairs], [to_f(p[1]) for p in pairs]


@lru_cache(maxsize=None)
def _sc_datum(types: Tuple[SimpleType, ...]) -> RootDatum:
    c = block_cartan(types)
    roots, coroots = _all_roots(c)
    r = len(c)
    return RootDatum(Lattice.standard(r), tuple(roots), tuple(coroots), types,
                     name=types_label(types) + "_sc")


@dataclass(frozen=True)
class QuotientBy:
    """Quotient form: cocharacters generated by coroots and lifts of these center elements."""

    elements: Tuple[Tuple[int, ...], ...]


def semisimple_root_datum(types: Sequence[SimpleType] | str, form="simply_connected") -> RootDatum:
    if isinstance(types, str):
        types = parse_types(types)
    types = tuple(types)
    sc = _sc_datum(types)
    if form in ("simply_connected", "sc"):
        return sc
    if form in ("adjoint", "ad"):
        lat = sc.root_lattice().dual()
        return RootDatum(lat, sc.roots, sc.coroots, types, name=types_label(types) + "_ad")
    if isinstance(form, QuotientBy):
        cd = center(sc)
        lifts = []
        for z in form.elements:
            if not cd.group.contains(tuple(z)):
                raise NotCentralSubgroup(f"{z} is not an element of the center {cd.group}")
            lifts.append(cd.representative(z))
        lat = Lattice.from_generators(list(sc.coroots[:sc.rank]) + lifts, sc.rank)
        tag = ",".join("(" + ",".join(map(str, z)) + ")" for z in form.elements)
        return RootDatum(lat, sc.roots, sc.coroots, types,
                         name=f"{types_label(types)}/<{tag}>")
    raise InvalidType(f"unknown form {form!r}")


def simple_root_datum(t: SimpleType | str, form="simply_connected") -> RootDatum:
    if isinstance(t, str):
        t = SimpleType.parse(t)
    return semisimple_root_datum((t,), form)


def simply_connected_cover(d: RootDatum) -> RootDatum:
    if not d.is_semisimple():
        raise NotSemisimple("only semisimple data have a simply connected cover here")
    return RootDatum(d.coroot_lattice(), d.roots, d.coroots, d.types,
                     name=(d.name.split("/")[0].removesuffix("_ad").removesuffix("_sc") or "G") + "_sc")


def adjoint_quotient(d: RootDatum) -> RootDatum:
    if not d.is_semisimple():
        raise NotSemisimple("adjoint form needs a semisimple datum")
    return RootDatum(d.root_lattice().dual(), d.roots, d.coroots, d.types, name=d.name + "_ad")


# --- simple systems ---------------------------------------------------------

def _positive(v: Sequence[Fraction]) -> bool:
    for x in v:
        if x:
            return x > 0
    return False


def _simple_system(roots: Sequence[Tuple[int, ...]]) -> List[int]:
    pos = [i for i, a in enumerate(roots) if _positive(a)]
    posset = {roots[i] for i in pos}
    simple = []
    for i in pos:
        a = roots[i]
        if not any(tuple(x - y for x, y in zip(a, roots[j])) in posset for j in pos if j != i):
            simple.append(i)
    return simple


def simple_system(d: RootDatum) -> List[int]:
    """Indices of the simple roots for the lexicographic positive system."""
    return list(d.simple_indices)


def simple_cartan(d: RootDatum, simple: Sequence[int] | None = None) -> List[List[int]]:
    simple = simple_system(d) if simple is None else simple
    return [[int(_dot(d.roots[i], d.coroots[j])) for j in simple] for i in simple]


def _components(cartan: List[List[int]]) -> List[List[int]]:
    r = len(cartan)
    seen, comps = set(), []
    for s in range(r):
        if s in seen:
            continue
        stack, comp = [s], []
        seen.add(s)
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in range(r):
                if j not in seen and cartan[i][j]:
                    seen.add(j)
                    stack.append(j)
        comps.append(sorted(comp))
    return comps


# --- centers -------------------------------------------------------------------

@dataclass(frozen=True)
class CenterData:
    """Center ``X_*(adjoint) / X_*(d)`` with rational cocharacter representatives."""

    datum: RootDatum
    quotient: LatticeQuotient
    pairing: Optional[Pairing] = None

    @property
    def group(self) -> FinAbGroup:
        return self.quotient.group

    def representative(self, z: Sequence[int]) -> RatVec:
        return self.quotient.representative(z)

    def generators(self) -> List[RatVec]:
        return self.quotient.generators()

    def class_of(self, x: Sequence) -> Tuple[int, ...]:
        return self.quotient.class_of(x)

    def to_json(self) -> dict:
        out = {"group": self.group.to_json(),
               "generators": [[str(x) for x in v] for v in self.generators()]}
        if self.pairing is not None:
            out["pairing_gram"] = self.pairing.gram_json()
        return out


def center(d: RootDatum) -> CenterData:
    if not d.is_semisimple():
        raise NotSemisimple("center quotient needs roots spanning the character space")
    coweights = d.root_lattice().dual()
    q = finite_quotient_data(coweights, d.cochar_lattice)
    pairing = None
    if d.is_simply_connected():
        pairing = _pairing_gram(d, q)
    return CenterData(d, q, pairing)


def _pairing_value(d: RootDatum, simple: List[int], comps, cartan, x: RatVec, y: RatVec) -> Fraction:
    basis = [[d.coroots[j][i] for j in simple] for i in range(d.rank)]
    cx = rat_solve(basis, x)
    cy = rat_solve(basis, y)
    total = Fraction(0)
    for comp in comps:
        sub = [[cartan[i][j] for j in comp] for i in comp]
        symmetric = all(sub[a][b] == sub[b][a] for a in range(len(comp)) for b in range(len(comp)))
        vx = [cx[i] for i in comp]
        vy = [cy[i] for i in comp]
        if symmetric:
            total += sum((vx[a] * sub[a][b] * vy[b] for a in range(len(comp))
                          for b in range(len(comp))), Fraction(0))
        else:
            bx = any(v.denominator != 1 for v in vx)
            by = any(v.denominator != 1 for v in vy)
            if bx and by:
                total += Fraction(1, 2)
    return total


def _pairing_gram(d: RootDatum, q: LatticeQuotient) -> Pairing:
    simple = simple_system(d)
    cartan = simple_cartan(d, simple)
    comps = _components(cartan)
    gens = q.generators()
    gram = tuple(tuple(_pairing_value(d, simple, comps, cartan, a, b) % 1 for b in gens)
                 for a in gens)
    g = q.group
    return Pairing(g, g, gram)


def center_pairing(d: RootDatum) -> Pairing:
    if not d.is_simply_connected():
        raise NotSimplyConnected("the center pairing is defined on simply connected data")
    p = center(d).pairing
    if not p.is_symmetric() or not p.is_perfect():
        raise AssertionError("center pairing failed to be symmetric and perfect")
    return p


# --- duality ------------------------------------------------------------------

def langlands_dual(d: RootDatum) -> RootDatum:
    name = d.name[2:-1] if d.name.startswith("L(") and d.name.endswith(")") else f"L({d.name})"
    return RootDatum(d.char_lattice, d.coroots, d.roots, tuple(t.dual() for t in d.types), name=name)


# --- isomorphism search -----------------------------------------------------------

@dataclass(frozen=True)
class RootDatumIso:
    """Linear maps ``cochar: V1 -> V2`` and ``char = cochar^{-T}: V1* -> V2*``."""

    cochar_map: Tuple[Tuple[Fraction, ...], ...]
    char_map: Tuple[Tuple[Fraction, ...], ...]
    simple_bijection: Tuple[int, ...]

    def to_json(self) -> dict:
        return {"cochar_map": [[str(x) for x in r] for r in self.cochar_map],
                "char_map": [[str(x) for x in r] for r in self.char_map],
                "simple_bijection": list(self.simple_bijection)}


def _cartan_bijections(c1, c2) -> Iterable[Tuple[int, ...]]:
    r = len(c1)
    order = []
    for comp in _components(c1):
        # breadth-first inside each component keeps partial assignments checkable
        start = comp[0]
        seen = [start]
        for i in seen:
            for j in comp:
                if c1[i][j] and j not in seen:
                    seen.append(j)
        order += seen
    assign: Dict[int, int] = {}
    used = set()

    def rec(k):
        if k == r:
            yield tuple(assign[i] for i in range(r))
            return
        i = order[k]
        for j in range(r):
            if j in used or c2[j][j] != c1[i][i]:
                continue
            if all(c1[i][p] == c2[j][assign[p]] and c1[p][i] == c2[assign[p]][j] for p in assign):
                assign[i] = j
                used.add(j)
                yield from rec(k + 1)
                del assign[i]
                used.discard(j)

    yield from rec(0)


@dataclass
class _Frame:
    simple: List[int]
    cartan: List[List[int]]
    coroot_cols: List[List[Fraction]]  # n x r
    radical: List[List[Fraction]]  # n x s, basis of X_* cap ker(simple roots)
    glue: List[Tuple[Fraction, ...]]  # generators of the glue group, length r + s


def _frame(d: RootDatum) -> _Frame:
    n = d.rank
    simple = simple_system(d)
    r = len(simple)
    cartan = simple_cartan(d, simple)
    a_rows = [list(d.roots[i]) for i in simple]
    cv = [[d.coroots[j][i] for j in simple] for i in range(n)]
    bmat = d.cochar_lattice.basis_matrix()
    # radical: integer combinations c of the basis with A B c = 0
    ab = rat_matmul(a_rows, bmat) if r else []
    radical_cols = []
    if r:
        den = common_denominator(x for row in ab for x in row) if ab else 1
        ab_int = IntMatrix([[int(x * den) for x in row] for row in ab], cols=n)
        for k in integer_kernel(ab_int):
            radical_cols.append(rat_apply(bmat, k))
    else:
        radical_cols = [tuple(row[j] for row in bmat) for j in range(n)]
    radical_cols = Lattice.from_generators(radical_cols, n).basis_vectors() if radical_cols else []
    s = len(radical_cols)
    rad = [[radical_cols[j][i] for j in range(s)] for i in range(n)]
    cinv = rat_inverse(cartan) if r else []
    glue = []
    for x in d.cochar_lattice.basis_vectors():
        c = rat_apply(cinv, rat_apply(a_rows, x)) if r else ()
        k = tuple(xi - sum((cv[i][j] * c[j] for j in range(r)), Fraction(0))
                  for i, xi in enumerate(x))
        y = rat_solve(rad, k) if s else ()
        glue.append(vec_mod1(tuple(c) + tuple(y)))
    return _Frame(simple, cartan, cv, rad, glue)


def _closure(gens: List[Tuple[Fraction, ...]], width: int) -> frozenset:
    zero = tuple(Fraction(0) for _ in range(width))
    elems = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for e in frontier:
            for g in gens:
                v = vec_mod1(a + b for a, b in zip(e, g))
                if v not in elems:
                    elems.add(v)
                    nxt.append(v)
        frontier = nxt
    return frozenset(elems)


def root_datum_isomorphic(d1: RootDatum, d2: RootDatum, max_candidates: int = 200000
                          ) -> Optional[RootDatumIso]:
    """Explicit isomorphism ``d1 -> d2`` (roots to roots, coroots to coroots) or None."""
    if d1.rank != d2.rank or len(d1.roots) != len(d2.roots):
        return None
    f1, f2 = _frame(d1), _frame(d2)
    r, s = len(f1.simple), len(f1.radical[0]) if f1.radical and f1.radical[0] else 0
    s = d1.rank - r
    if len(f2.simple) != r:
        return None
    width = r + s
    g2 = _closure(f2.glue, width)
    g1 = _closure(f1.glue, width)
    if len(g1) != len(g2):
        return None
    n_mod = common_denominator(x for v in list(g1) + list(g2) for x in v[r:])
    if s == 0:
        psi_candidates = [IntMatrix.identity(0)]
    elif n_mod == 1:
        psi_candidates = [IntMatrix.identity(s)]
    else:
        if n_mod ** (s * s) > max_candidates:
            raise NotImplementedError("radical glue search space too large")
        psi_candidates = list(invertible_matrices_mod(s, n_mod, det_pm1_only=True))
    for sigma in _cartan_bijections(f1.cartan, f2.cartan):
        for psi in psi_candidates:
            image = set()
            for v in g1:
                c = [Fraction(0)] * r
                for i in range(r):
                    c[sigma[i]] = v[i]
                y = v[r:]
                py = tuple(sum((psi[a, b] * y[b] for b in range(s)), Fraction(0)) for a in range(s))
                image.add(vec_mod1(tuple(c) + py))
            if image != g2:
                continue
            iso = _assemble(d1, d2, f1, f2, sigma, lift_to_gl(psi, n_mod) if s else psi)
            if iso is not None:
                return iso
    return None


def _assemble(d1, d2, f1, f2, sigma, psi) -> Optional[RootDatumIso]:
    n = d1.rank
    r = len(f1.simple)
    s = n - r
    src = [f1.coroot_cols[i] + f1.radical[i] for i in range(n)]
    tgt_cols = [[f2.coroot_cols[i][sigma[j]] for j in range(r)] for i in range(n)]
    rad2_psi = [[sum((f2.radical[i][a] * psi[a, b] for a in range(s)), Fraction(0))
                 for b in range(s)] for i in range(n)]
    tgt = [tgt_cols[i] + rad2_psi[i] for i in range(n)]
    phi = rat_matmul(tgt, rat_inverse(src))
    phi_inv = rat_inverse(phi)
    char_map = rat_transpose(phi_inv)
    # verify
    img_lat = Lattice.from_generators([rat_apply(phi, v) for v in d1.cochar_lattice.basis_vectors()], n)
    if img_lat != d2.cochar_lattice:
        return None
    pairs2 = set(zip(d2.roots, d2.coroots))
    for a, h in zip(d1.roots, d1.coroots):
        if (rat_apply(char_map, a), rat_apply(phi, h)) not in pairs2:
            return None
    return RootDatumIso(tuple(map(tuple, phi)), tuple(map(tuple, char_map)), tuple(sigma))


def verify_isomorphism(d1: RootDatum, d2: RootDatum, iso: RootDatumIso) -> bool:
    """Independent recheck of a claimed isomorphism."""
    phi = [list(r) for r in iso.cochar_map]
    chi = [list(r) for r in iso.char_map]
    n = d1.rank
    ident = rat_matmul(rat_transpose(chi), phi)
    if any(ident[i][j] != (1 if i == j else 0) for i in range(n) for j in range(n)):
        return False
    img = Lattice.from_generators([rat_apply(phi, v) for v in d1.cochar_lattice.basis_vectors()], n)
    if img != d2.cochar_lattice:
        return False
    mapped = {(rat_apply(chi, a), rat_apply(phi, h)) for a, h in zip(d1.roots, d1.coroots)}
    return mapped == set(zip(d2.roots, d2.coroots))
