"""General embeddings of the center into a torus and the extended groups they define.

Given a simply connected semisimple datum with center ``Z = mu_{N_1} x ... x mu_{N_s}``
and an embedding ``tau: Z -> T = (C^x)^s`` described by an ``s x s`` matrix ``A``
over ``Z/N`` (``N = lcm N_i``), the extended group is ``(G x T) / {(z, tau(z))}``.
Its cocharacter lattice is ``X_*(G) + X_*(T)`` enlarged by the lifts
``(v_z, tau(z))`` of the center generators.

A trivial center is treated as ``mu_1`` with ``s = 1``, so the extended group is
``G x C^x``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import CenterMismatch, NotGeneral, NotInvertible, NotSimplyConnected, VerificationFailed
from .rootdata import (CenterData, RootDatum, RootDatumIso, center, langlands_dual,
                       root_datum_isomorphic, verify_isomorphism)
from .zmod import FinAbGroup, FinAbHom, IntMatrix, Lattice, dualize_ses
from .zmod.congruence import inverse_mod, invertible_matrices_mod, lift_to_gl, reduce_mod
from .zmod.groups import cokernel_data
from .zmod.lattice import finite_quotient, finite_quotient_data, inclusion_matrix
from .zmod.matrix import RatVec, rat_apply, rat_inverse, rat_matmul, rat_solve

CONVENTION = "antidiagonal {(z, tau(z))}"


@dataclass(frozen=True)
class Generality:
    general: bool
    lift: Optional[IntMatrix]


def is_general_embedding(matrix: IntMatrix, n: int, s: int) -> Generality:
    """Decide whether ``matrix`` (s x s over Z/n) lifts to GL_s(Z), with an explicit lift."""
    if (matrix.rows, matrix.cols) != (s, s):
        raise ValueError(f"expected a {s}x{s} matrix")
    if n > 1 and gcd(matrix.det() % n, n) != 1:
        raise NotInvertible(f"determinant {matrix.det() % n} is not a unit mod {n}")
    lift = lift_to_gl(reduce_mod(matrix, n) if n > 1 else matrix, n)
    return Generality(lift is not None, lift)


def _factors(cd: CenterData) -> Tuple[int, ...]:
    return cd.group.invariant_factors or (1,)


@dataclass(frozen=True)
class GeneralEmbedding:
    """``tau`` on a center, relative to a basis of the torus cocharacter lattice."""

    center: CenterData
    matrix: IntMatrix
    torus_lattice: Lattice
    lift: Optional[IntMatrix] = None

    @property
    def orders(self) -> Tuple[int, ...]:
        return _factors(self.center)

    @property
    def s(self) -> int:
        return len(self.orders)

    @property
    def modulus(self) -> int:
        return self.orders[-1]

    @property
    def is_general(self) -> bool:
        return self.lift is not None

    def torus_point(self, z: Sequence[int]) -> RatVec:
        """``tau(z)`` as a rational vector in ``X_*(T) tensor Q``."""
        n = self.modulus
        a = [int(zi) * (n // ni) for zi, ni in zip(z, self.orders)] if self.center.group.ngens \
            else [0] * self.s
        coeff = [Fraction(sum(self.matrix[i, j] * a[j] for j in range(self.s)), n)
                 for i in range(self.s)]
        return rat_apply(self.torus_lattice.basis_matrix(), coeff)

    def generator_images(self) -> List[RatVec]:
        k = self.center.group.ngens
        return [self.torus_point([int(i == j) for i in range(k)]) for j in range(k)]

    def to_json(self) -> dict:
        return {"orders": list(self.orders), "modulus": self.modulus,
                "matrix": self.matrix.to_json(),
                "lift": self.lift.to_json() if self.lift is not None else None}


def make_embedding(cd: CenterData, matrix: IntMatrix | Sequence[Sequence[int]],
                   torus_lattice: Lattice | None = None) -> GeneralEmbedding:
    if not isinstance(matrix, IntMatrix):
        matrix = IntMatrix(matrix)
    orders = _factors(cd)
    s, n = len(orders), orders[-1]
    matrix = reduce_mod(matrix, n) if n > 1 else IntMatrix.zeros(s, s)
    gen = is_general_embedding(matrix, n, s)
    return GeneralEmbedding(cd, matrix, torus_lattice or Lattice.standard(s), gen.lift)


def general_embeddings(cd: CenterData) -> List[GeneralEmbedding]:
    """All general embeddings, as matrices over Z/N with determinant +-1."""
    orders = _factors(cd)
    s, n = len(orders), orders[-1]
    return [make_embedding(cd, m) for m in invertible_matrices_mod(s, n, det_pm1_only=True)]


def standard_embedding(cd: CenterData) -> GeneralEmbedding:
    s = len(_factors(cd))
    return make_embedding(cd, IntMatrix.identity(s))


# --- the extended group -----------------------------------------------------------

@dataclass(frozen=True)
class ExtendedGroupDatum:
    """The extended group and its two projections, as rational matrices on cocharacters.

    ``to_adjoint`` maps into the coweight lattice of the base and ``to_quotient_torus``
    into ``X_*(T / Z)``.
    """

    base: RootDatum
    tau: GeneralEmbedding
    result: RootDatum
    to_adjoint: Tuple[Tuple[int, ...], ...]
    to_quotient_torus: Tuple[Tuple[int, ...], ...]
    adjoint_lattice: Lattice
    quotient_torus_lattice: Lattice

    def to_json(self) -> dict:
        return {"base": self.base.name, "tau": self.tau.to_json(),
                "convention": CONVENTION, "result": self.result.to_json(),
                "to_adjoint": [list(r) for r in self.to_adjoint],
                "to_quotient_torus": [list(r) for r in self.to_quotient_torus]}


def _check_base(base: RootDatum, tau: GeneralEmbedding) -> None:
    if not base.is_simply_connected():
        raise NotSimplyConnected("base datum must be simply connected")
    if not tau.center.datum.same_as(base) or tau.center.group != center(base).group:
        raise CenterMismatch("embedding is defined on a different center")


def build_g_tau(base: RootDatum, tau: GeneralEmbedding) -> ExtendedGroupDatum:
    _check_base(base, tau)
    if not tau.is_general:
        raise NotGeneral("embedding does not lift to GL_s(Z)")
    r, s = base.rank, tau.s
    n = r + s
    zero_r = (Fraction(0),) * r
    zero_s = (Fraction(0),) * s
    gens = [tuple(v) + zero_s for v in base.cochar_lattice.basis_vectors()]
    gens += [zero_r + tuple(v) for v in tau.torus_lattice.basis_vectors()]
    lifts = []
    for z_rep, t in zip(tau.center.generators(), tau.generator_images()):
        lifts.append(tuple(z_rep) + tuple(t))
    lattice = Lattice.from_generators(gens + lifts, n)
    roots = tuple(tuple(a) + zero_s for a in base.roots)
    coroots = tuple(tuple(h) + zero_s for h in base.coroots)
    name = f"{base.name}_tau"
    result = RootDatum(lattice, roots, coroots, base.types, name=name)
    to_adj = tuple(tuple(int(i == j) for j in range(n)) for i in range(r))
    to_torus = tuple(tuple(int(i + r == j) for j in range(n)) for i in range(s))
    adj = base.root_lattice().dual()
    qt = Lattice.from_generators(tau.torus_lattice.basis_vectors() + list(tau.generator_images()), s)
    return ExtendedGroupDatum(base, tau, result, to_adj, to_torus, adj, qt)


# --- independence of tau -------------------------------------------------------

@dataclass(frozen=True)
class IndependenceWitness:
    b: IntMatrix
    cochar_map: Tuple[Tuple[int, ...], ...]
    confirmed: bool
    iso: Optional[RootDatumIso]


def tau_independence_witness(t1: GeneralEmbedding, t2: GeneralEmbedding) -> IndependenceWitness:
    """``B`` in GL_s(Z) with ``B A_1 = A_2 mod N`` and the induced isomorphism."""
    if t1.center.group != t2.center.group or not t1.center.datum.same_as(t2.center.datum) \
            or t1.torus_lattice != t2.torus_lattice:
        raise CenterMismatch("embeddings live on different centers or tori")
    if not (t1.is_general and t2.is_general):
        raise NotGeneral("both embeddings must be general")
    n, s = t1.modulus, t1.s
    if n > 1:
        b0 = reduce_mod(t2.matrix @ inverse_mod(t1.matrix, n), n)
        b = lift_to_gl(b0, n)
    else:
        b = IntMatrix.identity(s)
    base = t1.center.datum
    g1, g2 = build_g_tau(base, t1), build_g_tau(base, t2)
    r = base.rank
    # (x, t) -> (x, B t) in torus-basis coordinates
    tb = t1.torus_lattice.basis_matrix()
    tmap = rat_matmul(rat_matmul(tb, [[Fraction(b[i, j]) for j in range(s)] for i in range(s)]),
                      rat_inverse(tb))
    full = [[Fraction(int(i == j)) if i < r and j < r else Fraction(0) for j in range(r + s)]
            for i in range(r + s)]
    for i in range(s):
        for j in range(s):
            full[r + i][r + j] = tmap[i][j]
    img = Lattice.from_generators([rat_apply(full, v) for v in
                                   g1.result.cochar_lattice.basis_vectors()], r + s)
    confirmed = img == g2.result.cochar_lattice
    iso = root_datum_isomorphic(g1.result, g2.result)
    return IndependenceWitness(b, tuple(tuple(int(x) for x in row) for row in full),
                               confirmed and iso is not None, iso)


# --- the dual embedding ----------------------------------------------------------

def dual_simply_connected(base: RootDatum) -> RootDatum:
    """Simply connected cover of the Langlands dual: roots and coroots exchanged."""
    d = langlands_dual(base)
    sc_lat = Lattice.from_generators([d.coroots[i] for i in d.simple_indices], d.rank)
    stem = base.name.removesuffix("_sc")
    return RootDatum(sc_lat, d.roots, d.coroots, d.types, name=f"L({stem})_sc")


@dataclass(frozen=True)
class DualEmbedding:
    """The dual embedding ``Z(^L G)`` -> ``^L(T/Z)`` and the data used to build it."""

    embedding: GeneralEmbedding
    dual_base: RootDatum
    char_lattice_quotient_torus: Lattice  # X^*(T/Z), the cocharacters of ^L(T/Z)
    character_classes: Tuple[Tuple[int, ...], ...]  # chi_j in X^*(T) for each generator
    injective: bool


def dual_tau(tau: GeneralEmbedding) -> DualEmbedding:
    base = tau.center.datum
    s = tau.s
    torus_chars = tau.torus_lattice.dual()  # X^*(T)
    qt = Lattice.from_generators(tau.torus_lattice.basis_vectors() + tau.generator_images(), s)
    qt_chars = qt.dual()  # X^*(T/Z)
    dual_sc = dual_simply_connected(base)
    dual_center = center(dual_sc)
    z_reps = tau.center.generators()
    t_imgs = tau.generator_images()
    # characters chi in X^*(T) with <chi, tau(z)> = <lam, v_z> mod 1 for every generator z
    tc_basis = torus_chars.basis_vectors()
    classes = []
    points = []
    for lam in dual_center.generators():
        target = [sum((Fraction(a) * b for a, b in zip(lam, v)), Fraction(0)) for v in z_reps]
        chi = _solve_character(tc_basis, t_imgs, target)
        classes.append(chi)
        points.append(chi)
    # express each chi in the basis of X^*(T/Z); column j of the matrix is N_j * coords mod N_j
    orders = _factors(dual_center)
    qb = qt_chars.basis_matrix()
    cols = []
    for chi, nj in zip(points, orders):
        c = rat_solve(qb, chi)
        cols.append([int(x * nj) % nj for x in c])
    if dual_center.group.ngens == 0:
        cols = [[0] * s]
    mat = IntMatrix.from_columns(cols, s)
    emb = make_embedding(dual_center, mat, qt_chars)
    # injectivity: tau-dual(x) in X^*(T/Z) only for x = 0
    injective = True
    if dual_center.group.ngens:
        for x in dual_center.group.elements():
            if any(x) and qt_chars.contains(emb.torus_point(x)):
                injective = False
                break
    return DualEmbedding(emb, dual_sc, qt_chars, tuple(tuple(int(v) for v in c) for c in classes),
                         injective)


def _solve_character(basis: List[RatVec], t_imgs: List[RatVec], target: List[Fraction]) -> RatVec:
    """Integer combination chi of ``basis`` with ``<chi, t_j> = target_j mod 1``."""
    k = len(basis)
    if not t_imgs:
        return tuple(Fraction(0) for _ in range(len(basis[0]) if basis else 0))
    den = 1
    for t in t_imgs:
        for x in t:
            den = den * x.denominator // gcd(den, x.denominator)
    # coefficients only matter mod den
    for coeffs in product(range(den), repeat=k):
        chi = tuple(sum((c * b[i] for c, b in zip(coeffs, basis)), Fraction(0))
                    for i in range(len(basis[0])))
        ok = all((sum((a * b for a, b in zip(chi, t)), Fraction(0)) - tg).denominator == 1
                 for t, tg in zip(t_imgs, target))
        if ok:
            return chi
    raise VerificationFailed("no character realizes the requested class")


# --- component group ----------------------------------------------------------------

@dataclass(frozen=True)
class ComponentGroup:
    group: FinAbGroup
    from_center: FinAbHom
    bijective: bool


def component_group(tau: GeneralEmbedding) -> ComponentGroup:
    """``X_*(T/Z) / X_*(T)`` with the isomorphism ``z -> class of tau(z)``."""
    qt = Lattice.from_generators(tau.torus_lattice.basis_vectors() + tau.generator_images(), tau.s)
    q = finite_quotient_data(qt, tau.torus_lattice)
    zg = tau.center.group
    cols = [q.class_of(t) for t in tau.generator_images()]
    mat = IntMatrix.from_columns(cols, q.group.ngens) if cols else IntMatrix.zeros(q.group.ngens, 0)
    hom = FinAbHom(zg, q.group, mat)
    return ComponentGroup(q.group, hom, hom.is_bijective())


# --- the duality check ----------------------------------------------------------------

def _sign_flip(r: int, s: int) -> List[List[Fraction]]:
    return [[Fraction((-1 if i >= r else 1) if i == j else 0) for j in range(r + s)]
            for i in range(r + s)]


def _ses_check(g: ExtendedGroupDatum, dual_center_group: FinAbGroup) -> Dict[str, object]:
    """Lattice-level exact sequences for the extended group and its dual."""
    res = g.result
    r, s = g.base.rank, g.tau.s
    small = Lattice.from_generators(
        [tuple(v) + (Fraction(0),) * s for v in g.base.cochar_lattice.basis_vectors()]
        + [(Fraction(0),) * r + tuple(v) for v in g.tau.torus_lattice.basis_vectors()], r + s)
    # 0 -> X_*(G) + X_*(T) -> X_*(G_tau) -> Z -> 0, then its dual
    incl = inclusion_matrix(res.cochar_lattice, small)
    cd = cokernel_data(incl)
    free = FinAbGroup((), r + s)
    f = FinAbHom(free, free, incl)
    q = FinAbHom(free, cd.group, cd.to_coords)
    dual = dualize_ses(f, q)
    # cocharacters of (^L G)_ad x ^L T modulo those of ^L(G_tau)
    big = Lattice.from_generators(
        [tuple(v) + (Fraction(0),) * s for v in g.base.char_lattice.basis_vectors()]
        + [(Fraction(0),) * r + tuple(v) for v in g.tau.torus_lattice.dual().basis_vectors()], r + s)
    dual_quotient = finite_quotient(big, res.char_lattice)
    return {
        "center_quotient": cd.group.to_json(),
        "dual_kernel": dual.g.target.to_json(),
        "dual_lattice_quotient": dual_quotient.to_json(),
        "ok": (cd.group == g.tau.center.group and dual.g.target == dual_center_group
               and dual_quotient == dual_center_group),
    }


def verify_appendix_c(base: RootDatum, tau: GeneralEmbedding) -> Dict[str, object]:
    """Check that the dual of the extended group is the extended group of the dual."""
    g = build_g_tau(base, tau)
    lhs = langlands_dual(g.result)
    dt = dual_tau(tau)
    rhs = build_g_tau(dt.dual_base, dt.embedding).result
    iso = root_datum_isomorphic(lhs, rhs)
    iso_ok = iso is not None and verify_isomorphism(lhs, rhs, iso)
    flip = _sign_flip(base.rank, tau.s)
    flip_lat = Lattice.from_generators([rat_apply(flip, v) for v in
                                        lhs.cochar_lattice.basis_vectors()], lhs.rank)
    flip_ok = flip_lat == rhs.cochar_lattice and set(lhs.roots) == set(rhs.roots)
    ses = _ses_check(g, center(dt.dual_base).group)
    comp = component_group(tau)
    report = {
        "base": base.name,
        "types": [t.label for t in base.types],
        "tau_matrix": tau.matrix.to_json(),
        "modulus": tau.modulus,
        "convention": CONVENTION,
        "lhs_datum": lhs.to_json(),
        "rhs_datum": rhs.to_json(),
        "dual_tau_matrix": dt.embedding.matrix.to_json(),
        "dual_tau_general": dt.embedding.is_general,
        "dual_tau_injective": dt.injective,
        "torus_sign_flip_is_isomorphism": flip_ok,
        "exact_sequences": ses,
        "component_group": comp.group.to_json(),
        "component_group_matches_center": comp.bijective,
    }
    ok = iso_ok and flip_ok and ses["ok"] and dt.injective and dt.embedding.is_general \
        and comp.bijective
    if iso_ok:
        report["isomorphism"] = iso.to_json()
    if not ok:
        report["failure_certificate"] = {
            "isomorphism_found": iso_ok, "sign_flip": flip_ok, "sequences": ses["ok"],
            "dual_injective": dt.injective, "dual_general": dt.embedding.is_general,
            "components": comp.bijective}
        raise VerificationFailed("extended-group duality check failed", report)
    return report
