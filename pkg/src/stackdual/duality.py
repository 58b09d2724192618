"""Finite bookkeeping for dual pairs of quotient stacks of Higgs moduli.

A skeleton records the simply connected group, the genus, a subgroup ``Gamma`` of
``H^1(C; Z)`` (``Z`` the center), and the two finite pieces of the local form: the component
group ``pi0`` and the band.  Dualizing passes to the Langlands dual group and to the
annihilator of ``Gamma`` under the cup-product pairing ``H^1(C; Z) x H^1(C; Z^) -> Q/Z``,
where ``Z^`` is the center of the dual group and ``Z x Z^ -> Q/Z`` pairs coweight and weight
representatives.  The symmetric form ``u`` on ``Z`` gives a second route to the same subgroup:
transport ``ann_w(Gamma)`` along the map ``iota: Z -> Z^`` defined by ``<z', iota z> = u(z', z)``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .errors import InvalidSubgroup, LabelOutOfGroup
from .gtau import dual_simply_connected
from .registry import resolve_group, vector_class
from .rootdata import (RootDatum, SimpleType, center, center_pairing, root_datum_isomorphic,
                       simply_connected_cover, types_label)
from .symp import (Elem, Subgroup, SymplecticModule, _table, all_subgroups, annihilator,
                   enumerate_lagrangians, is_isotropic, is_lagrangian, span, subgroup_quotient)
from .zmod import FinAbGroup, Lattice, Pairing, pontryagin_dual


# --- skeletons ----------------------------------------------------------------------

@dataclass(frozen=True)
class StackySkeleton:
    datum: RootDatum = field(compare=False)
    types: Tuple[SimpleType, ...]
    genus: int
    module: SymplecticModule
    gamma: Subgroup
    prym_kernel: FinAbGroup
    pi0: FinAbGroup
    band: FinAbGroup

    @property
    def algebra(self) -> str:
        return types_label(self.types) if self.types else "trivial"

    def to_json(self) -> dict:
        return {"algebra": self.algebra, "genus": self.genus,
                "gamma": self.gamma.to_json(), "prym_kernel": self.prym_kernel.to_json(),
                "pi0": self.pi0.to_json(), "band": self.band.to_json(),
                "module": self.module.to_json()}


def _sc_datum(algebra: str | RootDatum) -> RootDatum:
    d = resolve_group(algebra) if isinstance(algebra, str) else algebra
    return d if d.is_simply_connected() else simply_connected_cover(d)


def _as_subgroup(m: SymplecticModule, gamma) -> Subgroup:
    if isinstance(gamma, Subgroup):
        if gamma.ambient != m:
            raise InvalidSubgroup("subgroup lives in a different module")
        return gamma
    gens = [tuple(int(v) for v in g) for g in gamma]
    n = len(m.moduli)
    for g in gens:
        if len(g) != n or any(not 0 <= v < q for v, q in zip(g, m.moduli)):
            raise InvalidSubgroup(f"{list(g)} is not an element of {m.layout}")
    return span(m, gens)


def _skeleton(d: RootDatum, genus: int, module: SymplecticModule, gamma: Subgroup) -> StackySkeleton:
    z = module.coefficient
    return StackySkeleton(d, tuple(d.types), genus, module, gamma, gamma.structure(), z, z)


def m_skeleton(algebra: str | RootDatum, genus: int, gamma=None,
               pairing: Optional[Pairing] = None) -> StackySkeleton:
    """Skeleton of ``M/Gamma``; ``gamma`` is a Subgroup or generators (default ``0``).

    ``pairing`` overrides the center pairing; used only for negative controls.
    """
    d = _sc_datum(algebra)
    if pairing is None:
        module = SymplecticModule.from_datum(d, genus)
    else:
        module = SymplecticModule(center(d).group, pairing, genus)
    return _skeleton(d, genus, module, _as_subgroup(module, [] if gamma is None else gamma))


# --- the pairing between a center and the dual center --------------------------------

def _dot(x: Sequence[Fraction], y: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(x, y)), Fraction(0))


def natural_center_pairing(d: RootDatum, dual: RootDatum) -> Pairing:
    """``Z(d) x Z(dual) -> Q/Z`` from coweight and weight representatives."""
    cz, cw = center(d), center(dual)
    gram = tuple(tuple(_dot(a, b) % 1 for b in cw.generators()) for a in cz.generators())
    return Pairing(cz.group, cw.group, gram)


def center_transport(d: RootDatum, dual: RootDatum) -> Dict[Elem, Elem]:
    """``iota: Z(d) -> Z(dual)`` with ``<z', iota z> = u(z', z)`` for every ``z'``."""
    nat = natural_center_pairing(d, dual)
    u = center_pairing(d)
    zs = list(nat.left.elements())
    ws = list(nat.right.elements())
    out: Dict[Elem, Elem] = {}
    for z in zs:
        hits = [w for w in ws if all(nat(z2, w) == u(z2, z) for z2 in zs)]
        if len(hits) != 1:
            raise AssertionError(f"no unique transport for {z}: {hits}")
        out[z] = hits[0]
    return out


def _cup_form(m1: SymplecticModule, m2: SymplecticModule, nat: Pairing) -> Tuple[np.ndarray, int]:
    """Integer matrix ``F`` and exponent ``e`` with ``<x, y> = x^T F y / e`` on ``H^1`` groups."""
    k1, k2, g = m1.block, m2.block, m1.genus
    e = 1
    for row in nat.gram:
        for x in row:
            e = e * x.denominator // np.gcd(e, x.denominator)
    f = np.zeros((len(m1.moduli), len(m2.moduli)), dtype=np.int64)
    for i in range(g):
        for r in range(k1):
            for c in range(k2):
                v = int(nat.gram[r][c] * e)
                f[i * k1 + r, (g + i) * k2 + c] += v
                f[(g + i) * k1 + r, i * k2 + c] -= v
    return f, e


def cup_annihilator(gamma: Subgroup, target: SymplecticModule, nat: Pairing) -> Subgroup:
    """``{y in target : <x, y> = 0 for all x in gamma}`` under the cup-product pairing."""
    m = gamma.ambient
    if not target.block or not m.block:
        return Subgroup(target, frozenset(target.elements()))
    f, e = _cup_form(m, target, nat)
    t = _table(target)
    gens = np.array(gamma.generators or [m.zero()], dtype=np.int64)
    vals = (gens @ f @ t.digits.T) % e
    keep = ~vals.any(axis=0)
    return t.subgroup(np.flatnonzero(keep))


def _transport_subgroup(gamma: Subgroup, target: SymplecticModule, iota: Mapping[Elem, Elem]) -> Subgroup:
    m = gamma.ambient
    k = m.block

    def move(x: Elem) -> Elem:
        blocks = [iota[tuple(x[i * k:(i + 1) * k])] for i in range(2 * m.genus)]
        return tuple(v for b in blocks for v in b)

    if not k:
        return Subgroup(target, frozenset([target.zero()]))
    return Subgroup(target, frozenset(move(x) for x in gamma.elements))


# --- dualization --------------------------------------------------------------------

@dataclass(frozen=True)
class _DualContext:
    dual_datum: RootDatum
    dual_module: SymplecticModule
    nat: Optional[Pairing]
    iota: Optional[Dict[Elem, Elem]]


@lru_cache(maxsize=128)
def _dual_context(d: RootDatum, genus: int, has_pairing: bool) -> _DualContext:
    dual_d = dual_simply_connected(d)
    dual_module = SymplecticModule.from_datum(dual_d, genus)
    if not dual_module.block:
        return _DualContext(dual_d, dual_module, None, None)
    nat = natural_center_pairing(d, dual_d)
    iota = center_transport(d, dual_d) if has_pairing else None
    return _DualContext(dual_d, dual_module, nat, iota)


@lru_cache(maxsize=128)
def _isomorphic(d1: RootDatum, d2: RootDatum) -> bool:
    return root_datum_isomorphic(d1, d2) is not None


@dataclass(frozen=True)
class DualReport:
    source: StackySkeleton
    dual: StackySkeleton
    swap_checks: Dict[str, bool]

    @property
    def ok(self) -> bool:
        return all(self.swap_checks.values())

    def to_json(self) -> dict:
        return {"input": self.source.to_json(), "dual": self.dual.to_json(),
                "swap_checks": dict(self.swap_checks), "ok": self.ok}


def dualize(s: StackySkeleton) -> DualReport:
    """The dual skeleton together with the swap checks."""
    ctx = _dual_context(s.datum, s.genus, s.module.pairing is not None)
    dual_d, dual_module, nat = ctx.dual_datum, ctx.dual_module, ctx.nat
    if nat is not None:
        gamma_dual = cup_annihilator(s.gamma, dual_module, nat)
    else:
        gamma_dual = Subgroup(dual_module, frozenset([dual_module.zero()]))
    d = _skeleton(dual_d, s.genus, dual_module, gamma_dual)
    checks: Dict[str, bool] = {}
    perfect = nat is None or nat.is_perfect()
    checks["dual_types"] = tuple(t.dual() for t in s.types) == d.types
    # the natural pairing is perfect, so each side is the character group of the other
    checks["pi0_dual_is_band_characters"] = perfect and d.pi0 == pontryagin_dual(s.band)[0]
    checks["band_dual_is_pi0_characters"] = perfect and d.band == pontryagin_dual(s.pi0)[0]
    whole = Subgroup(s.module, frozenset(s.module.elements()))
    checks["prym_kernel_is_quotient_dual"] = d.prym_kernel == subgroup_quotient(s.gamma, whole)
    checks["orders_multiply"] = s.gamma.order * gamma_dual.order == s.module.order
    if ctx.iota is not None:
        moved = _transport_subgroup(annihilator(s.gamma), dual_module, ctx.iota)
        checks["annihilator_routes_agree"] = moved == gamma_dual
    return DualReport(s, d, checks)


def dualize_skeleton(s: StackySkeleton) -> StackySkeleton:
    return dualize(s).dual


@dataclass(frozen=True)
class InvolutionCheck:
    ok: bool
    details: Dict[str, bool]


def involution_check(s: StackySkeleton) -> InvolutionCheck:
    first = dualize(s)
    second = dualize(first.dual)
    back = second.dual
    details = {"first_swaps": first.ok, "second_swaps": second.ok,
               "types": back.types == s.types,
               "module": back.module.coefficient == s.module.coefficient,
               "gamma": back.gamma.elements == s.gamma.elements,
               "groups": (back.pi0, back.band, back.prym_kernel) == (s.pi0, s.band, s.prym_kernel),
               "datum": _isomorphic(back.datum, s.datum)}
    return InvolutionCheck(all(details.values()), details)


# --- self-duality --------------------------------------------------------------------

@dataclass(frozen=True)
class SelfDualDecision:
    self_dual: bool
    certificate: Dict[str, object]

    def __bool__(self) -> bool:
        return self.self_dual


def is_self_dual(algebra: str | RootDatum, genus: int, gamma=None) -> SelfDualDecision:
    s = m_skeleton(algebra, genus, gamma)
    dual_d = dual_simply_connected(s.datum)
    iso = root_datum_isomorphic(s.datum, dual_d)
    lag = is_lagrangian(s.gamma)
    cert: Dict[str, object] = {"group_matches_dual": iso is not None, "gamma_is_lagrangian": lag,
                               "gamma_order": s.gamma.order, "annihilator_order": annihilator(s.gamma).order}
    if iso is not None:
        cert["isomorphism"] = iso.to_json()
    if iso is not None and lag:
        # carried back along iota, the dual subgroup is ann(Gamma) = Gamma
        dual = dualize_skeleton(s)
        if s.module.block:
            iota = center_transport(s.datum, dual_d)
            back = {w: z for z, w in iota.items()}
            returned = _transport_subgroup(dual.gamma, s.module, back)
        else:
            returned = s.gamma
        cert["dual_fixes_skeleton"] = (returned == s.gamma and dual.pi0 == s.pi0
                                       and dual.band == s.band and dual.prym_kernel == s.prym_kernel)
    return SelfDualDecision(iso is not None and lag, cert)


# --- grading maps -----------------------------------------------------------------

@dataclass(frozen=True)
class GradedDims:
    """Finitely supported counts on ``Z x Z`` indexed by (support, weight)."""
    counts: Tuple[Tuple[Tuple[int, int], int], ...]

    @classmethod
    def make(cls, data: Mapping[Tuple[int, int], int] | Iterable[Tuple[Tuple[int, int], int]]) -> "GradedDims":
        c: Counter = Counter()
        for key, v in (data.items() if isinstance(data, Mapping) else data):
            if v < 0:
                raise ValueError("graded dimensions are nonnegative")
            c[(int(key[0]), int(key[1]))] += int(v)
        return cls(tuple(sorted((k, v) for k, v in c.items() if v)))

    def as_dict(self) -> Dict[Tuple[int, int], int]:
        return dict(self.counts)

    def to_json(self) -> list:
        return [[list(k), v] for k, v in self.counts]


def fm_grading_map(d: GradedDims) -> GradedDims:
    """Support ``m`` and weight ``n`` go to ``(n, -m)``."""
    return GradedDims.make({(n, -m): v for (m, n), v in d.counts})


def index_label_groups(algebra: str | RootDatum) -> Tuple[FinAbGroup, FinAbGroup]:
    """``(Z^vee, Z(dual)^vee)``: where the gerbe label and the component label live."""
    d = _sc_datum(algebra)
    dual_d = dual_simply_connected(d)
    return pontryagin_dual(center(d).group)[0], pontryagin_dual(center(dual_d).group)[0]


def _check_label(x: Sequence[int], g: FinAbGroup, what: str) -> Elem:
    x = tuple(int(v) for v in x)
    if len(x) != g.ngens or any(not 0 <= v < q for v, q in zip(x, g.moduli)):
        raise LabelOutOfGroup(f"{what} label {list(x)} is not in {g}")
    return x


def derived_index_map(alpha: Sequence[int], beta: Sequence[int], alpha_group: FinAbGroup,
                      beta_group: FinAbGroup) -> Tuple[Elem, Elem]:
    """``(alpha, beta) -> (-beta, alpha)``; the output lives in ``(beta_group, alpha_group)``."""
    a = _check_label(alpha, alpha_group, "alpha")
    b = _check_label(beta, beta_group, "beta")
    return beta_group.neg(b), a


# --- torus skeletons -----------------------------------------------------------------

@dataclass(frozen=True)
class TorusSkeleton:
    """``pi0`` as a lattice, the band as the lattice of its characters, plus the abelian dimension."""
    pi0: Optional[Lattice]
    band_characters: Optional[Lattice]
    abelian_dimension: int

    def dual(self) -> "TorusSkeleton":
        return TorusSkeleton(self.band_characters, self.pi0, self.abelian_dimension)

    def to_json(self) -> dict:
        return {"pi0": self.pi0.to_json() if self.pi0 else None,
                "band_characters": self.band_characters.to_json() if self.band_characters else None,
                "abelian_dimension": self.abelian_dimension}


def bun_torus_skeletons(cocharacters: Lattice, genus: int) -> Dict[str, TorusSkeleton]:
    """Stack, neutral-component stack, coarse space and neutral coarse space of ``Bun_T``."""
    dim = genus * cocharacters.rank
    chars = cocharacters.dual() if cocharacters.rank else cocharacters
    return {"stack": TorusSkeleton(cocharacters, chars, dim),
            "neutral_stack": TorusSkeleton(None, chars, dim),
            "coarse": TorusSkeleton(cocharacters, None, dim),
            "neutral_coarse": TorusSkeleton(None, None, dim)}


def bun_torus_skeleton_dual(cocharacters: Lattice, genus: int) -> Dict[str, object]:
    """Check the three torus dualities by swapping ``pi0`` and band on each side."""
    ours = bun_torus_skeletons(cocharacters, genus)
    dual_lattice = cocharacters.dual() if cocharacters.rank else cocharacters
    theirs = bun_torus_skeletons(dual_lattice, genus)
    checks = {"stack_to_dual_stack": ours["stack"].dual() == theirs["stack"],
              "neutral_stack_to_dual_coarse": ours["neutral_stack"].dual() == theirs["coarse"],
              "neutral_coarse_self": ours["neutral_coarse"].dual() == theirs["neutral_coarse"]}
    return {"ok": all(checks.values()), "checks": checks,
            "skeletons": {k: v.to_json() for k, v in ours.items()},
            "dual_cocharacters": dual_lattice.to_json()}


# --- regressions --------------------------------------------------------------------

def _corrupted_pairing(group: FinAbGroup) -> Pairing:
    """A perfect but wrong form on ``(Z/2)^2``: the diagonal is no longer isotropic."""
    h = Fraction(1, 2)
    return Pairing(group, group, ((h, h), (h, Fraction(0))))


def _item_a1_lagrangians() -> Dict[str, object]:
    fails = []
    counts = {}
    for g in (1, 2):
        m = SymplecticModule.from_datum(resolve_group("A1"), g)
        lags = enumerate_lagrangians(m)
        counts[g] = len(lags)
        for lag in lags:
            if not is_self_dual("A1", g, lag):
                fails.append([g, [list(x) for x in lag.generators]])
    return {"ok": not fails and counts == {1: 3, 2: 15}, "lagrangians": counts, "failures": fails}


def _item_type_a_index() -> Dict[str, object]:
    fails = []
    for n in (2, 3, 4):
        alpha_g, beta_g = index_label_groups(f"SL({n})")
        if alpha_g != FinAbGroup((n,)) or beta_g != FinAbGroup((n,)):
            fails.append([n, "label groups"])
        for d_ in range(n):
            for e in range(n):
                if derived_index_map((d_,), (e,), alpha_g, beta_g) != (((-e) % n,), (d_,)):
                    fails.append([n, d_, e])
        # M / H^1 dualizes to M: the full subgroup goes to 0
        s = m_skeleton(f"SL({n})", 1, SymplecticModule.from_datum(resolve_group(f"SL({n})"), 1).elements())
        if dualize_skeleton(s).gamma.order != 1:
            fails.append([n, "full H^1 does not dualize to 0"])
    return {"ok": not fails, "failures": fails}


def _item_so_even(pairing_for_spin4: Optional[Pairing] = None) -> Dict[str, object]:
    fails = []
    for n2 in (4, 6, 8):
        d = resolve_group(f"Spin({n2})")
        if n2 == 4:
            v = (1, 1)
        else:
            v = vector_class(d.types[0])
        for g in (1, 2):
            p = pairing_for_spin4 if n2 == 4 else None
            s = m_skeleton(d, g, pairing=p)
            m = s.module
            mu2 = [tuple(0 for _ in v), tuple(v)]
            gens = []
            for i in range(2 * g):
                blocks = [tuple(0 for _ in v)] * (2 * g)
                blocks[i] = mu2[1]
                gens.append(tuple(x for b in blocks for x in b))
            sub = span(m, gens)
            if not (is_isotropic(sub) and is_lagrangian(sub)):
                fails.append([n2, g])
    return {"ok": not fails, "failures": fails}


def _item_so_sp() -> Dict[str, object]:
    fails = []
    for n in (2, 3):
        for src, dst in ((f"B{n}", f"C{n}"), (f"C{n}", f"B{n}")):
            for g in (1, 2):
                s = m_skeleton(src, g, SymplecticModule.from_datum(resolve_group(src), g).elements())
                rep = dualize(s)
                if not (rep.ok and rep.dual.algebra == dst and rep.dual.gamma.order == 1):
                    fails.append([src, g])
                z = dualize(m_skeleton(src, g))
                if not (z.ok and z.dual.gamma.order == z.dual.module.order):
                    fails.append([src, g, "zero"])
    return {"ok": not fails, "failures": fails}


REGRESSIONS = ("a1_lagrangians_self_dual", "type_a_index_map", "so_even_isotropic", "so_sp_exchange")


def regression_suite(only: Optional[Iterable[str]] = None, corrupt_pairing: bool = False) -> Dict[str, object]:
    """Named example checks, in fixed order; failures are collected, not raised."""
    wanted = list(REGRESSIONS) if only is None else [x for x in REGRESSIONS if x in set(only)]
    spin4_pairing = _corrupted_pairing(center(resolve_group("Spin(4)")).group) if corrupt_pairing else None
    runners = {"a1_lagrangians_self_dual": _item_a1_lagrangians,
               "type_a_index_map": _item_type_a_index,
               "so_even_isotropic": lambda: _item_so_even(spin4_pairing),
               "so_sp_exchange": _item_so_sp}
    items = [{"name": name, **runners[name]()} for name in wanted]
    failed = [it["name"] for it in items if not it["ok"]]
    return {"ok": not failed, "items": items, "failed": failed}


def all_skeletons(algebra: str, genus: int, cap: int = 2 ** 12) -> List[StackySkeleton]:
    """One skeleton per subgroup of ``H^1``."""
    d = _sc_datum(algebra)
    m = SymplecticModule.from_datum(d, genus)
    return [_skeleton(d, genus, m, gamma) for gamma in all_subgroups(m, cap)]
