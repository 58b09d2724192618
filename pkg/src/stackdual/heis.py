"""Finite Heisenberg groups over a symplectic module and their Stone-von Neumann models.

The extension of ``K`` by the circle uses the cocycle ``beta(x, y) = -w(x_A, y_B)`` built
from a polarization ``K = A + B``.  With the product

    (p, k) (p', k') = (p + p' + beta(k, k'), k + k'),

lifts satisfy ``Phi(b) Phi(a) = w(a, b) Phi(a) Phi(b)``.

The representation attached to a Lagrangian ``L`` with splitting ``s: L -> H`` is the space of
functions ``f`` on ``H`` with ``f(s(l) h) = f(h)`` and ``f(z h) = e(z) f(h)`` for central ``z``,
acted on by right translation.  A function is determined by its values at ``(0, r)`` for coset
representatives ``r`` of ``K / L``; those values are the coordinates used for every matrix here.
Phases are exact; matrices are complex floats compared at ``TOL``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .errors import (CompositeNotScalar, Degenerate, IncompatibleSplittings, InvalidSplitting,
                     InvariantsNotOneDimensional, NotComplementaryLagrangians, NotLagrangian)
from .symp import Elem, Subgroup, SymplecticModule, is_lagrangian, span
from .zmod import Phase

TOL = 1e-9


class HElem(NamedTuple):
    phase: Phase
    point: Elem


def _e(p: Phase) -> complex:
    return complex(math.cos(2 * math.pi * p.value), math.sin(2 * math.pi * p.value))


def _cjson(z: complex) -> List[float]:
    return [round(z.real, 12) + 0.0, round(z.imag, 12) + 0.0]


def standard_polarization(m: SymplecticModule) -> Tuple[Subgroup, Subgroup]:
    """A-cycles and B-cycles."""
    els = list(m.elements())
    return (Subgroup(m, frozenset(m.a_part(x) for x in els)),
            Subgroup(m, frozenset(m.b_part(x) for x in els)))


@dataclass(frozen=True, eq=False)
class HeisenbergGroup:
    module: SymplecticModule
    a_lagrangian: Subgroup
    b_lagrangian: Subgroup
    _split: Mapping[Elem, Tuple[Elem, Elem]] = field(repr=False)

    def split(self, x: Elem) -> Tuple[Elem, Elem]:
        """``(x_A, x_B)`` with ``x = x_A + x_B``."""
        return self._split[x]

    def omega(self, x: Elem, y: Elem) -> Phase:
        return self.module.omega(x, y)

    def beta(self, x: Elem, y: Elem) -> Phase:
        return -self.module.omega(self._split[x][0], self._split[y][1])

    def mul(self, g: HElem, h: HElem) -> HElem:
        return HElem(g.phase + h.phase + self.beta(g.point, h.point), self.module.add(g.point, h.point))

    def inverse(self, g: HElem) -> HElem:
        neg = self.module.neg(g.point)
        return HElem(-g.phase - self.beta(g.point, neg), neg)

    def lift(self, x: Sequence[int]) -> HElem:
        return HElem(Phase(0), self.module.reduce(x))

    def central(self, p: Phase) -> HElem:
        return HElem(p, self.module.zero())

    def identity(self) -> HElem:
        return self.central(Phase(0))

    def commutator_phase(self, x: Elem, y: Elem) -> Phase:
        """``q`` with ``Phi(y) Phi(x) = e(q) Phi(x) Phi(y)``."""
        return self.beta(y, x) - self.beta(x, y)

    def relation_failures(self) -> List[Tuple[Elem, Elem]]:
        """Exhaustive check of ``Phi(b) Phi(a) = w(a, b) Phi(a) Phi(b)`` over all pairs."""
        els = list(self.module.elements())
        bad = []
        for x in els:
            for y in els:
                yx = self.mul(self.lift(y), self.lift(x))
                xy = self.mul(self.lift(x), self.lift(y))
                if yx != HElem(xy.phase + self.omega(x, y), xy.point):
                    bad.append((x, y))
        return bad

    def generators(self) -> List[HElem]:
        """Lifts of the unit vectors of ``K``; with the central circle they generate ``H``."""
        m = self.module
        gens = []
        for i, q in enumerate(m.moduli):
            if q > 1:
                gens.append(self.lift([1 if j == i else 0 for j in range(len(m.moduli))]))
        return gens

    def center_points(self) -> List[Elem]:
        """Points of ``K`` whose lifts are central; only ``0`` since ``w`` is nondegenerate."""
        els = list(self.module.elements())
        return [x for x in els if all(not self.commutator_phase(x, y) for y in els)]

    def to_json(self) -> dict:
        return {"module": self.module.to_json(),
                "order_of_base": self.module.order,
                "polarization": {"A": self.a_lagrangian.to_json(), "B": self.b_lagrangian.to_json()},
                "cocycle": "beta(x, y) = -w(x_A, y_B)",
                "product": "(p, k)(p', k') = (p + p' + beta(k, k'), k + k')"}


def heisenberg(module: SymplecticModule,
               polarization: Optional[Tuple[Subgroup, Subgroup]] = None) -> HeisenbergGroup:
    if module.block and not module.pairing.is_perfect():
        raise Degenerate("w must be nondegenerate")
    a, b = polarization if polarization is not None else standard_polarization(module)
    if a.ambient != module or b.ambient != module:
        raise NotComplementaryLagrangians("polarization lives in a different module")
    if not (is_lagrangian(a) and is_lagrangian(b)):
        raise NotComplementaryLagrangians("both halves of a polarization must be Lagrangian")
    if a.elements & b.elements != {module.zero()}:
        raise NotComplementaryLagrangians("A and B must intersect trivially")
    split: Dict[Elem, Tuple[Elem, Elem]] = {}
    for x in a.elements:
        for y in b.elements:
            split[module.add(x, y)] = (x, y)
    if len(split) != module.order:
        raise NotComplementaryLagrangians("A + B must be all of K")
    return HeisenbergGroup(module, a, b, split)


# --- splittings ---------------------------------------------------------------------

@dataclass(frozen=True)
class Splitting:
    """A section ``l -> (c(l), l)`` over a Lagrangian; a homomorphism when valid."""
    lagrangian: Subgroup
    values: Mapping[Elem, Phase]

    def section(self, l: Elem) -> HElem:
        return HElem(self.values[l], l)

    def to_json(self) -> dict:
        return {"lagrangian": self.lagrangian.to_json(),
                "values": [[list(l), self.values[l].to_json()] for l in self.lagrangian.sorted_elements]}


def set_theoretic_splitting(lagrangian: Subgroup) -> Splitting:
    """``l -> (0, l)``; a homomorphism exactly when ``beta`` vanishes on ``L``."""
    return Splitting(lagrangian, {l: Phase(0) for l in lagrangian.elements})


def splitting_failures(h: HeisenbergGroup, s: Splitting) -> List[Tuple[Elem, Elem]]:
    m = h.module
    return [(x, y) for x in s.lagrangian.elements for y in s.lagrangian.elements
            if h.mul(s.section(x), s.section(y)) != s.section(m.add(x, y))]


def _check_lagrangian(h: HeisenbergGroup, lag: Subgroup) -> None:
    if lag.ambient != h.module or not is_lagrangian(lag):
        raise NotLagrangian("expected a Lagrangian subgroup of the base module")


def _check_splitting(h: HeisenbergGroup, lag: Subgroup, s: Splitting, homomorphism: bool = True) -> None:
    if s.lagrangian != lag or set(s.values) != set(lag.elements):
        raise InvalidSplitting("splitting is defined on a different subgroup")
    if homomorphism and splitting_failures(h, s):
        raise InvalidSplitting("splitting is not a homomorphism")


def _close(h: HeisenbergGroup, seed: Mapping[Elem, Phase]) -> Dict[Elem, Phase]:
    """Extend ``seed`` to the subgroup it generates via ``c(x + y) = c(x) + c(y) + beta(x, y)``."""
    m = h.module
    values: Dict[Elem, Phase] = {m.zero(): Phase(0)}
    for x, c in seed.items():
        if values.get(x, c) != c:
            raise IncompatibleSplittings(f"prescribed values disagree at {x}")
        values[x] = c
    todo = list(values)
    while todo:
        x = todo.pop()
        for y in list(values):
            z, c = m.add(x, y), values[x] + values[y] + h.beta(x, y)
            if z not in values:
                values[z] = c
                todo.append(z)
            elif values[z] != c:
                raise IncompatibleSplittings(f"prescribed values are not a homomorphism at {z}")
    return values


def canonical_splitting(h: HeisenbergGroup, lag: Subgroup,
                        seed: Optional[Mapping[Elem, Phase]] = None) -> Splitting:
    """A homomorphic section over ``lag``, built one element at a time.

    Starting from the subgroup ``S`` generated by ``seed`` (default ``0``), ``S`` is grown by the
    smallest element ``x`` of ``lag`` outside it; if ``k`` is the order of ``x`` modulo ``S``,
    the lift ``(t, x)`` is chosen with ``(t, x)^k = s(k x)``.  The image of the abelian group
    ``lag`` is abelian, so extending multiplicatively is consistent.  Without a seed the
    result is zero on ``A`` and on ``B``.
    """
    _check_lagrangian(h, lag)
    m = h.module
    seed = dict(seed or {})
    if any(x not in lag.elements for x in seed):
        raise InvalidSplitting("seed values lie outside the Lagrangian")
    values = _close(h, seed)
    for x in lag.sorted_elements:
        if x in values:
            continue
        k, kx = 1, x
        while kx not in values:
            kx = m.add(kx, x)
            k += 1
        powers = [Phase(0)]  # powers[j] = phase of (0, x)^j
        jx = m.zero()
        for _ in range(k):
            powers.append(powers[-1] + h.beta(jx, x))
            jx = m.add(jx, x)
        # (t, x)^k = (k t + powers[k], k x) must equal s(k x)
        t = Phase((values[kx] - powers[k]).value / k)
        new: Dict[Elem, Phase] = {}
        for s_el, c in values.items():
            jx = m.zero()
            for j in range(k):
                p = powers[j] + t * j
                new[m.add(s_el, jx)] = c + p + h.beta(s_el, jx)
                jx = m.add(jx, x)
        values = new
    out = Splitting(lag, values)
    if splitting_failures(h, out):
        raise AssertionError("constructed splitting is not a homomorphism")
    return out


def compatible_splittings(h: HeisenbergGroup, lags: Sequence[Subgroup],
                          given: Optional[Sequence[Optional[Splitting]]] = None) -> List[Splitting]:
    """Splittings for ``lags`` that agree on every pairwise intersection.

    Supplied splittings are kept; each missing one is seeded from those before it and from
    supplied ones after it.
    """
    given = list(given) if given is not None else [None] * len(lags)
    out: List[Optional[Splitting]] = list(given)
    for i, lag in enumerate(lags):
        if out[i] is not None:
            continue
        seed: Dict[Elem, Phase] = {}
        for j, other in enumerate(out):
            if j == i or other is None:
                continue
            for l in lag.elements & other.lagrangian.elements:
                if seed.setdefault(l, other.values[l]) != other.values[l]:
                    raise IncompatibleSplittings(f"supplied splittings disagree at {l}")
        out[i] = canonical_splitting(h, lag, seed)
    return out  # type: ignore[return-value]


def twisted(s: Splitting, h: HeisenbergGroup, by: Elem) -> Splitting:
    """Twist by the character ``l -> w(by, l)``; every character of ``L`` arises this way."""
    return Splitting(s.lagrangian, {l: c + h.omega(by, l) for l, c in s.values.items()})


# --- Stone-von Neumann representations ----------------------------------------------

@dataclass(frozen=True)
class Commutant:
    dimension: int
    residue: float
    gap: float

    @property
    def irreducible(self) -> bool:
        return self.dimension == 1 and self.residue < TOL


def _nullspace(stack: np.ndarray, tol: float = 1e-8) -> Tuple[np.ndarray, float]:
    """Orthonormal nullspace basis (as columns) and the smallest kept singular value."""
    n = stack.shape[1]
    if stack.shape[0] == 0:
        return np.eye(n, dtype=complex), math.inf
    _, sv, vh = np.linalg.svd(stack)
    sv = np.concatenate([sv, np.zeros(n - len(sv))])
    keep = sv < tol * max(1.0, sv[0] if len(sv) else 1.0)
    gap = float(sv[~keep].min()) if (~keep).any() else math.inf
    return vh[keep].conj().T, gap


@dataclass(frozen=True, eq=False)
class SvnRep:
    group: HeisenbergGroup
    lagrangian: Subgroup
    splitting: Splitting
    representatives: Tuple[Elem, ...]
    _decomp: Mapping[Elem, Tuple[Elem, int]] = field(repr=False)

    @property
    def dimension(self) -> int:
        return len(self.representatives)

    def decompose(self, k: Elem) -> Tuple[Elem, int]:
        """``(l, j)`` with ``k = l + r_j``."""
        return self._decomp[k]

    def coset_index(self, k: Elem) -> int:
        return self._decomp[k][1]

    def evaluation_phase(self, g: HElem) -> Tuple[Phase, int]:
        """``(z, j)`` with ``f(g) = e(z) f(0, r_j)`` for every vector ``f``."""
        h = self.group
        l, j = self._decomp[g.point]
        return g.phase - self.splitting.values[l] - h.beta(l, self.representatives[j]), j

    def matrix(self, g: HElem) -> np.ndarray:
        h = self.group
        n = self.dimension
        out = np.zeros((n, n), dtype=complex)
        for i, r in enumerate(self.representatives):
            z, j = self.evaluation_phase(h.mul(HElem(Phase(0), r), g))
            out[i, j] += _e(z)
        return out

    def generator_matrices(self) -> List[np.ndarray]:
        return [self.matrix(g) for g in self.group.generators()]

    def commutant(self) -> Commutant:
        n = self.dimension
        eye = np.eye(n)
        blocks = [np.kron(eye, m.T) - np.kron(m, eye) for m in self.generator_matrices()]
        stack = np.vstack(blocks) if blocks else np.zeros((0, n * n), dtype=complex)
        null, gap = _nullspace(stack)
        ident = eye.reshape(-1) / math.sqrt(n)
        residue = 0.0
        for col in null.T:
            residue = max(residue, float(np.linalg.norm(col - np.vdot(ident, col) * ident)))
        return Commutant(null.shape[1], residue, gap)

    def unitarity_residue(self, g: HElem) -> float:
        m = self.matrix(g)
        return float(np.abs(m.conj().T @ m - np.eye(self.dimension)).max())

    def basis_vector(self, b: Elem) -> np.ndarray:
        """``Z_b``: the coordinate vector of the coset of ``b``."""
        v = np.zeros(self.dimension, dtype=complex)
        v[self.coset_index(b)] = 1
        return v

    def to_json(self) -> dict:
        return {"lagrangian": self.lagrangian.to_json(), "dimension": self.dimension,
                "representatives": [list(r) for r in self.representatives],
                "splitting": self.splitting.to_json()}


def svn_representation(h: HeisenbergGroup, lag: Subgroup, splitting: Optional[Splitting] = None,
                       check_homomorphism: bool = True) -> SvnRep:
    _check_lagrangian(h, lag)
    s = canonical_splitting(h, lag) if splitting is None else splitting
    _check_splitting(h, lag, s, check_homomorphism)
    m = h.module
    label: Dict[Elem, Elem] = {}
    for k in m.elements():
        if k not in label:
            coset = [m.add(k, l) for l in lag.elements]
            rep = min(coset)
            for c in coset:
                label[c] = rep
    reps = tuple(sorted(set(label.values())))
    index = {r: i for i, r in enumerate(reps)}
    decomp = {k: (m.add(k, m.neg(r)), index[r]) for k, r in label.items()}
    return SvnRep(h, lag, s, reps, decomp)


# --- partition vectors and absolution -----------------------------------------------

@dataclass(frozen=True, eq=False)
class PartitionVector:
    rep: SvnRep
    coefficients: Mapping[Elem, complex]

    def vector(self) -> np.ndarray:
        v = np.zeros(self.rep.dimension, dtype=complex)
        for b, z in self.coefficients.items():
            v += z * self.rep.basis_vector(b)
        return v

    @property
    def support(self) -> List[Elem]:
        return sorted(b for b, z in self.coefficients.items() if abs(z) > TOL)

    def to_json(self) -> dict:
        return {"coefficients": [[list(b), _cjson(complex(self.coefficients[b]))]
                                 for b in sorted(self.coefficients)]}


def partition_vector(h: HeisenbergGroup, coefficients: Optional[Mapping[Elem, complex]] = None) -> PartitionVector:
    """``(Z_b)_{b in B}`` in the model on ``A``; the canonical vector has every coefficient 1."""
    rep = svn_representation(h, h.a_lagrangian)
    coeffs = {b: 1.0 + 0j for b in h.b_lagrangian.elements} if coefficients is None else dict(coefficients)
    for b in coeffs:
        if b not in h.b_lagrangian.elements:
            raise ValueError(f"{b} is not in B")
    return PartitionVector(rep, coeffs)


@dataclass(frozen=True)
class Absolution:
    value: complex
    unit_normalized: complex
    coefficient: complex
    invariant_vector: Tuple[complex, ...]

    def to_json(self) -> dict:
        return {"value": _cjson(self.value), "unit_normalized": _cjson(self.unit_normalized),
                "coefficient": _cjson(self.coefficient),
                "invariant_vector": [_cjson(z) for z in self.invariant_vector],
                "normalization": "invariant vector has unit-modulus entries, first nonzero entry 1"}


def invariant_line(rep: SvnRep, lag: Subgroup, splitting: Splitting) -> np.ndarray:
    """Vectors fixed by every ``s(l)``, as orthonormal columns."""
    n = rep.dimension
    eye = np.eye(n)
    stack = np.vstack([rep.matrix(splitting.section(l)) - eye for l in lag.sorted_elements])
    return _nullspace(stack)[0]


def absolve(v: PartitionVector, lag: Subgroup, splitting: Optional[Splitting] = None) -> Absolution:
    """Pair ``v`` with the ``lag``-invariant vector ``u``.

    ``u`` has entries of modulus 1 on its support with first nonzero entry 1.  ``value`` is
    ``<u, v>``, ``unit_normalized`` uses ``u / |u|`` and ``coefficient`` is ``<u, v> / <u, u>``,
    the multiple of ``u`` that is the projection of ``v``.  The homomorphism property of the
    splitting is not pre-checked; a bad splitting shows up as a wrong invariant dimension.
    """
    h = v.rep.group
    _check_lagrangian(h, lag)
    s = canonical_splitting(h, lag) if splitting is None else splitting
    _check_splitting(h, lag, s, homomorphism=False)
    null = invariant_line(v.rep, lag, s)
    if null.shape[1] != 1:
        raise InvariantsNotOneDimensional(f"L-invariants have dimension {null.shape[1]}")
    w = null[:, 0]
    first = int(np.flatnonzero(np.abs(w) > 1e-6)[0])
    u = w / w[first]
    vec = v.vector()
    raw = complex(np.vdot(u, vec))
    norm2 = float(np.vdot(u, u).real)
    return Absolution(raw, raw / math.sqrt(norm2), raw / norm2, tuple(complex(z) for z in u))


# --- intertwiners -------------------------------------------------------------------

def _compatible(h: HeisenbergGroup, s1: Splitting, s2: Splitting) -> bool:
    common = s1.lagrangian.elements & s2.lagrangian.elements
    return all(s1.values[l] == s2.values[l] for l in common)


def intertwiner_matrix(r1: SvnRep, r2: SvnRep) -> np.ndarray:
    """``(T f)(h) = N sum_{l in L2} f(s2(l) h)`` with ``N = 1 / (|L1 n L2| sqrt[L2 : L1 n L2])``."""
    h = r1.group
    if not _compatible(h, r1.splitting, r2.splitting):
        raise IncompatibleSplittings("splittings differ on the intersection of the Lagrangians")
    l1, l2 = r1.lagrangian.elements, r2.lagrangian.elements
    common = len(l1 & l2)
    norm = 1.0 / (common * math.sqrt(len(l2) / common))
    out = np.zeros((r2.dimension, r1.dimension), dtype=complex)
    for i, r in enumerate(r2.representatives):
        base = HElem(Phase(0), r)
        for l in r2.lagrangian.sorted_elements:
            z, j = r1.evaluation_phase(h.mul(r2.splitting.section(l), base))
            out[i, j] += norm * _e(z)
    return out


def fourier_intertwiner(h: HeisenbergGroup, l1: Subgroup, l2: Subgroup,
                        splittings: Tuple[Optional[Splitting], Optional[Splitting]] = (None, None)) -> np.ndarray:
    s1, s2 = compatible_splittings(h, [l1, l2], splittings)
    r1 = svn_representation(h, l1, s1)
    r2 = svn_representation(h, l2, s2)
    return intertwiner_matrix(r1, r2)


def intertwining_residue(t: np.ndarray, r1: SvnRep, r2: SvnRep) -> float:
    gens = r1.group.generators()
    if not gens:
        return 0.0
    return max(float(np.abs(t @ r1.matrix(g) - r2.matrix(g) @ t).max()) for g in gens)


def unitarity_residue(t: np.ndarray) -> float:
    return float(np.abs(t.conj().T @ t - np.eye(t.shape[1])).max())


@dataclass(frozen=True)
class MaslovScalar:
    value: complex
    residue: float

    def to_json(self) -> dict:
        return {"value": _cjson(self.value), "abs": round(abs(self.value), 12),
                "off_scalar_residue": self.residue}


def maslov_scalar(h: HeisenbergGroup, l1: Subgroup, l2: Subgroup, l3: Subgroup,
                  splittings: Sequence[Optional[Splitting]] = (None, None, None)) -> MaslovScalar:
    """The scalar by which ``V1 -> V2 -> V3 -> V1`` acts."""
    lags = [l1, l2, l3]
    reps = [svn_representation(h, lag, s)
            for lag, s in zip(lags, compatible_splittings(h, lags, splittings))]
    t12 = intertwiner_matrix(reps[0], reps[1])
    t23 = intertwiner_matrix(reps[1], reps[2])
    t31 = intertwiner_matrix(reps[2], reps[0])
    comp = t31 @ t23 @ t12
    n = comp.shape[0]
    c = complex(np.trace(comp) / n)
    residue = float(np.abs(comp - c * np.eye(n)).max())
    if residue > TOL:
        raise CompositeNotScalar(f"composite differs from a scalar by {residue:.3g}")
    return MaslovScalar(c, residue)


def lagrangian_from_generators(m: SymplecticModule, gens: Sequence[Sequence[int]]) -> Subgroup:
    lag = span(m, gens)
    if not is_lagrangian(lag):
        raise NotLagrangian(f"span of {list(map(list, gens))} is not Lagrangian")
    return lag
