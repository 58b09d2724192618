"""Independent reference data built from textbook descriptions in epsilon coordinates."""

from fractions import Fraction
from itertools import combinations

from stackdual.rootdata import RootDatum
from stackdual.zmod import Lattice

F = Fraction


def _unit(n, *pairs):
    v = [F(0)] * n
    for i, c in pairs:
        v[i] += c
    return tuple(v)


def _with_negatives(pairs):
    out = []
    for a, h in pairs:
        out.append((a, h))
        out.append((tuple(-x for x in a), tuple(-x for x in h)))
    return out


def gl_datum(n):
    """GL_n: X = Z^n, roots e_i - e_j, coroots e_i - e_j."""
    pairs = [(_unit(n, (i, 1), (j, -1)), _unit(n, (i, 1), (j, -1))) for i, j in combinations(range(n), 2)]
    pairs = _with_negatives(pairs)
    return RootDatum(Lattice.standard(n), tuple(p[0] for p in pairs), tuple(p[1] for p in pairs),
                     name=f"GL{n}-ref")


def gsp_datum(n):
    """GSp_2n with X = Z e_0 + ... + Z e_n."""
    m = n + 1
    pairs = []
    for i, j in combinations(range(1, m), 2):
        pairs.append((_unit(m, (i, 1), (j, -1)), _unit(m, (i, 1), (j, -1))))
        pairs.append((_unit(m, (i, 1), (j, 1), (0, -1)), _unit(m, (i, 1), (j, 1))))
    for i in range(1, m):
        pairs.append((_unit(m, (i, 2), (0, -1)), _unit(m, (i, 1))))
    pairs = _with_negatives(pairs)
    return RootDatum(Lattice.standard(m), tuple(p[0] for p in pairs), tuple(p[1] for p in pairs),
                     name=f"GSp{2 * n}-ref")


def spin_c_datum(n):
    """Spin^c(2n+1): cocharacters D_n + Z enlarged by (e_1, 1/2)."""
    m = n + 1
    pairs = []
    for i, j in combinations(range(n), 2):
        pairs.append((_unit(m, (i, 1), (j, -1)), _unit(m, (i, 1), (j, -1))))
        pairs.append((_unit(m, (i, 1), (j, 1)), _unit(m, (i, 1), (j, 1))))
    for i in range(n):
        pairs.append((_unit(m, (i, 1)), _unit(m, (i, 2))))
    pairs = _with_negatives(pairs)
    gens = [_unit(m, (0, 1), (1, 1))] if n > 1 else [_unit(m, (0, 2))]
    gens += [_unit(m, (i, 1), (i + 1, -1)) for i in range(n - 1)]
    gens += [_unit(m, (n, 1)), _unit(m, (0, 1), (n, F(1, 2)))]
    return RootDatum(Lattice.from_generators(gens, m), tuple(p[0] for p in pairs),
                     tuple(p[1] for p in pairs), name=f"Spin^c{2 * n + 1}-ref")


def quotient_order_by_counting(group, subgroup_elems):
    """Order of group/subgroup via cosets, enumerating elements."""
    seen, cosets = set(), 0
    sub = list(subgroup_elems)
    for x in group.elements():
        if x in seen:
            continue
        cosets += 1
        for h in sub:
            seen.add(group.add(x, h))
    return cosets


def _gaussian_binomial(n, k, p):
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= p ** (n - i) - 1
        den *= p ** (i + 1) - 1
    return num // den


def _conjugate(part):
    return [sum(1 for x in part if x >= i) for i in range(1, (max(part) if part else 0) + 1)]


def _partitions_inside(lam):
    """Partitions nu with nu_i <= lam_i (both weakly decreasing)."""
    out = []

    def rec(i, prev, acc):
        if i == len(lam):
            out.append(tuple(x for x in acc if x))
            return
        for v in range(min(prev, lam[i]), -1, -1):
            rec(i + 1, v, acc + [v])
    rec(0, max(lam) if lam else 0, [])
    return out


def count_p_subgroups(lam, p):
    """Number of subgroups of the abelian p-group of type lam (Birkhoff's formula)."""
    lam = sorted(lam, reverse=True)
    lc = _conjugate(lam)
    total = 0
    for nu in _partitions_inside(lam):
        nc = _conjugate(list(nu))
        nc += [0] * (len(lc) + 1 - len(nc))
        term = 1
        for i in range(len(lc)):
            a, b, b1 = lc[i], nc[i], nc[i + 1]
            term *= p ** (b1 * (a - b)) * _gaussian_binomial(a - b1, b - b1, p)
        total += term
    return total


def count_subgroups(moduli):
    """Number of subgroups of Z/m_1 x ... x Z/m_k, multiplying over primes."""
    from sympy import factorint
    by_prime = {}
    for m in moduli:
        for p, e in factorint(m).items():
            by_prime.setdefault(p, []).append(e)
    total = 1
    for p, lam in by_prime.items():
        total *= count_p_subgroups(lam, p)
    return total
