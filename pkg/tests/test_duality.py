from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stackdual.duality import (GradedDims, all_skeletons, bun_torus_skeleton_dual, center_transport,
                               derived_index_map, dualize, dualize_skeleton, fm_grading_map,
                               index_label_groups, involution_check, is_self_dual, m_skeleton,
                               natural_center_pairing, regression_suite)
from stackdual.errors import InvalidSubgroup, LabelOutOfGroup
from stackdual.gtau import dual_simply_connected
from stackdual.registry import resolve_group
from stackdual.rootdata import center, center_pairing
from stackdual.symp import SymplecticModule, all_subgroups, annihilator, enumerate_lagrangians, span
from stackdual.zmod import FinAbGroup, Lattice


def test_skeleton_examples():
    s = m_skeleton("A1", 2)
    assert s.pi0 == s.band == FinAbGroup((2,))
    assert s.prym_kernel.is_trivial()
    e8 = m_skeleton("E8", 1)
    assert e8.pi0.is_trivial() and e8.band.is_trivial()
    full = m_skeleton("A2", 1, SymplecticModule.from_datum(resolve_group("A2"), 1).elements())
    assert full.prym_kernel == FinAbGroup((3, 3))


def test_skeleton_from_non_simply_connected_name():
    assert m_skeleton("PGL(3)", 1).pi0 == FinAbGroup((3,))


def test_invalid_subgroup():
    with pytest.raises(InvalidSubgroup):
        m_skeleton("A1", 1, [(1, 0, 0)])
    with pytest.raises(InvalidSubgroup):
        m_skeleton("A1", 1, [(2, 0)])
    other = SymplecticModule.from_datum(resolve_group("A2"), 1)
    with pytest.raises(InvalidSubgroup):
        m_skeleton("A1", 1, span(other, [(1, 0)]))


def _brute_dual_gamma(s):
    """Annihilator by direct rational dot products of center representatives."""
    d = s.datum
    dual_d = dual_simply_connected(d)
    cz, cw = center(d), center(dual_d)
    dual_m = SymplecticModule.from_datum(dual_d, s.genus)
    k1, k2, g = s.module.block, dual_m.block, s.genus

    def nat(z, w):
        a, b = cz.representative(z), cw.representative(w)
        return sum((x * y for x, y in zip(a, b)), Fraction(0))

    def cup(x, y):
        tot = Fraction(0)
        for i in range(g):
            tot += nat(x[i * k1:(i + 1) * k1], y[(g + i) * k2:(g + i + 1) * k2])
            tot -= nat(x[(g + i) * k1:(g + i + 1) * k1], y[i * k2:(i + 1) * k2])
        return tot % 1

    return frozenset(y for y in dual_m.elements() if all(cup(x, y) == 0 for x in s.gamma.elements))


@pytest.mark.parametrize("label", ["A1", "A2", "A3", "B2", "C3", "D4"])
def test_dual_gamma_matches_brute_force(label):
    for s in all_skeletons(label, 1):
        assert dualize_skeleton(s).gamma.elements == _brute_dual_gamma(s)


@pytest.mark.parametrize("label", ["A1", "A2", "A3", "A4", "B2", "B3", "C3", "D4", "D5", "E6", "E7"])
def test_transport_is_an_isomorphism_onto_characters(label):
    d = resolve_group(label)
    dual_d = dual_simply_connected(d)
    nat = natural_center_pairing(d, dual_d)
    assert nat.is_perfect()
    iota = center_transport(d, dual_d)
    assert len(set(iota.values())) == center(d).group.order
    u = center_pairing(d)
    for z, z2 in product(iota, repeat=2):
        assert nat(z2, iota[z]) == u(z2, z)


def test_dualize_examples():
    m = SymplecticModule.from_datum(resolve_group("A1"), 2)
    gamma = span(m, [(1, 0, 0, 0)])
    rep = dualize(m_skeleton("A1", 2, gamma))
    assert rep.ok and rep.dual.algebra == "A1"
    assert rep.dual.gamma.elements == annihilator(gamma).elements
    for n in (2, 3):
        d = dualize(m_skeleton(f"B{n}", 1))
        assert d.ok and d.dual.algebra == f"C{n}"
        assert dualize_skeleton(d.dual).algebra == f"B{n}"


@pytest.mark.parametrize("label", ["A1", "A2", "A3", "B2", "B3", "C3", "G2", "D4", "A1+A1", "A1+A2"])
def test_involution_genus_one(label):
    for s in all_skeletons(label, 1):
        chk = involution_check(s)
        assert chk.ok, chk.details


def test_swap_laws():
    for s in all_skeletons("A3", 1):
        d = dualize(s)
        assert all(d.swap_checks.values()), d.swap_checks
        assert d.swap_checks["annihilator_routes_agree"]


def test_self_dual_examples():
    dec = is_self_dual("A1", 1, [(1, 0)])
    assert dec and dec.certificate["dual_fixes_skeleton"]
    m = SymplecticModule.from_datum(resolve_group("B2"), 1)
    for gamma in all_subgroups(m):
        dec = is_self_dual("B2", 1, gamma)
        assert dec.certificate["group_matches_dual"]
        assert bool(dec) == dec.certificate["gamma_is_lagrangian"]
    dec = is_self_dual("A2", 1)
    assert not dec and not dec.certificate["gamma_is_lagrangian"]
    assert dec.certificate["annihilator_order"] == 9
    dec = is_self_dual("B3", 1, [(1, 0)])
    assert not dec and not dec.certificate["group_matches_dual"]


@pytest.mark.parametrize("label,g", [("A1", 1), ("A1", 2), ("A2", 1), ("A3", 1), ("D4", 1), ("Spin(4)", 1),
                                     ("E6", 1), ("C2", 1)])
def test_self_dual_fixes_skeleton(label, g):
    m = SymplecticModule.from_datum(resolve_group(label), g)
    for lag in enumerate_lagrangians(m):
        dec = is_self_dual(label, g, lag)
        assert dec and dec.certificate["dual_fixes_skeleton"]


def test_fm_examples():
    assert fm_grading_map(GradedDims.make({(-1, 1): 1})).as_dict() == {(1, 1): 1}
    assert fm_grading_map(GradedDims.make({(0, 0): 1})).as_dict() == {(0, 0): 1}
    assert fm_grading_map(GradedDims.make({(1, 0): 2, (0, -1): 3})).as_dict() == {(0, -1): 2, (-1, 0): 3}
    with pytest.raises(ValueError):
        GradedDims.make({(0, 0): -1})


@settings(max_examples=60, deadline=None)
@given(st.dictionaries(st.tuples(st.integers(-20, 20), st.integers(-20, 20)), st.integers(0, 9), max_size=12))
def test_fm_has_order_four(data):
    d = GradedDims.make(data)
    once = fm_grading_map(d)
    twice = fm_grading_map(once)
    assert twice.as_dict() == {(-m, -n): v for (m, n), v in d.counts}
    four = fm_grading_map(fm_grading_map(twice))
    assert four == d
    assert sum(once.as_dict().values()) == sum(d.as_dict().values())
    # exact order 4 whenever some support point is off the origin
    if any(k != (0, 0) for k, _ in d.counts):
        assert once != d and twice != d


@pytest.mark.parametrize("n", [2, 3, 4])
def test_index_map_type_a(n):
    a, b = index_label_groups(f"SL({n})")
    assert a == b == FinAbGroup((n,))
    for d, e in product(range(n), repeat=2):
        assert derived_index_map((d,), (e,), a, b) == (((-e) % n,), (d,))


def test_index_map_order_four():
    a, b = index_label_groups("Spin(8)")
    assert a == b == FinAbGroup((2, 2))
    a3, b3 = index_label_groups("A3")
    assert derived_index_map((0,), (0,), a3, b3) == ((0,), (0,))
    for x, y in product(a3.elements(), b3.elements()):
        p = derived_index_map(x, y, a3, b3)
        q = derived_index_map(*p, b3, a3)
        assert q == (a3.neg(x), b3.neg(y))
        r = derived_index_map(*q, a3, b3)
        assert derived_index_map(*r, b3, a3) == (x, y)


def test_index_map_errors():
    a, b = index_label_groups("A2")
    with pytest.raises(LabelOutOfGroup):
        derived_index_map((3,), (0,), a, b)
    with pytest.raises(LabelOutOfGroup):
        derived_index_map((0, 0), (0,), a, b)


def test_bun_torus():
    rank1 = bun_torus_skeleton_dual(Lattice.standard(1), 2)
    assert rank1["ok"]
    assert rank1["skeletons"]["stack"]["abelian_dimension"] == 2
    rank0 = bun_torus_skeleton_dual(Lattice.standard(0), 3)
    assert rank0["ok"] and rank0["skeletons"]["stack"]["abelian_dimension"] == 0


def test_bun_torus_nonstandard_basis():
    lat = Lattice.from_generators([(2, 1), (0, 3)], 2)
    rep = bun_torus_skeleton_dual(lat, 1)
    assert rep["ok"]
    # dual basis: columns of the inverse transpose of [[2, 0], [1, 3]]
    inv_t = [(Fraction(1, 2), Fraction(0)), (Fraction(-1, 6), Fraction(1, 3))]
    assert Lattice.from_generators(inv_t, 2).to_json() == rep["dual_cocharacters"]


def test_regression_suite():
    rep = regression_suite()
    assert rep["ok"], rep["failed"]
    assert [it["name"] for it in rep["items"]] == ["a1_lagrangians_self_dual", "type_a_index_map",
                                                   "so_even_isotropic", "so_sp_exchange"]
    bad = regression_suite(corrupt_pairing=True)
    assert not bad["ok"] and bad["failed"] == ["so_even_isotropic"]
    only = regression_suite(only=["a1_lagrangians_self_dual"])
    assert only["ok"] and len(only["items"]) == 1
