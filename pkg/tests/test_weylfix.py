from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stackdual.errors import InvalidRoot, NotFixed, NotSemisimple, NotWeylStable
from stackdual.registry import resolve_group
from stackdual.rootdata import QuotientBy, center, simple_root_datum
from stackdual.weylfix import (TorusPoint, brute_force_invariants, is_fixed, j_global_sections,
                               lifts_to_simply_connected, point_from_coroot_multiple, root_value,
                               torus_weyl_invariants, weyl_orbit_of_roots, weyl_reflect)
from stackdual.zmod import FinAbGroup, Phase

F = Fraction
SL2 = simple_root_datum("A1")
PGL2 = simple_root_datum("A1", "adjoint")
A = SL2.simple_indices[0]


def _h(d, k):
    return point_from_coroot_multiple(d, A, F(k))


def _search_denominator(d) -> int:
    # fixed x has <alpha_i, x> in 1/2 Z, so x lies in 1/4 of the coweight lattice
    return 4 * center(simple_root_datum(d.types[0].label)).group.order


def test_reflect_examples():
    assert weyl_reflect(TorusPoint.identity(SL2), A) == TorusPoint.identity(SL2)
    assert weyl_reflect(_h(SL2, F(1, 4)), A) == _h(SL2, F(-1, 4))
    d = simple_root_datum("A2")
    i = d.index_of_root([2, -1])
    # <alpha_1, (1, 2)/5> = 0, so s_1 fixes the point
    x = TorusPoint.make(d, [F(1, 5), F(2, 5)])
    assert root_value(x, i) == Phase(0) and weyl_reflect(x, i) == x
    with pytest.raises(InvalidRoot):
        weyl_reflect(x, 99)


def test_fixed_examples():
    assert is_fixed(_h(SL2, F(1, 2)), A)
    assert is_fixed(_h(PGL2, F(1, 4)), A)
    dec = is_fixed(_h(SL2, F(1, 4)), A)
    assert not dec and dec.half_integral and dec.coroot_divisibility == 1
    # in PGL2 the coroot h is twice the generator of X_*
    assert is_fixed(_h(PGL2, F(1, 4)), A).coroot_divisibility == 2
    # half-integral root value without being fixed: 3/4 h in SL2
    dec = is_fixed(_h(SL2, F(3, 4)), A)
    assert dec.half_integral and not dec


def test_root_value_examples():
    assert root_value(_h(PGL2, F(1, 4)), A) == Phase(1, 2)
    assert root_value(TorusPoint.identity(SL2), A) == Phase(0)
    assert root_value(_h(SL2, F(1, 2)), A) == Phase(0)


def test_lift_examples():
    assert not lifts_to_simply_connected(_h(PGL2, F(1, 4)), A)
    dec = lifts_to_simply_connected(_h(PGL2, F(1, 2)), A)
    # 1/2 h is trivial in PGL2; both I and -I in SL2 lie over it and are fixed
    assert dec and _h(SL2, F(1, 2)) in dec.preimages
    assert set(dec.preimages) == {TorusPoint.identity(SL2), _h(SL2, F(1, 2))}
    ident = lifts_to_simply_connected(TorusPoint.identity(PGL2), A)
    assert ident and ident.lift == TorusPoint.identity(SL2)
    with pytest.raises(NotFixed):
        lifts_to_simply_connected(TorusPoint.make(PGL2, [F(1, 8)]), A)


def test_invariant_examples():
    inv = torus_weyl_invariants(SL2)
    assert inv.group == FinAbGroup((2,))
    assert set(inv.points()) == {TorusPoint.identity(SL2), _h(SL2, F(1, 2))}
    inv = torus_weyl_invariants(PGL2)
    assert inv.group == FinAbGroup((2,))
    assert set(inv.points()) == {TorusPoint.identity(PGL2), _h(PGL2, F(1, 4))}
    with pytest.raises(NotSemisimple):
        torus_weyl_invariants(resolve_group("GL(2)"))


FORMS = [("A1", "simply_connected"), ("A1", "adjoint"), ("A2", "simply_connected"),
         ("A2", "adjoint"), ("A3", "simply_connected"), ("A3", "adjoint"),
         ("A3", QuotientBy(((2,),))), ("B2", "simply_connected"), ("B2", "adjoint"),
         ("G2", "simply_connected"), ("B3", "simply_connected"), ("B3", "adjoint"),
         ("C3", "simply_connected"), ("C3", "adjoint")]


@pytest.mark.parametrize("label,form", FORMS, ids=lambda x: str(x))
def test_invariants_match_brute_force(label, form):
    d = simple_root_datum(label, form)
    inv = torus_weyl_invariants(d)
    brute = brute_force_invariants(d, _search_denominator(d))
    assert frozenset(inv.points()) == brute
    assert inv.group.order == len(brute)
    # simple reflections generate W, so any root set gives the same answer
    assert frozenset(torus_weyl_invariants(d, range(len(d.roots))).points()) == brute


@pytest.mark.parametrize("label", ["A1", "A2", "A3", "B2", "B3", "C3", "G2"])
def test_lifting_bound(label):
    sc = torus_weyl_invariants(simple_root_datum(label)).group.order
    ad = torus_weyl_invariants(simple_root_datum(label, "adjoint")).group.order
    z = center(simple_root_datum(label)).group.order
    assert (ad * z) % sc == 0


def test_simply_connected_invariants_are_center():
    for label in ["A1", "A4", "B3", "C2", "D4", "D5", "E6", "E7", "F4", "G2"]:
        assert torus_weyl_invariants(simple_root_datum(label)).group == center(simple_root_datum(label)).group


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(FORMS[:10]), st.data())
def test_reflection_properties(form, data):
    d = simple_root_datum(*form)
    n = data.draw(st.integers(1, 12))
    x = [F(data.draw(st.integers(0, n - 1)), n) for _ in range(d.rank)]
    basis = d.cochar_lattice.basis_matrix()
    p = TorusPoint.make(d, [sum(F(b) * c for b, c in zip(row, x)) for row in basis])
    alpha = data.draw(st.integers(0, len(d.roots) - 1))
    assert weyl_reflect(weyl_reflect(p, alpha), alpha) == p
    if is_fixed(p, alpha):
        assert root_value(p, alpha) in (Phase(0), Phase(1, 2))
        dec = lifts_to_simply_connected(p, alpha)
        assert bool(dec) == (root_value(p, alpha) == Phase(0))
        if dec:
            assert is_fixed(dec.lift, alpha)
            assert all(is_fixed(q, alpha) for q in dec.preimages)
    else:
        with pytest.raises(NotFixed):
            lifts_to_simply_connected(p, alpha)


def test_j_sections_examples():
    all_roots = range(len(PGL2.roots))
    assert j_global_sections(PGL2, all_roots).group.is_trivial()
    assert j_global_sections(PGL2, []).group == FinAbGroup((2,))
    assert j_global_sections(SL2, []).group == FinAbGroup((2,))
    assert j_global_sections(SL2, all_roots).group == FinAbGroup((2,))


def test_j_sections_requires_stable_set():
    d = simple_root_datum("A2", "adjoint")
    with pytest.raises(NotWeylStable):
        j_global_sections(d, [d.simple_indices[0]])
    orbit = weyl_orbit_of_roots(d, [d.simple_indices[0]])
    assert len(orbit) == 6


@pytest.mark.parametrize("label,form", [("B2", "adjoint"), ("C3", "adjoint"), ("A3", QuotientBy(((2,),))),
                                        ("A3", "adjoint"), ("D4", QuotientBy(((1, 1),)))], ids=str)
def test_j_sections_all_ramified_is_cover_image(label, form):
    d = simple_root_datum(label, form)
    res = j_global_sections(d, range(len(d.roots)))
    assert res.image_of_cover is not None
    assert set(res.points) == set(res.image_of_cover)
    if d.rank > 3:
        return
    brute = [p for p in brute_force_invariants(d, _search_denominator(d))
             if all(not root_value(p, a) for a in range(len(d.roots)))]
    assert set(brute) == set(res.points)


def test_j_sections_with_reflection_subset():
    # a single reflection in B2 adjoint fixes a rank-one subtorus
    d = simple_root_datum("B2", "adjoint")
    i, j = d.simple_indices
    with pytest.raises(NotSemisimple):
        j_global_sections(d, [], reflections=[i])
