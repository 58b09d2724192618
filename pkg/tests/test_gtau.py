from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import gl_datum, gsp_datum, spin_c_datum
from stackdual.errors import CenterMismatch, NotGeneral, NotInvertible, NotSimplyConnected
from stackdual.gtau import (GeneralEmbedding, build_g_tau, component_group, dual_tau, general_embeddings,
                            is_general_embedding, make_embedding, standard_embedding,
                            tau_independence_witness, verify_appendix_c)
from stackdual.registry import resolve_group
from stackdual.rootdata import center, langlands_dual, root_datum_isomorphic, simple_root_datum
from stackdual.zmod import FinAbGroup, IntMatrix, Lattice, smith_normal_form
from stackdual.zmod.congruence import det_mod, invertible_matrices_mod

SC_WITH_CENTER = ["A1", "A2", "A3", "A4", "B2", "B3", "C2", "C3", "D3", "D4", "D5", "E6", "E7",
                  "A1+A1", "A1+A2"]


def _brute_lift(m: IntMatrix, n: int, bound: int):
    s = m.rows
    for entries in product(range(-bound, bound + 1), repeat=s * s):
        cand = IntMatrix([entries[i * s:(i + 1) * s] for i in range(s)])
        if abs(cand.det()) == 1 and all((cand[i, j] - m[i, j]) % n == 0
                                        for i in range(s) for j in range(s)):
            return cand
    return None


def test_general_examples():
    assert not is_general_embedding(IntMatrix([[3]]), 8, 1).general
    g = is_general_embedding(IntMatrix([[7]]), 8, 1)
    assert g.general and g.lift == IntMatrix([[-1]])
    assert is_general_embedding(IntMatrix([[1]]), 8, 1).lift == IntMatrix([[1]])
    with pytest.raises(NotInvertible):
        is_general_embedding(IntMatrix([[2]]), 4, 1)
    # GL_2(F_2) has six elements and all of them lift
    mats = list(invertible_matrices_mod(2, 2))
    assert len(mats) == 6
    assert all(is_general_embedding(m, 2, 2).general for m in mats)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6, 8])
def test_general_iff_det_pm1(n):
    # SL_s(Z) -> SL_s(Z/n) is onto, so a lift exists exactly when det = +-1 mod n
    for m in invertible_matrices_mod(2, n):
        g = is_general_embedding(m, n, 2)
        assert g.general == (det_mod(m, n) in {1 % n, (-1) % n})
        if g.general:
            assert abs(g.lift.det()) == 1
            assert all((g.lift[i, j] - m[i, j]) % n == 0 for i in range(2) for j in range(2))


# entries bounded by n suffice for n <= 4; larger n needs wider boxes (diag(2, 3) mod 5)
@pytest.mark.parametrize("n", [3, 4])
def test_lift_existence_matches_brute_force(n):
    for m in invertible_matrices_mod(2, n):
        ours = is_general_embedding(m, n, 2).general
        brute = _brute_lift(m, n, n) is not None
        assert ours == brute


def test_reference_gl():
    for n in [2, 3, 4]:
        ours = resolve_group(f"GL({n})")
        ref = gl_datum(n)
        assert ref.validate() == []
        assert root_datum_isomorphic(ours, ref) is not None
        assert root_datum_isomorphic(langlands_dual(ours), ref) is not None


def test_reference_gsp_and_spin_c():
    for n in [1, 2, 3]:
        gsp = resolve_group(f"GSp({2 * n})")
        ref = gsp_datum(n)
        assert ref.validate() == []
        assert root_datum_isomorphic(gsp, ref) is not None
        spin_c = resolve_group(f"Spin^c({2 * n + 1})")
        ref_c = spin_c_datum(n)
        assert ref_c.validate() == []
        assert root_datum_isomorphic(spin_c, ref_c) is not None
        assert root_datum_isomorphic(langlands_dual(gsp), ref_c) is not None


def test_gsp4_is_not_spin_c5_for_rank_3():
    # C3 and B3 root systems differ, so the extended groups cannot match
    a = resolve_group("GSp(6)")
    b = resolve_group("Spin^c(7)")
    assert root_datum_isomorphic(a, b) is None


def _torsion_free_over_coroots(d) -> bool:
    coords = [d.cochar_lattice.coordinates(d.coroots[i]) for i in d.simple_indices]
    m = IntMatrix([[int(c[i]) for c in coords] for i in range(d.rank)])
    _, diag, _ = smith_normal_form(m)
    return all(diag[i, i] in (1, -1) for i in range(min(diag.rows, diag.cols)) if diag[i, i])


@pytest.mark.parametrize("label", SC_WITH_CENTER)
def test_extended_group_shape(label):
    base = resolve_group(label)
    cd = center(base)
    for tau in general_embeddings(cd)[:4]:
        g = build_g_tau(base, tau).result
        assert g.validate() == []
        assert g.rank == base.rank + tau.s
        assert g.semisimple_rank == base.rank
        # the center of the extended group is connected
        assert _torsion_free_over_coroots(g)
        assert component_group(tau).bijective
        assert component_group(tau).group == cd.group


def test_build_rejects_bad_input():
    base = resolve_group("A3")
    cd = center(base)
    with pytest.raises(NotGeneral):
        build_g_tau(base, GeneralEmbedding(cd, IntMatrix([[3]]), Lattice.standard(1), None))
    with pytest.raises(NotSimplyConnected):
        build_g_tau(simple_root_datum("A3", "adjoint"), standard_embedding(cd))
    with pytest.raises(CenterMismatch):
        build_g_tau(resolve_group("A2"), standard_embedding(cd))


def test_non_general_embedding_mod8():
    base = resolve_group("A7")
    tau = make_embedding(center(base), [[3]])
    assert not tau.is_general
    with pytest.raises(NotGeneral):
        build_g_tau(base, tau)


@pytest.mark.parametrize("label", ["A2", "A4", "D4", "A1+A1", "A3+A3"])
def test_independence_of_tau(label):
    base = resolve_group(label)
    embs = general_embeddings(center(base))
    first = embs[0]
    n = first.modulus
    for other in embs[1:6]:
        w = tau_independence_witness(first, other)
        assert abs(w.b.det()) == 1
        prod_ = w.b @ first.matrix
        assert all((prod_[i, j] - other.matrix[i, j]) % n == 0
                   for i in range(first.s) for j in range(first.s))
        assert w.confirmed


def test_dual_of_sl_standard_is_general():
    for n in range(2, 7):
        base = resolve_group(f"SL({n})")
        dt = dual_tau(standard_embedding(center(base)))
        assert dt.injective and dt.embedding.is_general
        assert center(dt.dual_base).group == FinAbGroup((n,))
        assert dt.embedding.matrix[0, 0] % n in {1, n - 1}


def test_trivial_center_embedding():
    base = resolve_group("G2")
    tau = standard_embedding(center(base))
    assert tau.s == 1 and tau.modulus == 1
    g = build_g_tau(base, tau).result
    assert g.rank == 3
    rep = verify_appendix_c(base, tau)
    assert rep["component_group"] == FinAbGroup(()).to_json()


@pytest.mark.parametrize("label", ["A1", "A2", "A3", "B2", "B3", "C3", "D3", "D4", "A1+A1", "F4"])
def test_duality_all_embeddings(label):
    base = resolve_group(label)
    for tau in general_embeddings(center(base)):
        rep = verify_appendix_c(base, tau)
        assert rep["torus_sign_flip_is_isomorphism"]
        assert rep["exact_sequences"]["ok"]
        assert rep["dual_tau_injective"] and rep["dual_tau_general"]


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(SC_WITH_CENTER), st.integers(0, 10 ** 6))
def test_duality_random_embedding(label, seed):
    base = resolve_group(label)
    embs = general_embeddings(center(base))
    tau = embs[seed % len(embs)]
    rep = verify_appendix_c(base, tau)
    assert rep["component_group_matches_center"]
    assert rep["dual_tau_general"] and rep["dual_tau_injective"]


def test_torus_point_values():
    base = resolve_group("A3")
    tau = standard_embedding(center(base))
    assert tau.torus_point((1,)) == (Fraction(1, 4),)
    tau3 = make_embedding(center(base), [[3]])
    assert tau3.torus_point((1,)) == (Fraction(3, 4),)
    assert tau3.lift == IntMatrix([[-1]])
