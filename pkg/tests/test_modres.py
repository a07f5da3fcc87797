import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rigiduality.algebra import make_algebra
from rigiduality.modres import (FPModule, direct_sum, ext_module, free_resolution,
                                hom_subquotient, iso_probe, mat_mul, minimal_betti,
                                prune_module, tensor_module)
from rigiduality.polyring import QQ

P2 = make_algebra(QQ, ["x", "y"])
CUSP = make_algebra(QQ, ["x", "y"], ["y^2 - x^3"])


def residue_field(A):
    return FPModule.cyclic(A, A.user_vars)


def test_koszul_resolution():
    K = residue_field(P2)
    res = free_resolution(K, 3)
    assert res.complete
    assert res.ranks[:3] == [1, 2, 1] and not any(res.ranks[3:])
    assert minimal_betti(K) == [1, 2, 1]


def test_koszul_cohomology_against_the_ring():
    # Hom_R(K, R) = 0 and Ext^1 = 0; only the top Ext is K
    K = residue_field(P2)
    R = FPModule.free(P2)
    assert ext_module(0, K, R).is_zero()
    assert ext_module(1, K, R).is_zero()
    assert iso_probe(ext_module(2, K, R), K).found


def test_residue_field_of_cusp_betti():
    # hypersurface of embedding dimension 2: Poincare series (1+t)/(1-t)
    assert minimal_betti(residue_field(CUSP), 4) == [1, 2, 2, 2, 2]


def test_hilbert_burch_betti():
    T = make_algebra(QQ, ["x", "y", "z"])
    M = FPModule.cyclic(T, ["y^2 - x*z", "x^3 - y*z", "z^2 - x^2*y"])
    assert minimal_betti(M) == [1, 3, 2]


def test_hilbert_series_of_complete_intersection():
    M = FPModule.cyclic(P2, ["x^2", "y^3"])
    hs = M.hilbert_series()
    assert hs.reduced() == ([1, 2, 2, 1], 0)


def test_ext_over_cusp():
    M = FPModule.cyclic(CUSP, ["x"])
    A = FPModule.free(CUSP)
    assert ext_module(0, M, A).is_zero()
    E1 = ext_module(1, M, A)
    assert iso_probe(E1, M).found


def test_prune_removes_unit_relations():
    M = FPModule.from_strings(P2, [["1", "x"]], 2)
    pr = prune_module(M)
    assert pr.module.ngens == 1 and not pr.module.rows


def test_iso_probe_verdicts():
    A = FPModule.free(P2)
    assert iso_probe(A, direct_sum(A, A)).status == "hilbert_mismatch"
    assert iso_probe(FPModule.cyclic(P2, ["x"]), FPModule.cyclic(P2, ["y"])).status \
        == "hilbert_mismatch"
    M = FPModule.from_strings(P2, [["x", "y"]], 2)
    N = FPModule.from_strings(P2, [["x", "x + y"]], 2)
    r = iso_probe(M, N, seed=3)
    assert r.found and r.seed == 3


def test_hom_and_tensor():
    M = FPModule.cyclic(P2, ["x"])
    H = hom_subquotient(M, M).module
    assert iso_probe(H, M).found
    T = tensor_module(M, FPModule.cyclic(P2, ["y"]))
    assert iso_probe(T, residue_field(P2)).found


ideal_gens = st.lists(st.sampled_from(["x", "y", "x^2", "x*y", "y^2 - x", "x^2 - y^3",
                                       "x*y - 1", "x + y"]), min_size=1, max_size=2)


@settings(max_examples=25)
@given(ideal_gens)
def test_resolution_differentials_compose_to_zero(gens):
    M = FPModule.cyclic(P2, gens)
    res = free_resolution(M, 3)
    for k in range(2, len(res.d)):
        prod = mat_mul(P2, res.d[k], res.d[k - 1], res.ranks[k - 2])
        assert all(not p for row in prod for p in row)


@settings(max_examples=25)
@given(ideal_gens)
def test_ext0_of_free_is_identity(gens):
    N = FPModule.cyclic(P2, gens)
    assert iso_probe(ext_module(0, FPModule.free(P2), N), N).found


def test_module_errors():
    from rigiduality.modres import ModuleError
    with pytest.raises(ModuleError):
        FPModule(P2, [[P2.element("x")]], 2)
    with pytest.raises(ModuleError):
        free_resolution(FPModule.free(P2), -1)
