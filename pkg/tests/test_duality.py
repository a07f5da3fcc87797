import dataclasses

import pytest

from rigiduality.algebra import make_algebra
from rigiduality.duality_core import (CMError, DualityError, canonical_module, dualize, etale_pairing,
                                 eval_trace, finite_upper_shriek, rigidity_check, smooth_twist,
                                 smooth_upper_sharp, squaring_table, twisted_inverse_image)
from rigiduality.modres import FPModule, iso_probe, minimal_betti
from rigiduality.polyring import QQ
from rigiduality.smoothalg import field_algebra, make_hom, structure_hom

K = field_algebra(QQ)
QX = make_algebra(QQ, ["x"])
CUSP = make_algebra(QQ, ["x", "y"], ["y^2 - x^3"])
T345 = make_algebra(QQ, ["x", "y", "z"], ["y^2 - x*z", "x^3 - y*z", "z^2 - x^2*y"])


def is_free_rank_one(M):
    return M.ngens == 1 and not M.rows


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_polynomial_ring_canonical_module(n):
    P = make_algebra(QQ, ["x%d" % i for i in range(n)])
    cd = canonical_module(P)
    assert cd.d == n and is_free_rank_one(cd.omega)


def test_hypersurfaces_are_gorenstein():
    cd = canonical_module(CUSP)
    assert cd.d == 1 and is_free_rank_one(cd.omega) and cd.is_gorenstein()
    assert cd.cm_certificate == [0, 2]
    dual = canonical_module(make_algebra(QQ, ["x"], ["x^2"]))
    assert dual.d == 0 and dual.is_gorenstein()


def test_monomial_curve_is_not_gorenstein():
    cd = canonical_module(T345)
    assert cd.d == 1
    # Hilbert-Burch: omega = coker of the transposed 3x2 matrix
    assert minimal_betti(cd.omega, 1) == [2, 3]
    assert not cd.is_gorenstein()


def test_non_cohen_macaulay_rejected():
    A = make_algebra(QQ, ["x", "y"], ["x^2", "x*y"])
    with pytest.raises(CMError) as err:
        canonical_module(A)
    assert err.value.nonzero


def test_smooth_twist_route():
    for n in (1, 2, 3):
        P = make_algebra(QQ, ["x%d" % i for i in range(n)])
        tw = smooth_twist(structure_hom(K, P), canonical_module(K))
        assert tw.d == n and iso_probe(tw.omega, canonical_module(P).omega).found


@pytest.mark.parametrize("A", [CUSP, T345], ids=["cusp", "t345"])
def test_finite_route_matches(A):
    f = make_hom(QX, A, ["x"])
    t = finite_upper_shriek(f, canonical_module(QX).omega, shift=1)
    assert t.concentrated() == -1 and t.truncation is None
    assert iso_probe(t.entries[-1], canonical_module(A).omega).found


def test_shriek_of_a_quotient():
    B = make_algebra(QQ, ["x"], ["x"])
    f = make_hom(QX, B, ["0"])
    t = finite_upper_shriek(f, FPModule.free(QX), shift=0)
    assert t.nonzero_degrees() == [1]
    assert is_free_rank_one(t.entries[1])


def test_eval_trace_on_power_map():
    B = make_algebra(QQ, ["s"])
    f = make_hom(B, make_algebra(QQ, ["t"]), ["t^2"])
    ev = eval_trace(f, FPModule.free(B))
    assert ev.hom.over_source.ngens == 2


def test_etale_pairing_values():
    Bs = make_algebra(QQ, ["s"], inverted=["s"])
    C = Bs.extend(["t"], ["t^2 - s"])
    ep = etale_pairing(structure_hom(Bs, C))
    assert ep.basis == ["1", "t"]
    assert [[Bs.format(p) for p in r] for r in ep.gram] == [["2", "0"], ["0", "2*s"]]
    assert Bs.format(ep.det) == "4*s" and ep.unit and ep.compatibility
    M = FPModule.free(Bs, 2)
    assert etale_pairing(structure_hom(Bs, C), M).compatibility


def test_rigidity_of_polynomial_line():
    rep = rigidity_check(QX, bound=4)
    assert rep.rigid == "yes"
    assert rep.verdicts == {0: "zero", 1: "iso_found", 2: "zero", 3: "zero", 4: "zero"}
    assert rep.table.entries[0].is_zero()
    assert iso_probe(rep.table.entries[1], FPModule.free(QX)).found


def test_wrong_candidate_is_not_rigid():
    cd = canonical_module(QX)
    fake = dataclasses.replace(cd, omega=FPModule.free(QX, 2))
    assert rigidity_check(QX, fake, bound=2).rigid == "no"
    shifted = dataclasses.replace(cd, d=0)
    assert rigidity_check(QX, shifted, bound=2).rigid == "no"


def test_squaring_of_a_point():
    t = squaring_table(K, FPModule.free(K), 0, 2)
    assert is_free_rank_one(t.entries[0]) and t.entries[1].is_zero()


@pytest.mark.parametrize("A", [QX, CUSP], ids=["line", "cusp"])
def test_biduality(A):
    cd = canonical_module(A)
    for M in (FPModule.free(A), FPModule.cyclic(A, ["x"]), cd.omega):
        D1 = dualize(A, cd, M)
        j = D1.concentrated()
        D2 = dualize(A, cd, D1.entries[j], j)
        assert D2.concentrated() == 0
        assert iso_probe(D2.entries[0], M).found


def test_dual_of_torsion_module_over_the_line():
    cd = canonical_module(QX)
    t = dualize(QX, cd, FPModule.cyclic(QX, ["x"]))
    assert t.concentrated() == 0


def test_twisted_inverse_image_of_smooth_map():
    B = make_algebra(QQ, ["x", "y"])
    f = structure_hom(QX, B)
    cdA = canonical_module(QX)
    t = twisted_inverse_image(f, cdA.omega, degree=-1, cd_source=cdA)
    assert t.concentrated() == -2 and is_free_rank_one(t.entries[-2])
    s = smooth_upper_sharp(f, cdA.omega, degree=-1)
    assert s.concentrated() == -2


def test_twisted_inverse_image_refuses_tor():
    B = make_algebra(QQ, ["x"], ["x"])
    f = make_hom(QX, B, ["0"])
    with pytest.raises(DualityError):
        twisted_inverse_image(f, FPModule.cyclic(QX, ["x"]))
