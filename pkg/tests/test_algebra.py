import pytest

from rigiduality.algebra import (AlgebraError, ambient_polynomial_algebra, make_algebra,
                                 tensor_square)
from rigiduality.polyring import QQ


def test_quotient_normal_forms():
    A = make_algebra(QQ, ["x", "y"], ["y^2 - x^3"])
    assert A.element("y^3") == A.element("x^3*y")
    assert A.element("y^2") == A.element("x^3")
    assert A.dim() == 1


def test_localization_inverses():
    B = make_algebra(QQ, ["s"], inverted=["s"])
    inv = B.element("1/s")
    assert B.nf(inv * B.element("s")) == B.ring.one
    assert B.is_unit(B.element("s^3"))
    assert not B.is_unit(B.element("s + 1"))
    assert B.format(B.element("2/s^2")) == "2*s^-2"


def test_localization_kills_annihilated_elements():
    # x*y = 0 and x inverted: y becomes zero
    A = make_algebra(QQ, ["x", "y"], ["x*y"], inverted=["x"])
    assert A.is_zero(A.element("y"))
    with pytest.raises(AlgebraError):
        make_algebra(QQ, ["x"], ["x^2"], inverted=["x"])


def test_zero_ring_rejected():
    with pytest.raises(AlgebraError):
        make_algebra(QQ, ["x"], ["x", "x - 1"])


def test_hidden_names_rejected():
    with pytest.raises(AlgebraError):
        make_algebra(QQ, ["_u0"])


def test_weights_detected():
    assert make_algebra(QQ, ["x", "y"], ["y^2 - x^3"]).weights() == (2, 3)
    assert make_algebra(QQ, ["x", "y"], ["x*y"]).weights() == (1, 1)
    assert make_algebra(QQ, ["x"], ["x^2 - x"]).weights() is None


def test_extension_keeps_inverses():
    Bs = make_algebra(QQ, ["s"], inverted=["s"])
    C = Bs.extend(["t"], ["t^2 - s"])
    assert C.is_unit(C.element("t"))
    assert C.element("1/t") == C.element("t/s")


def test_ambient_and_tensor_square():
    A = make_algebra(QQ, ["x"], ["x^2"], inverted=[])
    assert ambient_polynomial_algebra(A).nvars == 1
    AA, c1, c2 = tensor_square(A)
    assert AA.user_vars == ("x_1", "x_2")
    assert AA.is_zero(c1(A.element("x")) ** 2)
    assert not AA.is_zero(c1(A.element("x")) * c2(A.element("x")))
