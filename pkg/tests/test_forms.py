import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rigiduality.algebra import make_algebra
from rigiduality.form_trace import (ORACLE_CHECKS, FiniteStep, FormError, IntegralityError, TopForm,
                               Tower, classical_trace_step, newton_trace_oracle, power_map_tower)
from rigiduality.polyring import QQ, PrimeField
from rigiduality.smoothalg import finite_data, make_hom

# Tr(t^i dt) for s -> t^n: ds at i = n - 1, zero below
POWER_MAP_TRACES = {
    2: ["0", "ds"],
    3: ["0", "0", "ds"],
    4: ["0", "0", "0", "ds"],
    5: ["0", "0", "0", "0", "ds"],
}


@pytest.mark.parametrize("n", sorted(POWER_MAP_TRACES))
def test_power_map_traces(n):
    T, B, C, f = power_map_tower(n)
    got = [T.trace_form(f, T.form(C, "t^%d" % i)).format() for i in range(n)]
    assert got == POWER_MAP_TRACES[n]


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_pullback_of_ds(n):
    T, B, C, f = power_map_tower(n)
    want = {2: "2*t * dt", 3: "3*t^2 * dt", 4: "4*t^3 * dt", 5: "5*t^4 * dt"}[n]
    assert T.pullback_form(f, T.form(B, 1)).format() == want


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_trace_of_pullback_is_classical_trace(n):
    T, B, C, f = power_map_tower(n)
    ds = T.form(B, 1)
    pb = T.pullback_form(f, ds)
    for k in range(n):
        c = C.element("t^%d" % k)
        lhs = T.trace_form(f, TopForm(pb.level, C.nf(c * pb.coeff)))
        assert lhs == ds.scale(classical_trace_step(T, f, c))
        assert lhs.format() == ("%d * ds" % n if k == 0 else "0")


def test_oracle_agrees_on_every_trace():
    before = dict(ORACLE_CHECKS)
    for n in (2, 3, 4):
        T, B, C, f = power_map_tower(n)
        for i in range(n):
            T.trace_form(f, T.form(C, "t^%d" % i))
    calls = ORACLE_CHECKS["calls"] - before["calls"]
    assert calls == 9 and ORACLE_CHECKS["agreements"] - before["agreements"] == calls


def test_newton_oracle_direct():
    B = make_algebra(QQ, ["s"])
    C = B.extend(["t"], ["t^3 - s*t - 1"])
    f = make_hom(B, C, ["s"])
    step = FiniteStep(f)
    fd = finite_data(f)
    for c in ["t", "t^2", "t^4 + s", "s*t^5"]:
        num, _ = newton_trace_oracle(B, step.tail, step.degree, fd.coordinates(C.element(c)))
        assert num == fd.trace(C.element(c))


def test_transitivity():
    K = make_algebra(QQ, [], name="K")
    B, C, D = (make_algebra(QQ, [v], name=v.upper()) for v in "stu")
    g, h, direct = make_hom(B, C, ["t^2"]), make_hom(C, D, ["u^2"]), make_hom(B, D, ["u^4"])
    T = Tower(K, [B, C, D], [g, h, direct])
    got = []
    for i in range(4):
        w = T.form(D, "u^%d" % i)
        assert T.trace_form(None, w, chain=[g, h]) == T.trace_form(direct, w)
        got.append(T.trace_form(direct, w).format())
    assert got == ["0", "0", "0", "ds"]


def test_localization_square():
    K = make_algebra(QQ, [], name="K")
    B = make_algebra(QQ, ["s"], name="B")
    C = B.extend(["t"], ["t^3 - s"], name="C")
    Bs, Cs = B.localize("s", name="Bs"), C.localize("s", name="Cs")
    T = Tower(K, [B, C, Bs, Cs])
    assert [T.level(X).wedge_name() for X in (B, C, Bs, Cs)] == ["ds", "dt", "ds", "dt"]
    for i in range(3):
        w = T.form(C, "t^%d" % i)
        left = T.localize_form(T.structure(B, Bs), T.trace_form(T.structure(B, C), w))
        right = T.trace_form(T.structure(Bs, Cs), T.localize_form(T.structure(C, Cs), w))
        assert left == right


def test_nondegeneracy_matrix():
    T, B, C, f = power_map_tower(3)
    G = T.nondegeneracy_matrix(f)
    assert [[B.format(p) for p in r] for r in G] == [["3", "0", "0"], ["0", "0", "3*s"],
                                                     ["0", "3*s", "0"]]
    assert T.is_nondegenerate(f)


def test_two_dimensional_levels():
    K = make_algebra(QQ, [], name="K")
    B = make_algebra(QQ, ["x", "y"], name="B")
    C = make_algebra(QQ, ["x", "t"], name="C")
    f = make_hom(B, C, ["x", "t^2"])
    T = Tower(K, [B, C], [f])
    assert T.level(C).wedge_name() == "d(x,t)"
    assert T.pullback_form(f, T.form(B, 1)).format() == "2*t * d(x,t)"
    assert T.trace_form(f, T.form(C, "t")).format() == "d(x,y)"
    assert T.trace_form(f, T.form(C, "1")).format() == "0"
    assert T.trace_form(f, T.form(C, "x*t^3")).format() == "x*y * d(x,y)"


b_elems = st.sampled_from(["1", "s", "s^2 - 3", "1/2*s + 2"])
c_elems = st.sampled_from(["1", "t", "t^2", "t^4 + 1", "t^2 - t^5"])


@settings(max_examples=30)
@given(b_elems, c_elems)
def test_trace_form_is_base_linear(b, c):
    T, B, C, f = power_map_tower(3)
    w = T.form(C, c)
    lhs = T.trace_form(f, w.scale(f.apply(B.element(b))))
    assert lhs == T.trace_form(f, w).scale(B.element(b))


def test_inseparable_step():
    F = PrimeField(3)
    K = make_algebra(F, [], name="K")
    B = make_algebra(F, ["s"], name="B")
    C = make_algebra(F, ["t"], name="C")
    f = make_hom(B, C, ["t^3"])
    T = Tower(K, [B, C], [f], separable=True)
    assert all(classical_trace_step(T, f, C.element("t^%d" % k)).is_zero() for k in range(3))
    with pytest.raises(FormError):
        T.trace_form(f, T.form(C, "t^2"))


def test_integrality_failure_is_an_error(monkeypatch):
    T, B, C, f = power_map_tower(2)
    step = T.finite_step(f)
    monkeypatch.setattr(step, "checked_trace", lambda c: B.element("1"))
    with pytest.raises(IntegralityError):
        T.trace_form(f, T.form(C, "1"))


def test_form_on_wrong_level():
    T, B, C, f = power_map_tower(2)
    with pytest.raises(FormError):
        T.trace_form(f, T.form(B, 1))
    with pytest.raises(FormError):
        T.pullback_form(f, T.form(C, 1))
