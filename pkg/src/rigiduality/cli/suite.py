"""The verification battery behind ``rigiduality check``.

Each check recomputes one family of exact identities and compares against
frozen values; a failing comparison is a failed check, an exception is a
failed check with the error as detail.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass

from ..algebra import make_algebra
from ..duality_core import (canonical_module, dualize, etale_pairing, finite_upper_shriek,
                       rigidity_check, smooth_twist)
from ..form_trace import ORACLE_CHECKS, TopForm, Tower, classical_trace_step, power_map_tower
from ..groebner import audit_bases, buchberger, is_groebner
from ..modres import FPModule, base_change, free_resolution, iso_probe, minimal_betti
from ..polyring import QQ, PolyRing, poly_divmod
from ..smoothalg import make_hom, structure_hom

CUSP = "y^2 - x^3"
T345 = ("y^2 - x*z", "x^3 - y*z", "z^2 - x^2*y")


@dataclass
class CheckResult:
    name: str
    criterion: int
    passed: bool
    detail: str
    seconds: float
    tags: tuple = ()

    def to_json(self):
        return {"name": self.name, "criterion": self.criterion, "passed": self.passed,
                "detail": self.detail, "seconds": round(self.seconds, 4)}


class CheckFailed(AssertionError):
    pass


def _require(cond, msg):
    if not cond:
        raise CheckFailed(msg)


# ---------------------------------------------------------------------------
# trace-of-forms family
# ---------------------------------------------------------------------------

def check_power_map_traces(seed=0):
    out = []
    for n in range(2, 6):
        T, B, C, f = power_map_tower(n)
        ds = T.form(B, 1)
        vals = []
        for i in range(n):
            w = T.trace_form(f, T.form(C, "t^%d" % i))
            want = ds if i == n - 1 else T.form(B, 0)
            _require(w == want, "n=%d: Tr(t^%d dt) = %s" % (n, i, w.format()))
            vals.append(w.format())
        out.append("n=%d: %s" % (n, ", ".join(vals)))
    return "; ".join(out)


def check_pullback_identity(seed=0):
    for n in range(2, 6):
        T, B, C, f = power_map_tower(n)
        ds = T.form(B, 1)
        pb = T.pullback_form(f, ds)
        for k in range(n):
            c = C.element("t^%d" % k)
            lhs = T.trace_form(f, TopForm(pb.level, C.nf(c * pb.coeff)))
            rhs = ds.scale(classical_trace_step(T, f, c))
            _require(lhs == rhs, "n=%d, c=t^%d: %s vs %s" % (n, k, lhs.format(), rhs.format()))
    return "Tr(c * pullback ds) = tr(c) ds for c = t^k, k < n, n = 2..5"


def check_transitivity(seed=0):
    K = make_algebra(QQ, [], name="K")
    B = make_algebra(QQ, ["s"], name="B")
    C = make_algebra(QQ, ["t"], name="C")
    D = make_algebra(QQ, ["u"], name="D")
    g, h = make_hom(B, C, ["t^2"]), make_hom(C, D, ["u^2"])
    direct = make_hom(B, D, ["u^4"])
    T = Tower(K, [B, C, D], [g, h, direct])
    vals = []
    for i in range(4):
        w = T.form(D, "u^%d" % i)
        two = T.trace_form(None, w, chain=[g, h])
        one = T.trace_form(direct, w)
        _require(one == two, "u^%d du: %s vs %s" % (i, two.format(), one.format()))
        vals.append(one.format())
    return "Tr(u^i du), i = 0..3: " + ", ".join(vals)


def localization_square_tower():
    K = make_algebra(QQ, [], name="K")
    B = make_algebra(QQ, ["s"], name="B")
    C = B.extend(["t"], ["t^3 - s"], name="C")
    Bs = B.localize("s", name="Bs")
    Cs = C.localize("s", name="Cs")
    return Tower(K, [B, C, Bs, Cs]), B, C, Bs, Cs


def check_localization_square(seed=0):
    T, B, C, Bs, Cs = localization_square_tower()
    f, fs = T.structure(B, C), T.structure(Bs, Cs)
    qB, qC = T.structure(B, Bs), T.structure(C, Cs)
    vals = []
    for i in range(3):
        w = T.form(C, "t^%d" % i)
        a = T.localize_form(qB, T.trace_form(f, w))
        b = T.trace_form(fs, T.localize_form(qC, w))
        _require(a == b, "t^%d dt: %s vs %s" % (i, a.format(), b.format()))
        vals.append(a.format())
    return "q(Tr(t^i dt)), i = 0..2: " + ", ".join(vals)


# ---------------------------------------------------------------------------
# duality family
# ---------------------------------------------------------------------------

def check_etale_pairing(seed=0):
    Bs = make_algebra(QQ, ["s"], inverted=["s"], name="Bs")
    C = Bs.extend(["t"], ["t^2 - s"], name="C")
    ep = etale_pairing(structure_hom(Bs, C))
    want = [[Bs.element(2), Bs.element(0)], [Bs.element(0), Bs.element("2*s")]]
    _require(ep.gram == want, "Gram matrix %s" % ep.gram)
    _require(ep.det == Bs.element("4*s") and ep.unit, "determinant %s" % Bs.format(ep.det))
    _require(ep.compatibility is True, "trace compatibility failed")
    B0 = make_algebra(QQ, ["s"], name="B")
    C0 = B0.extend(["t"], ["t^2 - s"], name="C0")
    ep0 = etale_pairing(structure_hom(B0, C0))
    _require(not ep0.unit, "unlocalized pairing reported as perfect")
    return "Gram [[2,0],[0,2s]], det 4s unit, compatibility holds; unlocalized det 4s not a unit"


def _cusp(extra_vars=(), extra_rels=()):
    return make_algebra(QQ, ["x", "y"] + list(extra_vars), [CUSP] + list(extra_rels))


def _t345():
    return make_algebra(QQ, ["x", "y", "z"], T345)


def check_canonical_modules(seed=0):
    A = _cusp()
    cd = canonical_module(A)
    _require(cd.d == 1 and cd.omega.ngens == 1 and not cd.omega.rows,
             "cusp: omega %s, d %d" % (cd.omega.describe(), cd.d))
    S = _t345()
    cs = canonical_module(S)
    _require(cs.d == 1 and minimal_betti(cs.omega, 0)[0] == 2,
             "t345: d %d, %d generators" % (cs.d, minimal_betti(cs.omega, 0)[0]))
    K = make_algebra(QQ, [])
    cK = canonical_module(K)
    for n in range(1, 4):
        P = make_algebra(QQ, ["x%d" % i for i in range(1, n + 1)])
        cp = canonical_module(P)
        _require(cp.d == n and cp.omega.ngens == 1 and not cp.omega.rows,
                 "QQ[x1..x%d]: omega %s, d %d" % (n, cp.omega.describe(), cp.d))
        tw = smooth_twist(structure_hom(K, P), cK)
        _require(tw.d == n and iso_probe(tw.omega, cp.omega, seed=seed).found,
                 "smooth twist route for n=%d" % n)
    P = make_algebra(QQ, ["x"])
    cP = canonical_module(P)
    for name, X, cx in (("cusp", A, cd), ("t345", S, cs)):
        f = make_hom(P, X, ["x"])
        t = finite_upper_shriek(f, cP.omega, shift=cP.d)
        j = t.concentrated()
        _require(j == -cx.d, "%s: finite route concentrated in %s" % (name, j))
        _require(iso_probe(t.entries[j], cx.omega, seed=seed).found,
                 "%s: finite route does not match omega" % name)
    return "cusp free d=1; t345 2-generated d=1; QQ[x1..xn] free d=n; routes match"


def check_rigidity(seed=0):
    x = make_algebra(QQ, ["x"])
    cases = [("QQ", make_algebra(QQ, [])), ("QQ[x]", x),
             ("QQ[x]/(x^2)", make_algebra(QQ, ["x"], ["x^2"])), ("cusp", _cusp())]
    out = []
    for name, A in cases:
        rep = rigidity_check(A, bound=4, seed=seed)
        _require(rep.rigid == "yes", "%s: rigid %s (%s)" % (name, rep.rigid, rep.verdicts))
        _require(rep.verdicts[rep.d] == "iso_found", "%s: degree-d entry not matched" % name)
        if A is x:
            E = rep.table.entries
            _require(E[0].is_zero(), "QQ[x]: E_0 is not zero")
            _require(iso_probe(E[1], FPModule.free(A), seed=seed).found, "QQ[x]: E_1 not A")
        out.append(name)
    return "rigid at N=4: " + ", ".join(out)


def check_biduality(seed=0):
    out = []
    for name, A in (("QQ[x]", make_algebra(QQ, ["x"])), ("cusp", _cusp())):
        cd = canonical_module(A)
        mods = {"A": FPModule.free(A), "A/(x)": FPModule.cyclic(A, ["x"]), "omega": cd.omega}
        for mname, M in mods.items():
            D1 = dualize(A, cd, M, 0)
            j = D1.concentrated()
            _require(j is not None, "%s, %s: D M not concentrated" % (name, mname))
            D2 = dualize(A, cd, D1.entries[j], j)
            _require(D2.concentrated() == 0, "%s, %s: DD M in degree %s"
                     % (name, mname, D2.nonzero_degrees()))
            N = D2.entries[0]
            if M.grading() is not None and N.grading() is not None:
                _require(M.hilbert_series().shifted_equal(N.hilbert_series()),
                         "%s, %s: Hilbert series differ" % (name, mname))
            _require(iso_probe(N, M, seed=seed).found, "%s, %s: DD M not matched" % (name, mname))
        out.append(name)
    return "DD M = M for A, A/(x), omega over " + ", ".join(out)


# ---------------------------------------------------------------------------
# substrate
# ---------------------------------------------------------------------------

def _random_poly(R, rng, terms=4, deg=3):
    n = R.nvars
    d = {}
    for _ in range(terms):
        e = tuple(rng.randint(0, deg) for _ in range(n))
        c = QQ(rng.randint(-9, 9)) / QQ(rng.randint(1, 4))
        d[e] = c
    return R.from_dict({e: c for e, c in d.items() if c})


def check_substrate(seed=0):
    rng = random.Random(seed)
    R = PolyRing(QQ, ("x", "y", "z"))
    for _ in range(1000):
        f = _random_poly(R, rng, 6, 4)
        gs = [g for g in (_random_poly(R, rng, 3, 2) for _ in range(rng.randint(1, 3))) if g]
        if not gs:
            continue
        qs, r = poly_divmod(f, gs)
        total = r
        for q, g in zip(qs, gs):
            total = total + q * g
        _require(total == f, "division identity failed for %s" % f)
        lts = [g.lm() for g in gs]
        _require(not any(all(a <= b for a, b in zip(lt, e)) for e, _ in r.terms for lt in lts),
                 "remainder has a divisible term")
    P = make_algebra(QQ, ["x", "y"])
    Kmod = FPModule.cyclic(P, ["x", "y"])
    res = free_resolution(Kmod, 3)
    res.check()
    ranks = list(res.ranks)
    while ranks and ranks[-1] == 0:
        ranks.pop()
    _require(res.complete and ranks == [1, 2, 1], "Koszul ranks %s" % res.ranks)
    _require(minimal_betti(Kmod) == [1, 2, 1], "Koszul Betti %s" % minimal_betti(Kmod))
    before = dict(ORACLE_CHECKS)
    with audit_bases() as log:
        check_power_map_traces()
        check_transitivity()
        check_localization_square()
        canonical_module(_cusp())
        for _ in range(20):
            gens = [_random_poly(R, rng, 3, 2) for _ in range(3)]
            buchberger([g for g in gens if g] or [R.one], ring=R)
    bad = [gb for gb in log if not is_groebner(gb)]
    _require(not bad, "%d emitted bases fail the Buchberger criterion" % len(bad))
    calls = ORACLE_CHECKS["calls"] - before["calls"]
    agree = ORACLE_CHECKS["agreements"] - before["agreements"]
    _require(calls > 0 and calls == agree, "oracle agreement %d/%d" % (agree, calls))
    return ("1000 division samples; Koszul [1,2,1], d.d = 0; %d bases pass Buchberger; "
            "%d/%d traces agree with Newton oracle" % (len(log), agree, calls))


def check_presentation_independence(seed=0):
    A1 = _cusp()
    A2 = _cusp(["z"], ["z"])
    c1, c2 = canonical_module(A1), canonical_module(A2)
    _require(c1.d == c2.d, "d differs: %d vs %d" % (c1.d, c2.d))
    phi = make_hom(A2, A1, ["x", "y", "0"])
    moved = base_change(c2.omega, phi)
    _require(iso_probe(moved, c1.omega, seed=seed).found, "omega presentations not matched")
    return "d = %d for both; omegas matched" % c1.d


# (name, criterion, tags, function)
CHECKS = [
    ("power-map traces", 1, ("traceform", "forms"), check_power_map_traces),
    ("pullback identity", 2, ("traceform", "forms"), check_pullback_identity),
    ("transitivity", 3, ("traceform", "forms"), check_transitivity),
    ("localization square", 4, ("traceform", "forms"), check_localization_square),
    ("etale pairing", 5, ("etale", "duality"), check_etale_pairing),
    ("canonical modules", 6, ("omega", "duality"), check_canonical_modules),
    ("rigidity", 7, ("rigidity", "duality"), check_rigidity),
    ("biduality", 8, ("biduality", "duality"), check_biduality),
    ("substrate", 9, ("substrate",), check_substrate),
    ("presentation independence", 10, ("presentation", "duality"),
     check_presentation_independence),
]


def select(only=None):
    if not only:
        return list(CHECKS)
    wanted = [w.strip() for w in only.split(",") if w.strip()]
    out = []
    for c in CHECKS:
        keys = {c[0], c[0].replace(" ", "-"), str(c[1])} | set(c[2])
        if keys & set(wanted):
            out.append(c)
    if not out:
        raise ValueError("--only %r selects no checks" % only)
    return out


def run_suite(only=None, seed=0, report=None):
    results = []
    for name, crit, tags, fn in select(only):
        t0 = time.perf_counter()
        try:
            detail = fn(seed=seed)
            passed = True
        except Exception as exc:  # noqa: BLE001 - a failing check never aborts the run
            passed, detail = False, "%s: %s" % (type(exc).__name__, exc)
        r = CheckResult(name, crit, passed, detail, time.perf_counter() - t0, tags)
        results.append(r)
        if report:
            report(r)
    return results


def format_row(r):
    return "%-4s %2d  %-26s %7.2fs  %s" % ("PASS" if r.passed else "FAIL", r.criterion,
                                           r.name, r.seconds, r.detail)
