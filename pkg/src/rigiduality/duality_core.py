"""Canonical modules, squaring and rigidity, duality functors and traces.

Shift conventions are cohomological: a module ``M`` placed in degree ``m``
is the complex ``M[-m]``, and the dualizing complex ``omega[d]`` has its
module in degree ``-d``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import ambient_polynomial_algebra, tensor_square
from .linalg import det
from .modres import (FPModule, ModuleError, SubQuotient, cohomology_subquotient,
                     format_matrix, free_resolution, iso_probe, prune_module, syzygies)
from .groebner import ModuleBasis
from .smoothalg import (AlgebraHom, FinitenessError, SmoothnessError, finite_data,
                        free_differential_basis, identity_hom)


class DualityError(ModuleError):
    pass


class CMError(DualityError):
    def __init__(self, message, table=None, nonzero=()):
        super().__init__(message)
        self.table = table
        self.nonzero = list(nonzero)


@dataclass
class ExtTable:
    """Cohomology modules indexed by absolute degree."""
    algebra: object
    entries: dict
    note: str = ""
    truncation: int = None
    extra: dict = field(default_factory=dict)

    def nonzero_degrees(self):
        return sorted(k for k, m in self.entries.items() if not m.is_zero())

    def concentrated(self):
        """The single degree carrying a nonzero module, or None."""
        nz = self.nonzero_degrees()
        return nz[0] if len(nz) == 1 else None

    def module_at(self, k):
        m = self.entries.get(k)
        return m if m is not None else FPModule.zero(self.algebra)

    def to_json(self):
        return {"note": self.note, "truncation": self.truncation,
                "entries": {str(k): (self.entries[k].to_json() if not self.entries[k].is_zero()
                                     else "0") for k in sorted(self.entries)}}


@dataclass
class CanonicalData:
    algebra: object
    ambient: object
    n: int
    codim: int
    omega: FPModule
    d: int
    cm_certificate: list
    ext_table: ExtTable = None
    route: str = "ambient"

    @property
    def shift(self):
        return self.d

    def is_gorenstein(self, seed=0):
        free = FPModule.free(self.algebra)
        if self.omega.ngens == 1 and not self.omega.rows:
            return True
        return iso_probe(self.omega, free, seed=seed).found

    def to_json(self):
        return {"algebra": self.algebra.describe(), "n": self.n, "codim": self.codim,
                "d": self.d, "omega": self.omega.to_json(), "cm_certificate": self.cm_certificate,
                "route": self.route}


def _transport(module, alg, units=True):
    """Move a module over a ring presenting ``alg`` (same variables) to ``alg``."""
    rows = [[alg.element(alg.ring.convert(p)) for p in r] for r in module.rows]
    return prune_module(FPModule(alg, rows, module.ngens), units=units).module


def canonical_module(A):
    """``omega_A = Ext^c_C(A, C)`` for the ambient polynomial ring ``C``."""
    if A.is_zero_ring():
        raise DualityError("the zero ring has no canonical module")
    C = ambient_polynomial_algebra(A)
    n = C.nvars
    d = A.dim()
    c = n - d
    MA = FPModule.cyclic(C, list(A.ideal_gens))
    res = free_resolution(MA, n + 1)
    entries = {}
    cert = []
    nonzero = []
    omega_c = None
    for i in range(n + 1):
        E = cohomology_subquotient(res, FPModule.free(C), i).module
        entries[i] = E
        if i == c:
            omega_c = E
        elif E.is_zero():
            cert.append(i)
        else:
            nonzero.append(i)
    table = ExtTable(C, entries, note="Ext^i_C(A, C)")
    if nonzero:
        raise CMError("not Cohen-Macaulay: Ext^i_C(A, C) is nonzero for i = %s besides %d"
                      % (nonzero, c), table=table, nonzero=nonzero)
    omega = _transport(omega_c, A)
    return CanonicalData(A, C, n, c, omega, d, cert, table)


def smooth_twist(f, cd, separable=False):
    """``omega_B = B (x) omega_A (x) Omega^n_{B/A}`` with ``d_B = d_A + n``."""
    try:
        basis, cert = free_differential_basis(f, separable=separable)
    except SmoothnessError as exc:
        raise DualityError("smooth twist needs a certified smooth map: %s" % exc) from None
    n = cert.rank
    B = f.target
    rows = [[f.apply(p) for p in r] for r in cd.omega.rows]
    omega = prune_module(FPModule(B, rows, cd.omega.ngens), units=True).module
    out = CanonicalData(B, None, None, None, omega, cd.d + n, [], route="smooth_twist")
    out.top_form_basis = basis
    return out


# ---------------------------------------------------------------------------
# finite maps: Ext_A(B, M) with its B-module structure
# ---------------------------------------------------------------------------

def _lift_chain_maps(A, res, phi0, upto):
    """Lift an endomorphism of ``F_0`` (inducing one on the resolved module)
    to ``Phi_k`` with ``Phi_k d_k == d_k Phi_{k-1}``."""
    phis = [phi0]
    for k in range(1, upto + 1):
        rk, rprev = res.ranks[k], res.ranks[k - 1]
        if rk == 0:
            phis.append([])
            continue
        D = res.d[k]
        target = _mul(A, D, phis[k - 1], rprev)
        mb = ModuleBasis(A.ring, rprev, D, ideal=A.gb.polys, tags=True)
        rows = []
        for row in target:
            c = mb.lift(row)
            if c is None:
                raise DualityError("chain map lift failed in degree %d" % k)
            rows.append([A.nf(p) for p in c])
        phis.append(rows)
    return phis


def _mul(A, a, b, ncols):
    zero = A.ring.zero
    out = []
    for row in a:
        new = []
        for j in range(ncols):
            acc = zero
            for k, x in enumerate(row):
                if x and b[k][j]:
                    acc = acc + x * b[k][j]
            new.append(A.nf(acc))
        out.append(new)
    return out


def _act_on_cochain(A, phi, vec, r, n):
    """``Phi X`` for a flattened ``r x n`` cochain ``X``."""
    X = [vec[i * n:(i + 1) * n] for i in range(r)]
    Y = _mul(A, phi, X, n)
    return [p for row in Y for p in row]


@dataclass
class FiniteExt:
    """``Ext^i_A(B, M)`` over ``A`` and with its ``B``-structure."""
    over_source: FPModule
    over_target: FPModule
    subquotient: SubQuotient
    action: list  # per target variable: matrix on the Ext generators


def finite_ext(f, M, degrees, res=None):
    fd = finite_data(f)
    A, B = f.source, f.target
    Bmod = fd.module()
    top = max(degrees) if degrees else 0
    if res is None:
        res = free_resolution(Bmod, top + 1)
    out = {}
    act0 = [fd.multiplication_matrix(B.ring.gen(v)) for v in B.ring.vars]
    phis = [_lift_chain_maps(A, res, a, top) for a in act0]
    n = M.ngens
    for i in degrees:
        sq = cohomology_subquotient(res, M, i)
        E = sq.module
        m = E.ngens
        actions = []
        for j in range(len(act0)):
            mat = []
            for k in range(m):
                unit = [A.ring.one if l == k else A.ring.zero for l in range(m)]
                vec = sq.realize(unit)
                img = _act_on_cochain(A, phis[j][i], vec, res.ranks[i], n)
                mat.append(sq.express(img))
            actions.append(mat)
        rows = [[f.apply(p) for p in r] for r in E.rows]
        for j, v in enumerate(B.ring.vars):
            vj = B.ring.gen(v)
            for k in range(m):
                row = [-f.apply(p) for p in actions[j][k]]
                row[k] = B.nf(row[k] + vj)
                rows.append(row)
        EB = prune_module(FPModule(B, rows, m), units=True).module if m else FPModule.zero(B)
        out[i] = FiniteExt(E, EB, sq, actions)
    return out, res


def finite_upper_shriek(f, M, shift=0, max_ext=None):
    """``f^flat(M[shift])``: ``Ext^i_A(B, M)`` (as ``B``-modules) at degree ``i - shift``."""
    if f.finite != "yes":
        try:
            finite_data(f)
        except FinitenessError as exc:
            raise DualityError("finiteness not certified: %s" % exc) from None
    A = f.source
    if max_ext is None:
        max_ext = A.nvars
    exts, res = finite_ext(f, M, list(range(max_ext + 1)))
    entries = {i - shift: e.over_target for i, e in exts.items()}
    t = ExtTable(f.target, entries, note="Ext^i_A(B, M) at degree i - %d" % shift,
                 truncation=None if res.complete else max_ext)
    t.extra["source_entries"] = {i - shift: e.over_source for i, e in exts.items()}
    return t


@dataclass
class EvalTrace:
    hom: FiniteExt
    images: list          # eval(phi_k) in coordinates of M
    one_index: int

    def to_json(self, alg):
        return {"hom_over_target": self.hom.over_target.to_json(),
                "images": format_matrix(alg, self.images)}


def eval_trace(f, M):
    """``Hom_A(B, M) -> M``, ``phi -> phi(1)``, on the Hom generators."""
    fd = finite_data(f)
    exts, _ = finite_ext(f, M, [0])
    h = exts[0]
    one = fd.basis.index(tuple([0] * f.target.nvars))
    n = M.ngens
    images = []
    for k in range(h.over_source.ngens):
        unit = [f.source.ring.one if l == k else f.source.ring.zero
                for l in range(h.over_source.ngens)]
        vec = h.subquotient.realize(unit)
        images.append(vec[one * n:(one + 1) * n])
    return EvalTrace(h, images, one)


def classical_trace(f, b):
    return finite_data(f).trace(b)


# ---------------------------------------------------------------------------
# etale pairing
# ---------------------------------------------------------------------------

@dataclass
class EtalePairing:
    gram: list
    det: object
    unit: bool
    basis: list
    compatibility: bool = None
    detail: dict = field(default_factory=dict)

    def to_json(self, alg):
        return {"basis": self.basis, "gram": format_matrix(alg, self.gram),
                "det": alg.format(self.det), "etale": self.unit,
                "trace_compatibility": self.compatibility}


def etale_pairing(f, M=None):
    """Trace-form Gram matrix of a free finite map and the unit verdict;
    when invertible, checks that ``b (x) m -> (x -> tr(b x) m)`` followed
    by evaluation at 1 is ``b (x) m -> tr(b) m`` on generators."""
    fd = finite_data(f)
    if not fd.is_free():
        raise DualityError("no free basis certificate")
    A = f.source
    els = fd.basis_elements()
    B = f.target
    gram = [[fd.trace(B.nf(a * b)) for b in els] for a in els]
    dt = det(gram, A.ring.zero, A.ring.one, reduce=A.nf)
    unit = A.is_unit(dt)
    out = EtalePairing(gram, dt, unit, fd.basis_names())
    if unit:
        out.compatibility = _check_trace_compatibility(f, fd, gram, M or FPModule.free(A))
    return out


def _check_trace_compatibility(f, fd, gram, M):
    A = f.source
    k = len(fd.basis)
    n = M.ngens
    ev = eval_trace(f, M)
    sq = ev.hom.subquotient
    one = ev.one_index
    images = []
    ok = True
    for i in range(k):
        trb = fd.trace(fd.basis_elements()[i])
        for g in range(n):
            # phi(b_j) = tr(b_i b_j) * m_g
            vec = []
            for j in range(k):
                row = [A.ring.zero] * n
                row[g] = gram[i][j]
                vec += row
            try:
                coords = sq.express(vec)
            except ModuleError:
                return False
            images.append(coords)
            back = sq.realize(coords)
            got = back[one * n:(one + 1) * n]
            want = [A.ring.zero] * n
            want[g] = trb
            diff = [A.nf(a - b) for a, b in zip(got, want)]
            if not M.is_zero_element(diff):
                ok = False
    # the identification is onto Hom_A(B, M)
    if ok and ev.hom.over_source.ngens:
        ok = ev.hom.over_source.generated_by(images)
    return ok


def discriminant_monogenic(f_poly, var_index, alg):
    """``Res(f, f')`` up to sign for a monic ``f`` in one variable over ``alg``
    (Sylvester determinant)."""
    from .polyring import partial_derivative
    def coeffs(p):
        byk = {}
        for e, c in p.terms:
            k = e[var_index]
            rest = list(e)
            rest[var_index] = 0
            byk.setdefault(k, []).append((tuple(rest), c))
        deg = max(byk) if byk else 0
        return [alg.ring.from_dict(dict(byk.get(k, []))) for k in range(deg, -1, -1)]
    a = coeffs(f_poly)
    b = coeffs(partial_derivative(f_poly, var_index))
    m, n = len(a) - 1, len(b) - 1
    size = m + n
    zero = alg.ring.zero
    rows = []
    for i in range(n):
        rows.append([zero] * i + a + [zero] * (size - i - len(a)))
    for i in range(m):
        rows.append([zero] * i + b + [zero] * (size - i - len(b)))
    return det(rows, zero, alg.ring.one, reduce=alg.nf)


# ---------------------------------------------------------------------------
# squaring and rigidity
# ---------------------------------------------------------------------------

def _tensor_over_field(M, AA, c1, c2):
    g = M.ngens
    zero = AA.ring.zero
    rows = []
    for rel in M.rows:
        for j in range(g):
            v = [zero] * (g * g)
            for i in range(g):
                v[i * g + j] = c1(rel[i])
            rows.append(v)
        for i in range(g):
            v = [zero] * (g * g)
            for j in range(g):
                v[i * g + j] = c2(rel[j])
            rows.append(v)
    return FPModule(AA, rows, g * g)


def squaring_table(A, M, d=0, bound=6):
    """``E_i = Ext^i_{A (x) A}(A, M (x)_K M)`` for ``i = 0..bound``, as
    ``A``-modules (the rigidity target is ``E_d ~ M``)."""
    AA, c1, c2 = tensor_square(A)
    diag = [c1(A.ring.gen(v)) - c2(A.ring.gen(v)) for v in A.ring.vars]
    Adiag = FPModule.cyclic(AA, diag)
    MM = _tensor_over_field(M, AA, c1, c2)
    res = free_resolution(Adiag, bound + 1)
    # multiplication map A (x) A -> A on the full rings
    nu = len(A.user_vars)
    na = len(A.aux_vars)
    order = list(range(nu)) + list(range(nu)) + list(range(nu, nu + na)) * 2
    full = [A.ring.gen(A.ring.vars[i]) for i in order]

    def mu(p):
        return A.nf(p.compose(full, A.ring))

    entries = {}
    for i in range(bound + 1):
        E = cohomology_subquotient(res, MM, i).module
        rows = [[mu(p) for p in r] for r in E.rows]
        entries[i] = prune_module(FPModule(A, rows, E.ngens), units=True).module
    t = ExtTable(A, entries, note="Ext^i_{A(x)A}(A, M(x)M), i = 0..%d" % bound,
                 truncation=None if res.complete else bound)
    t.extra["resolution_ranks"] = res.ranks
    return t


@dataclass
class RigidityReport:
    algebra: object
    omega: FPModule
    d: int
    bound: int
    verdicts: dict
    rigid: str
    iso: object = None
    seed: int = 0
    table: ExtTable = None

    def to_json(self):
        out = {"algebra": self.algebra.describe(), "d": self.d, "bound": self.bound,
               "rigid": self.rigid, "seed": self.seed,
               "verdicts": {str(k): v for k, v in sorted(self.verdicts.items())}}
        if self.iso is not None:
            out["iso"] = self.iso.to_json(self.algebra)
        return out


def rigidity_check(A, cd=None, bound=6, seed=0):
    if cd is None:
        cd = canonical_module(A)
    table = squaring_table(A, cd.omega, cd.d, bound)
    verdicts = {}
    iso = None
    rigid = "yes"
    for i in range(bound + 1):
        E = table.entries[i]
        if i == cd.d:
            iso = iso_probe(E, cd.omega, seed=seed)
            verdicts[i] = iso.status
            if iso.status == "hilbert_mismatch":
                rigid = "no"
            elif iso.status != "iso_found" and rigid == "yes":
                rigid = "inconclusive"
        else:
            z = E.is_zero()
            verdicts[i] = "zero" if z else "nonzero"
            if not z:
                rigid = "no"
    if cd.d > bound:
        rigid = "inconclusive"
    return RigidityReport(A, cd.omega, cd.d, bound, verdicts, rigid, iso, seed, table)


# ---------------------------------------------------------------------------
# duality functor and twisted inverse image
# ---------------------------------------------------------------------------

def dualize(A, cd, M, degree=0):
    """``D_A(M[-degree]) = RHom_A(M, omega)[d + degree]``:
    ``Ext^i_A(M, omega)`` placed at degree ``i - d - degree``."""
    entries = {}
    if M.ngens == 0 or M.is_zero():
        return ExtTable(A, {}, note="D_A of the zero module")
    res = free_resolution(M, cd.d + 1)
    for i in range(cd.d + 1):
        E = cohomology_subquotient(res, cd.omega, i).module
        entries[i - cd.d - degree] = E
    return ExtTable(A, entries, note="Ext^i_A(M, omega) at degree i - %d - %d" % (cd.d, degree))


def tor_subquotient(f, N, k, res=None):
    """``Tor_k^A(B, N)`` as a subquotient of ``B^{r_k}``."""
    B = f.target
    if res is None:
        res = free_resolution(N, k + 1)
    if k > res.length:
        return SubQuotient(B, 0, [], [])
    rk = res.ranks[k]
    if rk == 0:
        return SubQuotient(B, 0, [], [])
    Dk = [[f.apply(p) for p in r] for r in res.d[k]] if k >= 1 else []
    if k >= 1 and res.ranks[k - 1]:
        cycles = syzygies(B, Dk, res.ranks[k - 1])
    else:
        cycles = [[B.ring.one if i == j else B.ring.zero for j in range(rk)] for i in range(rk)]
    bounds = [[f.apply(p) for p in r] for r in res.d[k + 1]] if k + 1 <= res.length else []
    return SubQuotient(B, rk, cycles, bounds)


def twisted_inverse_image(f, M, degree=0, cd_source=None, cd_target=None, tor_bound=None):
    """``f^! = D_B L f^* D_A`` on a module whose dual is concentrated."""
    if f.is_identity():
        return ExtTable(f.target, {degree: M}, note="identity map")
    A, B = f.source, f.target
    cdA = cd_source or canonical_module(A)
    cdB = cd_target or canonical_module(B)
    DA = dualize(A, cdA, M, degree)
    j = DA.concentrated()
    if j is None:
        raise DualityError("D_A(M) is not concentrated in one degree (degrees %s)"
                           % DA.nonzero_degrees())
    N = DA.entries[j]
    if tor_bound is None:
        tor_bound = A.nvars
    res = free_resolution(N, tor_bound + 1)
    for k in range(1, tor_bound + 1):
        if not tor_subquotient(f, N, k, res).module.is_zero():
            raise DualityError("Tor_%d^A(B, D_A M) is nonzero; L f^* is not a module" % k)
    NB = prune_module(FPModule(B, [[f.apply(p) for p in r] for r in N.rows], N.ngens),
                      units=True).module
    out = dualize(B, cdB, NB, j)
    out.note = "D_B L f^* D_A (M in degree %d)" % degree
    out.extra["tor_checked_upto"] = tor_bound
    return out


def smooth_upper_sharp(f, M, degree=0, separable=False):
    """``f^sharp M = Omega^n_{B/A} (x) B (x)_A M [n]``."""
    basis, cert = free_differential_basis(f, separable=separable)
    n = cert.rank
    B = f.target
    rows = [[f.apply(p) for p in r] for r in M.rows]
    return ExtTable(B, {degree - n: FPModule(B, rows, M.ngens)},
                    note="f^sharp: twist by Omega^%d in degree %d" % (n, degree - n))


__all__ = ["AlgebraHom", "CanonicalData", "CMError", "DualityError", "EtalePairing",
           "EvalTrace", "ExtTable", "RigidityReport", "canonical_module", "classical_trace",
           "discriminant_monogenic", "dualize", "etale_pairing", "eval_trace",
           "finite_upper_shriek", "identity_hom", "rigidity_check", "smooth_twist",
           "smooth_upper_sharp", "squaring_table", "twisted_inverse_image"]
