"""Top differential forms on towers of smooth algebras and their traces.

A level of a tower is an algebra essentially smooth of relative dimension
``n`` over the base.  Forms are ``h * dv_1 ^ ... ^ dv_n`` in a certified
wedge basis of the level.  For a finite step ``B -> C = B[t]/(f)``, the
trace rewrites ``C``'s wedge basis through the pulled-back basis of ``B``
(for ``n = 1`` this is ``dt = -(1/f') * (df/ds) ds``), takes the
companion-matrix trace over ``Frac(B)`` and clears the denominator.
"""

from __future__ import annotations

from dataclasses import dataclass

from .groebner import ModuleBasis
from .linalg import det
from .polyring import RingError, partial_derivative
from .smoothalg import (AlgebraHom, FinitenessError, finite_data, free_differential_basis,
                        structure_hom)


class FormError(RingError):
    pass


class IntegralityError(FormError):
    pass


# counters read by the test-suite: every companion trace is checked against
# the Newton-identity oracle
ORACLE_CHECKS = {"calls": 0, "agreements": 0}


@dataclass
class Level:
    algebra: object
    basis_vars: list      # names (full-ring) whose differentials form the wedge basis
    to_basis: list        # per full-ring variable: coordinates of dv in the basis
    rank: int

    def omega_coords(self, p):
        """Coordinates of ``dp`` in the wedge basis (one entry per basis var)."""
        alg = self.algebra
        out = [alg.ring.zero] * self.rank
        for o in range(alg.nvars):
            dp = partial_derivative(p, o)
            if dp.is_zero():
                continue
            for j, t in enumerate(self.to_basis[o]):
                if t:
                    out[j] = out[j] + dp * t
        return [alg.nf(q) for q in out]

    def wedge_name(self):
        alg = self.algebra
        names = alg.display_names()
        shown = []
        for v in self.basis_vars:
            i = alg.ring.vars.index(v)
            nm = names[i]
            shown.append(nm(1) if callable(nm) else nm)
        if not shown:
            return ""
        if len(shown) == 1:
            return "d" + shown[0]
        return "d(%s)" % ",".join(shown)


@dataclass
class TopForm:
    level: Level
    coeff: object

    @property
    def algebra(self):
        return self.level.algebra

    def is_zero(self):
        return self.coeff.is_zero()

    def scale(self, c):
        alg = self.algebra
        return TopForm(self.level, alg.nf(alg.element(c) * self.coeff))

    def __add__(self, other):
        return TopForm(self.level, self.algebra.nf(self.coeff + other.coeff))

    def __eq__(self, other):
        return (isinstance(other, TopForm) and self.level.algebra is other.level.algebra
                and self.algebra.nf(self.coeff - other.coeff).is_zero())

    def format(self):
        alg = self.algebra
        if self.coeff.is_zero():
            return "0"
        w = self.level.wedge_name()
        if not w:
            return alg.format(self.coeff)
        c = alg.format(self.coeff)
        if c == "1":
            return w
        if c == "-1":
            return "-" + w
        if len(self.coeff.terms) > 1:
            c = "(%s)" % c
        return "%s * %s" % (c, w)

    def __repr__(self):
        return "TopForm(%s)" % self.format()


class FiniteStep:
    """Monogenic description ``C = B[t]/(f)`` of a finite free map."""

    def __init__(self, hom):
        self.hom = hom
        fd = finite_data(hom)
        if not fd.is_free():
            raise FormError("finite step %r is not free over its source" % hom)
        basis = fd.basis
        nv = len(basis[0]) if basis else 0
        used = {i for m in basis for i in range(nv) if m[i]}
        if len(used) > 1:
            raise FormError("finite step is not monogenic (basis %s)" % fd.basis_names())
        self.fd = fd
        self.degree = len(basis)
        C = hom.target
        if used:
            self.tvar = used.pop()
        else:
            self.tvar = None
        expected = [tuple(k if i == self.tvar else 0 for i in range(nv)) for k in range(self.degree)]
        if self.tvar is not None and basis != expected:
            raise FormError("basis is not 1, t, ..., t^(k-1)")
        B = hom.source
        if self.tvar is not None:
            t = C.ring.gen(self.tvar)
            # t^k = sum c_j t^j  ->  f = t^k - sum c_j t^j (coefficients in B)
            self.tail = fd.coordinates(t ** self.degree)
        else:
            self.tail = []
        self.power_sums = newton_power_sums(B, self.tail, self.degree)

    def monic_coefficients(self):
        """``a_0..a_{k-1}`` with ``f = t^k + a_{k-1} t^{k-1} + ... + a_0``."""
        B = self.hom.source
        return [B.nf(-c) for c in self.tail]

    def describe(self):
        B, C = self.hom.source, self.hom.target
        if self.tvar is None:
            return "degree 1"
        tname = C.ring.vars[self.tvar]
        terms = ["%s^%d" % (tname, self.degree)]
        for j in range(self.degree - 1, -1, -1):
            c = self.tail[j]
            if not c.is_zero():
                terms.append("(%s)*%s^%d" % (B.format(-c), tname, j))
        return " + ".join(terms)

    def derivative_in_target(self):
        """``f'(t)`` (coefficients of ``f`` held constant), as an element of ``C``."""
        C = self.hom.target
        t = C.ring.gen(self.tvar)
        k = self.degree
        out = C.ring(k) * t ** (k - 1)
        for j, c in enumerate(self.tail):
            if j and not c.is_zero():
                out = out - C.ring(j) * self.hom.apply(c) * t ** (j - 1)
        return C.nf(out)

    def coords(self, c):
        return self.fd.coordinates(c)

    def companion_trace(self, c):
        return self.fd.trace(c)

    def newton_trace(self, c):
        B = self.hom.source
        co = self.coords(c)
        return B.nf(sum((a * p for a, p in zip(co, self.power_sums)), B.ring.zero))

    def checked_trace(self, c):
        a = self.companion_trace(c)
        b = self.newton_trace(c)
        ORACLE_CHECKS["calls"] += 1
        if not self.hom.source.nf(a - b).is_zero():
            raise FormError("companion trace %s disagrees with Newton oracle %s" % (a, b))
        ORACLE_CHECKS["agreements"] += 1
        return a

    def inverse_times(self, h, den):
        """``h / den`` in ``Frac(B)[t]/(f)`` as ``(numerator in C, norm in B)``."""
        B, C = self.hom.source, self.hom.target
        M = self.fd.multiplication_matrix(den)
        k = self.degree
        N = det(M, B.ring.zero, B.ring.one, reduce=B.nf)
        if N.is_zero():
            raise FormError("%s is a zerodivisor in the finite step" % C.format(den))
        # first row of the adjugate: x with coords(x) * M = N * e_0
        adj_row = []
        for j in range(k):
            minor = [[M[r][c] for c in range(k) if c != 0] for r in range(k) if r != j]
            sign = -1 if (j % 2) else 1
            m = det(minor, B.ring.zero, B.ring.one, reduce=B.nf)
            adj_row.append(B.nf(m * sign))
        els = self.fd.basis_elements()
        x = C.ring.zero
        for a, e in zip(adj_row, els):
            if not a.is_zero():
                x = x + self.hom.apply(a) * e
        return C.nf(h * x), N


def newton_power_sums(B, tail, k):
    """``p_m = tr(t^m)`` for ``m < k`` from ``t^k = sum tail_j t^j``."""
    a = [B.nf(-c) for c in tail] + [B.ring.one]  # monic coefficients a_0..a_k
    p = []
    for m in range(k):
        if m == 0:
            p.append(B.ring(k))
            continue
        acc = B.ring.zero
        for i in range(1, m):
            acc = acc + a[k - i] * p[m - i]
        acc = acc + a[k - m] * B.ring(m)
        p.append(B.nf(-acc))
    return p


def newton_trace_oracle(B, f_tail, k, coords, den=None):
    """Trace via Newton's identities of ``sum coords_j t^j`` (divided by ``den``)."""
    p = newton_power_sums(B, f_tail, k)
    num = B.nf(sum((c * q for c, q in zip(coords, p)), B.ring.zero))
    return num, den


def _is_nonzerodivisor(alg, p):
    if p.is_zero():
        return False
    mb = ModuleBasis(alg.ring, 1, [[p]], ideal=alg.gb.polys, tags=True)
    return not mb.syzygies()


def _divide(alg, num, den):
    """Exact quotient in ``alg`` or None."""
    if num.is_zero():
        return alg.ring.zero
    if den.is_constant():
        return alg.nf(num.scale(1 / den.lc()))
    mb = ModuleBasis(alg.ring, 1, [[den]], ideal=alg.gb.polys, tags=True)
    c = mb.lift([num])
    return None if c is None else alg.nf(c[0])


class Tower:
    """Algebras over a common base, each smooth of the same relative
    dimension, with maps between them (explicit or by variable names)."""

    def __init__(self, base, levels, homs=(), name=None, separable=False):
        self.base = base
        self.name = name
        self.levels = {}
        self.order = []
        self.homs = {}
        self.separable = separable
        for h in homs:
            self.homs[(id(h.source), id(h.target))] = h
        self._steps = {}
        self.rank = None
        for alg in levels:
            self.add_level(alg)

    def add_level(self, alg):
        f = self.structure(self.base, alg)
        basis, cert = free_differential_basis(f, separable=self.separable)
        if self.rank is None:
            self.rank = cert.rank
        elif cert.rank != self.rank:
            raise FormError("level %r has relative dimension %d, expected %d"
                            % (alg, cert.rank, self.rank))
        lev = Level(alg, basis, cert.pruned.old_to_new, cert.rank)
        self.levels[id(alg)] = lev
        self.order.append(alg)
        return lev

    def level(self, alg):
        try:
            return self.levels[id(alg)]
        except KeyError:
            raise FormError("%r is not a level of this tower" % alg) from None

    def structure(self, X, Y):
        """The map ``X -> Y``: registered, by names, or composed through
        registered maps."""
        if X is Y:
            return structure_hom(X, X)
        key = (id(X), id(Y))
        if key in self.homs:
            return self.homs[key]
        if set(X.user_vars) <= set(Y.user_vars):
            try:
                h = structure_hom(X, Y)
                self.homs[key] = h
                return h
            except RingError:
                pass
        path = self._path(X, Y)
        if path is None:
            raise FormError("levels %r and %r are unrelated" % (X, Y))
        h = path[0]
        for g in path[1:]:
            h = h.compose(g)
        self.homs[key] = h
        return h

    def _path(self, X, Y):
        frontier = [(X, [])]
        seen = {id(X)}
        while frontier:
            cur, path = frontier.pop(0)
            for (a, b), h in list(self.homs.items()):
                if a == id(cur) and b not in seen:
                    if b == id(Y):
                        return path + [h]
                    seen.add(b)
                    frontier.append((h.target, path + [h]))
        return None

    def form(self, alg, coeff):
        lev = self.level(alg)
        return TopForm(lev, alg.element(coeff))

    # -- operations ----------------------------------------------------------------
    def jacobian(self, f):
        """Coordinates of pulled-back basis differentials: ``J[i][j]``."""
        X, Y = self.level(f.source), self.level(f.target)
        rows = []
        for v in X.basis_vars:
            i = f.source.ring.vars.index(v)
            rows.append(Y.omega_coords(f.full_images[i]))
        return rows

    def pullback_form(self, f, form):
        if isinstance(f, tuple):
            f = self.structure(*f)
        Y = self.level(f.target)
        if form.algebra is not f.source:
            raise FormError("form does not live on the source of the map")
        J = self.jacobian(f)
        alg = f.target
        dj = det(J, alg.ring.zero, alg.ring.one, reduce=alg.nf)
        return TopForm(Y, alg.nf(f.apply(form.coeff) * dj))

    def localize_form(self, g, form):
        if isinstance(g, tuple):
            g = self.structure(*g)
        if not g.localization:
            raise FormError("%r is not a localization map" % g)
        return self.pullback_form(g, form)

    def finite_step(self, f):
        key = id(f)
        if key not in self._steps:
            self._steps[key] = FiniteStep(f)
        return self._steps[key]

    def trace_form(self, f, form, chain=None):
        """``Tr_{C/B/A}`` along ``f: B -> C`` (or along ``chain`` of finite
        steps composed by transitivity)."""
        if chain:
            cur = form
            for g in reversed(chain):
                cur = self.trace_form(g, cur)
            return cur
        if isinstance(f, tuple):
            f = self.structure(*f)
        if form.algebra is not f.target:
            raise FormError("form does not live on the target of the map")
        B, C = f.source, f.target
        Bl = self.level(B)
        step = self.finite_step(f)
        if step.tvar is not None:
            fprime = step.derivative_in_target()
            if not _is_nonzerodivisor(C, fprime):
                raise FormError("f' is a zerodivisor in %r" % C)
        J = self.jacobian(f)
        dj = det(J, C.ring.zero, C.ring.one, reduce=C.nf)
        # form = h * dy = (h / det J) * f^*(ds)
        num, N = step.inverse_times(form.coeff, dj)
        if not _is_nonzerodivisor(B, N):
            raise FormError("denominator %s is a zerodivisor in %r" % (B.format(N), B))
        tr = step.checked_trace(num)
        q = _divide(B, tr, N)
        if q is None:
            raise IntegralityError("trace %s / %s is not integral over %r"
                                   % (B.format(tr), B.format(N), B))
        return TopForm(Bl, q)

    def nondegeneracy_matrix(self, f):
        """``G[i][j] = Tr(b_i b_j * f^* beta) / beta`` for the wedge basis ``beta``."""
        step = self.finite_step(f)
        B = f.source
        beta = self.form(B, 1)
        pb = self.pullback_form(f, beta)
        els = step.fd.basis_elements()
        C = f.target
        G = []
        for a in els:
            row = []
            for b in els:
                c = TopForm(pb.level, C.nf(a * b * pb.coeff))
                row.append(self.trace_form(f, c).coeff)
            G.append(row)
        return G

    def is_nondegenerate(self, f):
        G = self.nondegeneracy_matrix(f)
        B = f.source
        d = det(G, B.ring.zero, B.ring.one, reduce=B.nf)
        return not d.is_zero() and _is_nonzerodivisor(B, d)


def classical_trace_step(tower, f, c):
    return tower.finite_step(f).checked_trace(f.target.element(c))


def power_map_tower(n, field=None):
    """``QQ -> QQ[s] -> QQ[t]`` with ``s -> t^n``."""
    from .algebra import make_algebra
    from .polyring import QQ
    from .smoothalg import make_hom
    K = field or QQ
    A = make_algebra(K, [], name="K")
    B = make_algebra(K, ["s"], name="B")
    C = make_algebra(K, ["t"], name="C")
    f = make_hom(B, C, ["t^%d" % n])
    return Tower(A, [B, C], [f]), B, C, f


__all__ = ["ORACLE_CHECKS", "FormError", "IntegralityError", "Level", "TopForm", "Tower", "FiniteStep",
           "newton_power_sums", "newton_trace_oracle", "power_map_tower", "AlgebraHom",
           "FinitenessError", "classical_trace_step"]
