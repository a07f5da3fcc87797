"""Algebra homomorphisms, Kaehler differentials and certificates for
smoothness, finiteness and etaleness."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .algebra import AlgebraError, AlgebraPresentation, make_algebra  # noqa: F401
from .groebner import GroebnerBasis, ModuleBasis, buchberger
from .linalg import det
from .modres import FPModule, format_matrix, prune_module
from .polyring import MonomialOrder, PolyRing, partial_derivative


class HomError(AlgebraError):
    pass


class SmoothnessError(AlgebraError):
    def __init__(self, message, fitting=None):
        super().__init__(message)
        self.fitting = fitting


class FinitenessError(AlgebraError):
    def __init__(self, message, proved_infinite=False):
        super().__init__(message)
        self.proved_infinite = proved_infinite


class AlgebraHom:
    """``f^*: source -> target`` given by images of the source variables."""

    def __init__(self, source, target, images, name=None):
        self.source = source
        self.target = target
        self.name = name
        if len(images) != len(source.user_vars):
            raise HomError("expected %d images, got %d" % (len(source.user_vars), len(images)))
        self.images = [target.element(x) for x in images]
        # aux images: inverses of the images of the inverted elements, in order
        full = list(self.images)
        for j, g in enumerate(source.inverted):
            pad = full + [target.ring.zero] * (source.nvars - len(full))
            img_g = target.nf(g.compose(pad, target.ring))
            inv = target.inverse(img_g)
            if inv is None:
                raise HomError("inverted element %s maps to the non-unit %s"
                               % (source.format(g), target.format(img_g)))
            full.append(inv)
        self.full_images = full
        bad = [r for r in source.relations if not self.apply(r).is_zero()]
        if bad:
            raise HomError("relation %s does not map to zero (image %s)"
                           % (source.format(bad[0]), target.format(self.apply(bad[0]))))
        self.relations_respected = True
        self.finite = "unknown"
        self.smooth_rank = None
        self.etale = "unknown"
        self.localization = self._detect_localization()
        self._finite_data = None

    def apply(self, p):
        if p.ring != self.source.ring:
            p = self.source.ring.convert(p)
        return self.target.nf(p.compose(self.full_images, self.target.ring))

    __call__ = apply

    def _detect_localization(self):
        s, t = self.source, self.target
        if s.user_vars != t.user_vars:
            return False
        if any(img != t.var(v) for img, v in zip(self.images, s.user_vars)):
            return False
        if [t.ring.convert(r) for r in s.relations] != list(t.relations):
            return False
        src_inv = [t.ring.convert(g) for g in s.inverted]
        return list(t.inverted[:len(src_inv)]) == src_inv

    def is_identity(self):
        return self.source is self.target and all(
            img == self.target.var(v) for img, v in zip(self.images, self.source.user_vars))

    def compose(self, other):
        """``other o self`` (first self, then other)."""
        return AlgebraHom(self.source, other.target, [other.apply(p) for p in self.images])

    def describe(self):
        pairs = ", ".join("%s -> %s" % (v, self.target.format(p))
                          for v, p in zip(self.source.user_vars, self.images))
        return "%r -> %r : %s" % (self.source, self.target, pairs or "(no variables)")

    def __repr__(self):
        return self.name or self.describe()

    def flags(self):
        return {"relations_respected": self.relations_respected, "finite": self.finite,
                "smooth_rank": self.smooth_rank, "etale": self.etale,
                "localization": self.localization}


def make_hom(source, target, images, name=None):
    return AlgebraHom(source, target, images, name=name)


def identity_hom(alg):
    return AlgebraHom(alg, alg, alg.gens())


def structure_hom(base, alg):
    """The map ``base -> alg`` matching variables by name (``base`` vars must
    all occur in ``alg``)."""
    missing = [v for v in base.user_vars if v not in alg.user_vars]
    if missing:
        raise HomError("variables %s of %r are not variables of %r" % (missing, base, alg))
    return AlgebraHom(base, alg, [alg.var(v) for v in base.user_vars])


def field_algebra(field):
    return make_algebra(field, [])


# ---------------------------------------------------------------------------
# Kaehler differentials
# ---------------------------------------------------------------------------

@dataclass
class KahlerModule:
    """``Omega^1_{B/A}`` with generators ``d v`` for every variable of ``B``
    (inverse variables included)."""
    hom: AlgebraHom
    module: FPModule
    generator_names: list
    jacobian_rows: list
    image_rows: list

    def to_json(self):
        return {"generators": ["d" + n for n in self.generator_names],
                "relations": format_matrix(self.hom.target, self.module.rows)}


def _differential_row(alg, p):
    return [alg.nf(partial_derivative(p, i)) for i in range(alg.nvars)]


def kahler_module(f):
    B = f.target
    names = list(B.user_vars) + ["(%s)^-1" % B.format(g) for g in B.inverted]
    jac = [_differential_row(B, h) for h in B.ideal_gens]
    img = [_differential_row(B, p) for p in f.full_images[:len(f.source.user_vars)]]
    return KahlerModule(f, FPModule(B, jac + img, B.nvars), names, jac, img)


def _minors_ideal(alg, rows, ncols, size):
    """Generators of the ideal of ``size``-minors of ``rows``."""
    if size <= 0:
        return [alg.ring.one]
    if size > len(rows) or size > ncols:
        return []
    out = []
    for rsel in combinations(range(len(rows)), size):
        for csel in combinations(range(ncols), size):
            m = [[rows[r][c] for c in csel] for r in rsel]
            d = det(m, alg.ring.zero, alg.ring.one, reduce=alg.nf)
            if not d.is_zero():
                out.append(d)
    return out


def fitting_ideal(M, k):
    """Generators of the ``k``-th Fitting ideal of ``M`` (reduced in the algebra)."""
    return _minors_ideal(M.algebra, M.rows, M.ngens, M.ngens - k)


def _ideal_is_unit(alg, gens):
    if not gens:
        return False
    gb = buchberger(list(gens) + list(alg.ideal_gens), ring=alg.ring)
    return gb.is_unit_ideal()


def _ideal_is_zero(alg, gens):
    return all(alg.nf(g).is_zero() for g in gens)


@dataclass
class SmoothCertificate:
    rank: int
    pruned_generators: int
    fitting_zero: int       # index k with F_k = 0 (k = rank - 1), or -1
    fitting_unit: int       # index with F_k = (1)
    basis: list = field(default_factory=list)   # indices of free generators (dv)

    def to_json(self):
        return {"rank": self.rank, "fitting_zero": self.fitting_zero,
                "fitting_unit": self.fitting_unit, "basis": self.basis}


def smoothness_rank(f, separable=False):
    """Certify ``Omega^1_{B/A}`` locally free of rank n via Fitting ideals;
    return the certificate and set ``f.smooth_rank``."""
    if f.target.field.characteristic and not separable:
        raise SmoothnessError("in positive characteristic the differential criterion "
                              "needs an explicit separability assertion")
    om = kahler_module(f)
    B = f.target
    # prefer eliminating inverse differentials, then the base variables
    prefer = list(range(len(B.user_vars), B.nvars))
    base_names = set(f.source.user_vars)
    prefer += [i for i, v in enumerate(B.user_vars) if v in base_names]
    pr = prune_module(om.module, units=True, prefer=prefer)
    M = pr.module
    g = M.ngens
    rank = None
    for k in range(g + 1):
        if _ideal_is_unit(B, fitting_ideal(M, k)):
            rank = k
            break
    if rank is None:
        rank = g
    if rank > 0:
        fz = fitting_ideal(M, rank - 1)
        if not _ideal_is_zero(B, fz):
            gb = buchberger(list(fz) + list(B.ideal_gens), ring=B.ring)
            gens = [B.format(p) for p in gb.polys if not B.nf(p).is_zero()]
            raise SmoothnessError("Fitting ideal F_%d = (%s) is neither zero nor the unit ideal"
                                  % (rank - 1, ", ".join(gens)), fitting=(rank - 1, gens))
    f.smooth_rank = rank
    f.etale = "yes" if rank == 0 else "no"
    cert = SmoothCertificate(rank, g, rank - 1, rank, pr.kept if not M.rows else [])
    cert.pruned = pr
    cert.kahler = om
    return cert


def is_etale(f, separable=False):
    """(verdict, certificate).  ``verdict`` is False when Omega^1 is not zero
    (including non-smooth maps)."""
    try:
        cert = smoothness_rank(f, separable=separable)
    except SmoothnessError as exc:
        f.etale = "no"
        return False, {"reason": str(exc)}
    return cert.rank == 0, cert.to_json()


def free_differential_basis(f, separable=False):
    """Target variables whose differentials form a basis of a free
    ``Omega^1_{B/A}`` (requires the pruned presentation to have no
    relations)."""
    cert = smoothness_rank(f, separable=separable)
    if cert.pruned.module.rows:
        raise SmoothnessError("Omega^1 is projective but not visibly free")
    return [f.target.ring.vars[i] for i in cert.pruned.kept], cert


# ---------------------------------------------------------------------------
# finite maps
# ---------------------------------------------------------------------------

class FiniteData:
    """``B`` as a finitely generated module over ``A`` along ``f``.

    ``basis`` lists target monomials (exponent tuples over the full target
    ring) generating ``B``; ``relations`` present ``B`` as an ``A``-module in
    that generating set.
    """

    def __init__(self, f):
        self.hom = f
        A, B = f.source, f.target
        nv = B.nvars
        na = A.nvars
        self.vnames = list(B.ring.vars)
        self.anames = ["_a%d" % i for i in range(na)]
        order = MonomialOrder("elim", split=nv)
        self.G = PolyRing(B.field, self.vnames + self.anames, order)
        G = self.G
        gens = [G.convert(h) for h in B.ideal_gens]
        for i in range(na):
            img = G.convert(f.full_images[i])
            gens.append(G.gen(self.anames[i]) - img)
        self.gb = buchberger(gens, ring=G)
        lms = self.gb.leading_monomials()
        pure = {}
        for e in lms:
            vs = [i for i in range(nv) if e[i]]
            if len(vs) == 1 and not any(e[nv:]):
                i = vs[0]
                pure[i] = min(pure.get(i, e[i]), e[i])
        missing = [self.vnames[i] for i in range(nv) if i not in pure]
        if missing:
            names = B.display_names()
            shown = [names[self.vnames.index(m)](1) if m in B.aux_vars else m
                     for m in missing]
            raise FinitenessError("no integral equation for %s over the source"
                                  % ", ".join(shown), proved_infinite=True)
        vlms = [e[:nv] for e in lms if any(e[:nv]) and not any(e[nv:])]
        self.basis = _standard_monomials(vlms, nv)
        self.index = {m: k for k, m in enumerate(self.basis)}
        self._to_source = [A.ring.gen(v) for v in A.ring.vars]
        self._relations = None

    # -- conversions -----------------------------------------------------------
    def _coeffs(self, p):
        """Group a graph-ring normal form by target monomial -> source coefficients."""
        A = self.hom.source
        nv = len(self.vnames)
        zero = A.ring.zero
        out = [zero] * len(self.basis)
        parts = {}
        for e, c in p.terms:
            parts.setdefault(e[:nv], []).append((e[nv:], c))
        for v, terms in parts.items():
            if v not in self.index:
                raise FinitenessError("normal form left the standard monomials (internal)")
            out[self.index[v]] = A.nf(A.ring.from_dict({e: c for e, c in terms}))
        return out

    def coordinates(self, b):
        """Source coefficients of ``b`` (a target element) in the basis."""
        B = self.hom.target
        b = B.element(b)
        return self._coeffs(self.gb.normal_form(self.G.convert(b)))

    def basis_elements(self):
        B = self.hom.target
        return [B.ring.monomial(m) for m in self.basis]

    def basis_names(self):
        B = self.hom.target
        return [B.format(p) for p in self.basis_elements()]

    def multiplication_matrix(self, b):
        """Rows: coordinates of ``b * basis_k``."""
        B = self.hom.target
        b = B.element(b)
        return [self.coordinates(B.nf(b * m)) for m in self.basis_elements()]

    def relations(self):
        """Rows over the source presenting ``B`` on the basis."""
        if self._relations is None:
            self._relations = self._compute_relations()
        return self._relations

    def _compute_relations(self):
        G = self.G
        nv = len(self.vnames)
        rows = [[G.monomial(m + (0,) * len(self.anames))] for m in self.basis]
        mb = ModuleBasis(G, 1, rows, ideal=self.gb.polys, tags=True)
        A = self.hom.source
        out = []
        for g in mb.basis:
            if g.comp < 1:
                continue
            if any(any(e[:nv]) for (_, e) in g.vec):
                continue
            vec = [A.ring.zero] * len(self.basis)
            for (comp, e), c in g.vec.items():
                k = comp - 1
                vec[k] = vec[k] + A.ring.from_dict({e[nv:]: c})
            vec = [A.nf(p) for p in vec]
            if any(not p.is_zero() for p in vec):
                out.append(vec)
        return out

    def is_free(self):
        return not self.relations()

    def module(self):
        return FPModule(self.hom.source, self.relations(), len(self.basis))

    def trace(self, b):
        """Classical trace ``tr_{B/A}(b)``; needs a free basis."""
        if not self.is_free():
            raise FinitenessError("no free basis certificate: B is not free on the basis")
        A = self.hom.source
        mat = self.multiplication_matrix(b)
        acc = A.ring.zero
        for k in range(len(mat)):
            acc = acc + mat[k][k]
        return A.nf(acc)


def _standard_monomials(lms, nv):
    bounds = [0] * nv
    for e in lms:
        vs = [i for i in range(nv) if e[i]]
        if len(vs) == 1:
            i = vs[0]
            bounds[i] = e[i] if not bounds[i] else min(bounds[i], e[i])
    out = []

    def rec(i, cur):
        if i == nv:
            m = tuple(cur)
            if not any(all(a >= b for a, b in zip(m, l)) for l in lms):
                out.append(m)
            return
        for k in range(bounds[i]):
            cur.append(k)
            rec(i + 1, cur)
            cur.pop()

    rec(0, [])
    # ascending total degree, then reverse-lex for readability
    out.sort(key=lambda m: (sum(m), tuple(reversed(m))))
    return out


def finite_data(f):
    if f._finite_data is None:
        try:
            f._finite_data = FiniteData(f)
        except FinitenessError:
            f.finite = "no"
            raise
        f.finite = "yes"
    return f._finite_data


def finiteness_basis(f):
    """Monomials generating the target as a module over the source."""
    return finite_data(f).basis_elements()


def classical_trace(f, b):
    return finite_data(f).trace(b)
