"""Presentations ``K[t_1..t_n]/I`` localized at finitely many elements.

Each inverted element ``g_j`` gets a hidden variable ``_u<j>`` with the
relation ``_u<j> * g_j - 1``; displays show it as ``g_j^-1``.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import gcd, lcm

from .groebner import GroebnerBasis, ModuleBasis, buchberger, krull_dimension
from .linalg import nullspace
from .polyring import PolyRing, Polynomial, RingError
from .syntax import eval_expr, parse_poly_expr


class AlgebraError(RingError):
    pass


def _as_poly(ring, x, invert=None):
    if isinstance(x, Polynomial):
        return ring.convert(x) if x.ring != ring else x
    if isinstance(x, str):
        return eval_expr(parse_poly_expr(x), ring, invert=invert)
    return ring(x)


class AlgebraPresentation:
    """An essentially finite type algebra over a field."""

    def __init__(self, field, variables, relations=(), inverted=(), allow_zero=False,
                 name=None, _aux_base=(), _hidden_ok=False):
        variables = tuple(variables)
        for v in variables:
            if v.startswith("_") and not _hidden_ok:
                raise AlgebraError("variable names may not start with '_': %r" % v)
        self.field = field
        self.name = name
        self.user_vars = variables
        self._aux_base = tuple(_aux_base)
        n_aux = len(self._aux_base) + len(inverted)
        self.aux_vars = tuple("_u%d" % j for j in range(n_aux))
        self.ring = PolyRing(field, variables + self.aux_vars)
        inv_base = [self.ring.convert(g) for g in self._aux_base]

        def early_invert(p):
            for j, g in enumerate(inv_base):
                if p == g:
                    return self.ring.gen(self.aux_vars[j])
            raise AlgebraError("%s is not inverted in this ring" % p)

        self.relations = tuple(_as_poly(self.ring, r, early_invert) for r in relations)
        self.inverted = tuple(inv_base) + tuple(
            _as_poly(self.ring, g, early_invert) for g in inverted)
        for g in self.inverted:
            if any(v in self.aux_vars[len(inv_base):] for v in
                   (self.ring.vars[i] for i in g.variables_used())):
                raise AlgebraError("inverted element may only use earlier inverses")
        for j, g in enumerate(self.inverted[len(inv_base):], start=len(inv_base)):
            prior = list(self.relations) + [self.ring.gen(self.aux_vars[k]) * self.inverted[k] - 1
                                             for k in range(j)]
            gb = buchberger(prior, ring=self.ring) if prior else None
            if (gb.normal_form(g) if gb else g).is_zero():
                raise AlgebraError("inverted element %s is zero in the quotient" % self.format(g))
        self.ideal_gens = self.relations + tuple(
            self.ring.gen(u) * g - 1 for u, g in zip(self.aux_vars, self.inverted))
        self.gb = buchberger(list(self.ideal_gens), ring=self.ring) if self.ideal_gens \
            else GroebnerBasis(self.ring, ())
        if self.gb.is_unit_ideal() and not allow_zero:
            raise AlgebraError("presentation defines the zero ring (1 is in the ideal)")
        self._dim = None
        self._unit_cache = {}
        self._weights = False

    # -- construction helpers -------------------------------------------------
    def extend(self, new_vars, new_relations=(), name=None):
        """``self[new_vars]/(new_relations)``."""
        vars_ = self.user_vars + tuple(new_vars)
        ring = PolyRing(self.field, vars_ + self.aux_vars)
        rels = [ring.convert(r) for r in self.relations]
        rels += [_as_poly(ring, r, self._inverter(ring)) for r in new_relations]
        return AlgebraPresentation(self.field, vars_, rels, [], name=name,
                                   _aux_base=[ring.convert(g) for g in self.inverted])

    def localize(self, g, name=None):
        g = self.element(g)
        return AlgebraPresentation(self.field, self.user_vars, self.relations, [g], name=name,
                                   _aux_base=self.inverted)

    def _inverter(self, ring):
        def invert(p):
            for u, g in zip(self.aux_vars, self.inverted):
                if ring.convert(p) == ring.convert(g):
                    return ring.gen(u)
            raise AlgebraError("%s is not inverted in this ring" % p)
        return invert

    # -- elements ---------------------------------------------------------------
    @property
    def nvars(self):
        return self.ring.nvars

    def gens(self):
        return [self.ring.gen(v) for v in self.user_vars]

    def var(self, name):
        return self.ring.gen(name)

    def nf(self, f):
        if self.gb.polys:
            return self.gb.normal_form(f)
        return f

    def element(self, x):
        if isinstance(x, Polynomial):
            if x.ring != self.ring:
                x = self.ring.convert(x)
            return self.nf(x)
        if isinstance(x, str):
            return self.nf(eval_expr(parse_poly_expr(x), self.ring, invert=self.invert_for_parse))
        return self.ring(x)

    def invert_for_parse(self, p):
        p = self.nf(p)
        for u, g in zip(self.aux_vars, self.inverted):
            if self.nf(g) == p:
                return self.ring.gen(u)
        inv = self.inverse(p)
        if inv is None:
            raise AlgebraError("%s is not a unit in %s" % (self.format(p), self))
        return inv

    def is_zero(self, f):
        return self.nf(f).is_zero()

    def is_zero_ring(self):
        return self.gb.is_unit_ideal()

    def inverse(self, f):
        """Inverse of ``f`` in the algebra, or ``None`` if ``f`` is not a unit."""
        f = self.nf(f)
        if f in self._unit_cache:
            return self._unit_cache[f]
        inv = None
        if f.is_constant():
            inv = self.ring(1 / f.lc()) if f else None
        else:
            mb = ModuleBasis(self.ring, 1, [[f]], ideal=self.gb.polys, tags=True)
            c = mb.lift([self.ring.one])
            if c is not None:
                inv = self.nf(c[0])
        self._unit_cache[f] = inv
        return inv

    def is_unit(self, f):
        return self.inverse(f) is not None

    def dim(self):
        if self._dim is None:
            self._dim = krull_dimension(self.gb)
        return self._dim

    # -- grading ------------------------------------------------------------------
    def weights(self):
        """Positive integer variable weights making the ideal homogeneous, or None."""
        if self._weights is not False:
            return self._weights
        self._weights = _find_weights(self)
        return self._weights

    # -- display --------------------------------------------------------------------
    def display_names(self):
        names = list(self.user_vars) + list(self.aux_vars)
        for j, g in enumerate(self.inverted):
            k = len(self.user_vars) + j
            names[k] = _aux_formatter(g.format(names), len(g.terms) == 1 and g.lc() == 1)
        return names

    def format(self, f):
        if f.ring != self.ring:
            f = self.ring.convert(f)
        if not self.aux_vars:
            return f.format()
        return f.format(self._names_cache())

    def _names_cache(self):
        if not hasattr(self, "_dn"):
            self._dn = self.display_names()
        return self._dn

    def describe(self):
        s = "%r[%s]" % (self.field, ",".join(self.user_vars))
        if self.relations:
            s += "/(%s)" % ", ".join(self.format(r) for r in self.relations)
        if self.inverted:
            s += "[%s]" % ", ".join("1/(%s)" % self.format(g) for g in self.inverted)
        return s

    def __repr__(self):
        return self.name or self.describe()


def _aux_formatter(gtext, simple):
    def fmt(k):
        if simple and "*" not in gtext:
            return "%s^-%d" % (gtext, k)
        return "(%s)^-%d" % (gtext, k)
    return fmt


def _find_weights(alg):
    if alg.aux_vars:
        return None
    n = len(alg.user_vars)
    rels = [p for p in alg.gb.polys]
    constraints = []
    for p in rels:
        base = p.terms[0][0]
        for e, _ in p.terms[1:]:
            constraints.append([Fraction(a - b) for a, b in zip(e, base)])
    if not constraints:
        return (1,) * n
    if all(sum(row) == 0 for row in constraints):
        return (1,) * n
    basis = nullspace(constraints, n, one=Fraction(1))
    if not basis:
        return None
    for coeffs in product(range(1, 5), repeat=len(basis)):
        if len(basis) > 4 and coeffs != (1,) * len(basis):
            break
        for signs in product((1, -1), repeat=len(basis)):
            w = [sum(s * c * b[i] for s, c, b in zip(signs, coeffs, basis)) for i in range(n)]
            if all(x > 0 for x in w):
                den = lcm(*[x.denominator for x in w])
                ints = [int(x * den) for x in w]
                g = gcd(*ints)
                return tuple(x // g for x in ints)
    return None


def make_algebra(field, variables, relations=(), inverted=(), allow_zero=False, name=None):
    alg = AlgebraPresentation(field, variables, relations, (), allow_zero=allow_zero, name=name)
    for g in inverted:
        alg = alg.localize(g, name=name)
    return alg


def ambient_polynomial_algebra(alg):
    """The polynomial ring over all variables of ``alg`` (inverse variables
    included), of which ``alg`` is a quotient."""
    return AlgebraPresentation(alg.field, alg.ring.vars, (), (), _hidden_ok=True)


def tensor_square(alg):
    """``A (x)_K A`` with variables ``v_1``, ``v_2`` and the two inclusions and
    the multiplication map data (full-ring images)."""
    r1 = [v + "_1" for v in alg.user_vars]
    r2 = [v + "_2" for v in alg.user_vars]
    ring = PolyRing(alg.field, tuple(r1 + r2) + tuple("_u%d" % j for j in range(2 * len(alg.aux_vars))))
    na = len(alg.aux_vars)

    def copy(p, side):
        imgs = []
        for v in alg.user_vars:
            imgs.append(ring.gen(v + ("_1" if side == 1 else "_2")))
        for j in range(na):
            imgs.append(ring.gen("_u%d" % (j if side == 1 else na + j)))
        return p.compose(imgs, ring)

    rels = [copy(r, 1) for r in alg.relations] + [copy(r, 2) for r in alg.relations]
    inv = [copy(g, 1) for g in alg.inverted] + [copy(g, 2) for g in alg.inverted]
    # inverted elements of copy 2 may reference aux vars of copy 2, which are
    # created in order; build via the base-aux mechanism
    out = AlgebraPresentation(alg.field, tuple(r1 + r2), rels, [], _aux_base=inv)
    return out, (lambda p: copy(p, 1)), (lambda p: copy(p, 2))
