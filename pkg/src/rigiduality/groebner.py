"""Buchberger's algorithm for ideals and submodules of free modules.

Vectors are sparse dicts ``{(component, exponents): coeff}``.  An ideal is
the rank-one case.  Module terms are ordered term-over-position, with an
optional block of *tag* components placed below every data component;
tagging row ``i`` with ``e_i`` turns one Groebner basis computation into
both a lifting oracle and a syzygy generator.
"""

from __future__ import annotations

from contextlib import contextmanager
from functools import lru_cache
from itertools import combinations

from .polyring import MonomialOrder, Polynomial, RingError, mono_div, mono_lcm, mono_mul


def _divides(a, b):
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


class _Elem:
    __slots__ = ("comp", "exps", "items", "vec")

    def __init__(self, lead, vec, key):
        self.comp, self.exps = lead
        self.vec = vec
        # descending order so reduction touches the lead first
        self.items = sorted(vec.items(), key=lambda t: key(t[0]), reverse=True)


class Engine:
    """Buchberger machinery for one ring and one module order."""

    def __init__(self, ring, tag_start=None):
        self.ring = ring
        self.field = ring.field
        self.tag_start = tag_start
        mkey = ring.key
        if tag_start is None:
            @lru_cache(maxsize=None)
            def tkey(t):
                return (mkey(t[1]), -t[0])
        else:
            @lru_cache(maxsize=None)
            def tkey(t):
                return (t[0] < tag_start, mkey(t[1]), -t[0])
        self.tkey = tkey

    # -- vector helpers -------------------------------------------------------
    def lead(self, v):
        return max(v, key=self.tkey)

    def monic(self, v):
        lt = self.lead(v)
        inv = 1 / v[lt]
        return {t: c * inv for t, c in v.items()}, lt

    @staticmethod
    def _sub_scaled(v, elem, shift, c):
        """In place: ``v -= c * x^shift * elem``."""
        for (gc, ge), gv in elem.items:
            nt = (gc, tuple(a + b for a, b in zip(ge, shift)))
            old = v.get(nt)
            if old is None:
                v[nt] = -c * gv
            else:
                old = old - c * gv
                if old:
                    v[nt] = old
                else:
                    del v[nt]

    def reduce(self, v, by_comp, full=True):
        """Normal form of ``v`` modulo the elements in ``by_comp``."""
        v = dict(v)
        out = {}
        tkey = self.tkey
        while v:
            t = max(v, key=tkey)
            comp, e = t
            for g in by_comp.get(comp, ()):
                if _divides(g.exps, e):
                    self._sub_scaled(v, g, mono_div(e, g.exps), v[t])
                    break
            else:
                if not full:
                    v.update(out)
                    return v
                out[t] = v.pop(t)
        return out

    # -- Buchberger -----------------------------------------------------------
    def groebner(self, gens, rank_one=False):
        key = self.tkey
        elems = []
        active = []
        pairs = []

        def by_comp_of(idx):
            d = {}
            for i in idx:
                d.setdefault(elems[i].comp, []).append(elems[i])
            return d

        def update(h):
            he, hc = elems[h].exps, elems[h].comp
            cands = [(g, mono_lcm(he, elems[g].exps)) for g in active if elems[g].comp == hc]
            kept = []
            for pos, (g, l) in enumerate(cands):
                if rank_one and not any(a and b for a, b in zip(he, elems[g].exps)):
                    kept.append((g, l, True))
                    continue
                if any(_divides(l2, l) for _, l2 in cands[pos + 1:]):
                    continue
                if any(_divides(l2, l) for _, l2, _ in kept):
                    continue
                kept.append((g, l, False))
            survivors = []
            for (i, j, l, c) in pairs:
                if (c == hc and _divides(he, l) and mono_lcm(elems[i].exps, he) != l
                        and mono_lcm(elems[j].exps, he) != l):
                    continue
                survivors.append((i, j, l, c))
            survivors.extend((g, h, l, hc) for g, l, coprime in kept if not coprime)
            pairs[:] = survivors
            active[:] = [g for g in active
                         if not (elems[g].comp == hc and _divides(he, elems[g].exps))]
            active.append(h)

        current = {}
        start = sorted((v for v in gens if v), key=lambda v: key(self.lead(v)))
        for v in start:
            r = self.reduce(v, current)
            if not r:
                continue
            r, lt = self.monic(r)
            elems.append(_Elem(lt, r, key))
            update(len(elems) - 1)
            current = by_comp_of(active)

        while pairs:
            best = min(range(len(pairs)),
                       key=lambda k: (sum(pairs[k][2]), key((pairs[k][3], pairs[k][2]))))
            i, j, l, c = pairs.pop(best)
            gi, gj = elems[i], elems[j]
            s = {}
            si, sj = mono_div(l, gi.exps), mono_div(l, gj.exps)
            for (cc, e), val in gi.items:
                s[(cc, mono_mul(e, si))] = val
            self._sub_scaled(s, gj, sj, 1)
            if not s:
                continue
            r = self.reduce(s, current)
            if not r:
                continue
            r, lt = self.monic(r)
            elems.append(_Elem(lt, r, key))
            update(len(elems) - 1)
            current = by_comp_of(active)

        return self._interreduce([elems[i] for i in active])

    def _interreduce(self, basis):
        basis = sorted(basis, key=lambda g: self.tkey((g.comp, g.exps)))
        out = []
        for k, g in enumerate(basis):
            others = {}
            for h in basis:
                if h is not g:
                    others.setdefault(h.comp, []).append(h)
            r = self.reduce(g.vec, others)
            r, lt = self.monic(r)
            out.append(_Elem(lt, r, self.tkey))
        out.sort(key=lambda g: self.tkey((g.comp, g.exps)), reverse=True)
        return out

    def index(self, basis):
        d = {}
        for g in basis:
            d.setdefault(g.comp, []).append(g)
        return d


# ---------------------------------------------------------------------------
# conversions
# ---------------------------------------------------------------------------

def row_to_vec(row, offset=0):
    v = {}
    for j, p in enumerate(row):
        for e, c in p.terms:
            v[(j + offset, e)] = c
    return v


def vec_to_row(v, ring, rank, offset=0):
    parts = [dict() for _ in range(rank)]
    for (j, e), c in v.items():
        k = j - offset
        if 0 <= k < rank:
            parts[k][e] = c
    return [ring.from_dict(p) for p in parts]


def poly_to_vec(f):
    return {(0, e): c for e, c in f.terms}


def vec_to_poly(v, ring):
    return ring.from_dict({e: c for (_, e), c in v.items()})


# ---------------------------------------------------------------------------
# ideals
# ---------------------------------------------------------------------------

class GroebnerBasis:
    """Reduced Groebner basis of an ideal."""

    def __init__(self, ring, polys, reduced=True):
        self.ring = ring
        self.order = ring.order
        self.polys = tuple(polys)
        self.reduced = reduced
        self._engine = Engine(ring)
        self._elems = [_Elem((0, p.lm()), poly_to_vec(p), self._engine.tkey) for p in self.polys]
        self._index = self._engine.index(self._elems)

    @property
    def vars(self):
        return self.ring.vars

    def __iter__(self):
        return iter(self.polys)

    def __len__(self):
        return len(self.polys)

    def __repr__(self):
        return "GroebnerBasis([%s])" % ", ".join(str(p) for p in self.polys)

    def is_unit_ideal(self):
        return any(p.is_constant() and p for p in self.polys)

    def leading_monomials(self):
        return [p.lm() for p in self.polys]

    def normal_form(self, f):
        src = f.ring
        g = self.ring.convert(f) if src != self.ring else f
        r = vec_to_poly(self._engine.reduce(poly_to_vec(g), self._index), self.ring)
        return src.convert(r) if src != self.ring else r

    def contains(self, f):
        return not self.normal_form(f)

    def is_homogeneous(self, weights=None):
        return all(p.is_homogeneous(weights) for p in self.polys)


# reduced bases emitted while an audit is active (see ``audit_bases``)
_AUDITS = []


@contextmanager
def audit_bases():
    """Collect every basis returned by :func:`buchberger` inside the block."""
    log = []
    _AUDITS.append(log)
    try:
        yield log
    finally:
        _AUDITS.remove(log)


def buchberger(generators, order=None, ring=None):
    """Reduced Groebner basis of the ideal generated by ``generators``."""
    if ring is None:
        if not generators:
            raise RingError("need a ring for an empty generator list")
        ring = generators[0].ring
    for g in generators:
        if g.ring.vars != ring.vars or g.ring.field != ring.field:
            raise RingError("generators live in different rings")
    if order is not None:
        if isinstance(order, str):
            order = MonomialOrder(order)
        ring = ring.with_order(order)
    gens = [ring.convert(g) if g.ring != ring else g for g in generators]
    eng = Engine(ring)
    basis = eng.groebner([poly_to_vec(g) for g in gens if g], rank_one=True)
    polys = [vec_to_poly(b.vec, ring) for b in basis]
    gb = GroebnerBasis(ring, polys)
    for log in _AUDITS:
        log.append(gb)
    return gb


def normal_form(f, gb):
    return gb.normal_form(f)


def s_polynomial(f, g):
    l = mono_lcm(f.lm(), g.lm())
    return (f.mul_term(mono_div(l, f.lm()), 1 / f.lc())
            - g.mul_term(mono_div(l, g.lm()), 1 / g.lc()))


def is_groebner(gb):
    """Buchberger criterion: every S-polynomial reduces to zero."""
    for f, g in combinations(gb.polys, 2):
        if gb.normal_form(s_polynomial(f, g)):
            return False
    return True


def is_reduced(gb):
    lms = gb.leading_monomials()
    for p in gb.polys:
        if p.lc() != 1:
            return False
        for q in gb.polys:
            if q is p:
                continue
            if any(_divides(q.lm(), e) for e, _ in p.terms):
                return False
    return True


def syzygy_matrix(gb):
    """Columns generating the syzygies of ``gb.polys`` (list of columns)."""
    mb = ModuleBasis(gb.ring, 1, [[p] for p in gb.polys], tags=True)
    return mb.syzygies()


# ---------------------------------------------------------------------------
# dimension and Hilbert series
# ---------------------------------------------------------------------------

def independent_set_dimension(monomials, nvars):
    """Largest set of variables containing the support of no monomial."""
    supports = [frozenset(i for i, k in enumerate(e) if k) for e in monomials]
    if any(not s for s in supports):
        return -1
    for size in range(nvars, -1, -1):
        for subset in combinations(range(nvars), size):
            sset = frozenset(subset)
            if not any(s <= sset for s in supports):
                return size
    return 0


def krull_dimension(gb):
    if gb.is_unit_ideal():
        return -1
    return independent_set_dimension(gb.leading_monomials(), gb.ring.nvars)


def _tpoly_mul(a, b):
    out = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out.get(i + j, 0) + x * y
    return {k: v for k, v in out.items() if v}


def _tpoly_sub(a, b):
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) - v
    return {k: v for k, v in out.items() if v}


def _minimalize(monos):
    monos = sorted(set(monos), key=sum)
    out = []
    for m in monos:
        if not any(_divides(o, m) for o in out):
            out.append(m)
    return out


def hilbert_numerator(monomials, weights):
    """Numerator ``N(T)`` with ``HS(R/J) = N(T) / prod(1 - T^w_i)``."""
    gens = _minimalize(monomials)

    def wdeg(m):
        return sum(a * b for a, b in zip(weights, m))

    def rec(gens):
        if not gens:
            return {0: 1}
        if all(not any(a and b for a, b in zip(g, h)) for g, h in combinations(gens, 2)):
            out = {0: 1}
            for g in gens:
                out = _tpoly_mul(out, {0: 1, wdeg(g): -1})
            return out
        pivot = gens[-1]
        rest = gens[:-1]
        colon = _minimalize([tuple(max(a - b, 0) for a, b in zip(g, pivot)) for g in rest])
        return _tpoly_sub(rec(rest), _tpoly_mul({wdeg(pivot): 1}, rec(colon)))

    return rec(gens)


class HilbertSeries:
    """``numerator(T) / prod_i (1 - T^{w_i})`` with integer coefficients."""

    def __init__(self, numerator, weights):
        self.numerator = {k: v for k, v in numerator.items() if v}
        self.weights = tuple(weights)

    @property
    def nvars(self):
        return len(self.weights)

    def coefficients(self):
        if not self.numerator:
            return []
        return [self.numerator.get(k, 0) for k in range(max(self.numerator) + 1)]

    def reduced(self):
        """Cancel ``(1 - T)`` factors (standard grading only).

        Returns ``(numerator coefficient list, denominator exponent)``.
        """
        if any(w != 1 for w in self.weights):
            raise RingError("reduced form only for the standard grading")
        num = self.coefficients()
        k = self.nvars
        while k > 0 and num and sum(num) == 0:
            # synthetic division by (1 - T)
            q, acc = [], 0
            for c in num[:-1]:
                acc += c
                q.append(acc)
            num = q
            k -= 1
        while num and num[-1] == 0:
            num.pop()
        return num, k

    def dimension(self):
        if not self.numerator:
            return -1
        if all(w == 1 for w in self.weights):
            return self.reduced()[1]
        # order of the pole at T = 1 after cancelling cyclotomic-free (1 - T) part
        num = self.coefficients()
        k = self.nvars
        from fractions import Fraction
        # divide each (1 - T^w) = (1 - T)(1 + ... + T^{w-1}); only (1-T) matters at T=1
        poly = [Fraction(c) for c in num]
        while k > 0 and poly and sum(poly) == 0:
            q, acc = [], Fraction(0)
            for c in poly[:-1]:
                acc += c
                q.append(acc)
            poly = q
            k -= 1
        return k

    def __eq__(self, other):
        return (isinstance(other, HilbertSeries) and self.weights == other.weights
                and self.numerator == other.numerator)

    def __hash__(self):
        return hash((self.weights, tuple(sorted(self.numerator.items()))))

    def shifted_equal(self, other):
        """Equality up to multiplication by a power of ``T``."""
        if self.weights != other.weights:
            return False
        if not self.numerator or not other.numerator:
            return self.numerator == other.numerator
        a, b = min(self.numerator), min(other.numerator)
        return ({k - a: v for k, v in self.numerator.items()}
                == {k - b: v for k, v in other.numerator.items()})

    def format(self):
        def tp(d):
            if not d:
                return "0"
            parts = []
            for k in sorted(d):
                v = d[k]
                mono = "" if k == 0 else ("T" if k == 1 else "T^%d" % k)
                if mono:
                    coef = "" if abs(v) == 1 else "%d*" % abs(v)
                    body = coef + mono
                else:
                    body = str(abs(v))
                parts.append(("-" if v < 0 else "+", body))
            s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
            for sign, body in parts[1:]:
                s += " %s %s" % (sign, body)
            return s
        den = []
        from collections import Counter
        for w, m in sorted(Counter(self.weights).items()):
            base = "(1 - T)" if w == 1 else "(1 - T^%d)" % w
            den.append(base if m == 1 else "%s^%d" % (base, m))
        return "(%s) / %s" % (tp(self.numerator), "*".join(den) if den else "1")

    def __repr__(self):
        return "HilbertSeries(%s)" % self.format()


def hilbert_series(gb, weights=None):
    """Hilbert series of ``R/I`` for a homogeneous ideal ``I``."""
    weights = tuple(weights) if weights else (1,) * gb.ring.nvars
    if not gb.is_homogeneous(weights):
        raise RingError("Hilbert series needs a homogeneous ideal")
    if gb.is_unit_ideal():
        return HilbertSeries({}, weights)
    return HilbertSeries(hilbert_numerator(gb.leading_monomials(), weights), weights)


# ---------------------------------------------------------------------------
# submodules
# ---------------------------------------------------------------------------

class ModuleBasis:
    """Groebner basis of the submodule of ``R^rank`` spanned by ``rows``
    plus ``ideal * R^rank``.

    With ``tags=True`` row ``i`` carries the tag ``e_i`` so the basis also
    yields lifts (coefficients expressing a member in terms of ``rows``)
    and generators of the syzygy module of ``rows`` modulo ``ideal``.
    """

    def __init__(self, ring, rank, rows, ideal=(), tags=False):
        self.ring = ring
        self.rank = rank
        self.rows = [list(r) for r in rows]
        self.ideal = tuple(ideal)
        self.tags = tags
        self.nrows = len(self.rows)
        self.engine = Engine(ring, tag_start=rank if tags else None)
        gens = []
        for i, r in enumerate(self.rows):
            if len(r) != rank:
                raise RingError("row of length %d in a rank-%d module" % (len(r), rank))
            v = row_to_vec(r)
            if tags:
                v[(rank + i, ring._zero_exps)] = ring.field(1)
            gens.append(v)
        for g in self.ideal:
            for j in range(rank + (self.nrows if tags else 0)):
                gens.append({(j, e): c for e, c in g.terms})
        self.basis = self.engine.groebner(gens, rank_one=(rank == 1 and not tags))
        self.index = self.engine.index(self.basis)
        self._ideal_gb = GroebnerBasis(ring, self.ideal) if self.ideal else None

    def _nf(self, p):
        return self._ideal_gb.normal_form(p) if self._ideal_gb is not None else p

    def _data_vec(self, row):
        return row_to_vec(row)

    def reduce(self, row):
        r = self.engine.reduce(self._data_vec(row), self.index)
        return vec_to_row(r, self.ring, self.rank)

    def contains(self, row):
        r = self.engine.reduce(self._data_vec(row), self.index)
        return not any(j < self.rank for (j, _) in r)

    def is_everything(self):
        zero = self.ring._zero_exps
        comps = {g.comp for g in self.basis if g.exps == zero and g.comp < self.rank}
        return len(comps) == self.rank

    def leading_terms(self):
        return [(g.comp, g.exps) for g in self.basis if g.comp < self.rank]

    def lift(self, row):
        """Coefficients ``c`` with ``sum c_i rows_i == row`` modulo the ideal."""
        if not self.tags:
            raise RingError("lift needs a tagged basis")
        r = self.engine.reduce(self._data_vec(row), self.index)
        if any(j < self.rank for (j, _) in r):
            return None
        coeffs = vec_to_row(r, self.ring, self.nrows, offset=self.rank)
        return [self._nf(-c) for c in coeffs]

    def syzygies(self):
        if not self.tags:
            raise RingError("syzygies need a tagged basis")
        out = []
        for g in self.basis:
            if g.comp >= self.rank:
                row = [self._nf(p) for p in
                       vec_to_row(g.vec, self.ring, self.nrows, offset=self.rank)]
                if any(row):
                    out.append(row)
        return out
