"""Exact multivariate polynomials over QQ or a prime field.

Polynomials are immutable.  Terms are kept as a tuple of
``(exponents, coefficient)`` pairs sorted strictly descending in the
ring's monomial order, so the leading term is ``terms[0]``.
"""

from __future__ import annotations

from functools import lru_cache

from gmpy2 import mpq


class RingError(ValueError):
    """Raised on mismatched rings, fields or malformed polynomial input."""


# ---------------------------------------------------------------------------
# coefficient fields
# ---------------------------------------------------------------------------

class Fp:
    """Residue modulo an odd prime ``p``."""

    __slots__ = ("v", "p")

    def __init__(self, v, p):
        self.v = v % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, Fp):
            if other.p != self.p:
                raise RingError("characteristic mismatch: %d vs %d" % (self.p, other.p))
            return other.v
        if isinstance(other, int):
            return other % self.p
        if isinstance(other, type(mpq())):
            return int(other.numerator) * pow(int(other.denominator), -1, self.p) % self.p
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else Fp(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else Fp(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else Fp(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else Fp(self.v * o, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o == 0:
            raise ZeroDivisionError("division by zero in GF(%d)" % self.p)
        return Fp(self.v * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp(o, self.p) / self

    def __neg__(self):
        return Fp(-self.v, self.p)

    def __pow__(self, k):
        if k < 0:
            return Fp(pow(self.v, -1, self.p), self.p) ** (-k)
        return Fp(pow(self.v, k, self.p), self.p)

    def __eq__(self, other):
        o = self._coerce(other)
        return False if o is NotImplemented else self.v == o

    def __hash__(self):
        return hash(self.v)

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return "Fp(%d, %d)" % (self.v, self.p)

    def __str__(self):
        # symmetric representative reads better in printed polynomials
        v = self.v if self.v <= self.p // 2 else self.v - self.p
        return str(v)


class Field:
    characteristic = 0
    name = "QQ"

    def __call__(self, x):
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, Field) and self.characteristic == other.characteristic

    def __hash__(self):
        return hash(self.characteristic)

    def __repr__(self):
        return self.name


class RationalField(Field):
    characteristic = 0
    name = "QQ"

    def __call__(self, x):
        if isinstance(x, Fp):
            raise RingError("cannot coerce a GF(%d) element into QQ" % x.p)
        return mpq(x)

    def parse_literal(self, num, den=1):
        return mpq(num, den)


def _is_prime(p):
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    i = 3
    while i * i <= p:
        if p % i == 0:
            return False
        i += 2
    return True


class PrimeField(Field):
    def __init__(self, p):
        if not (_is_prime(p) and p > 2 and p < 2 ** 31):
            raise RingError("Fp needs an odd prime below 2^31, got %r" % (p,))
        self.characteristic = p
        self.name = "Fp(%d)" % p

    def __call__(self, x):
        if isinstance(x, Fp):
            if x.p != self.characteristic:
                raise RingError("characteristic mismatch")
            return x
        if isinstance(x, int):
            return Fp(x, self.characteristic)
        x = mpq(x)
        den = int(x.denominator) % self.characteristic
        if den == 0:
            raise RingError("denominator divisible by the characteristic")
        return Fp(int(x.numerator) * pow(den, -1, self.characteristic), self.characteristic)


QQ = RationalField()


def field_from_name(name):
    if name == "QQ":
        return QQ
    if name.startswith("Fp(") and name.endswith(")"):
        return PrimeField(int(name[3:-1]))
    raise RingError("unknown field %r" % name)


# ---------------------------------------------------------------------------
# monomials and orders
# ---------------------------------------------------------------------------

class Monomial:
    """Exponent vector with cached total degree."""

    __slots__ = ("exps", "degree")

    def __init__(self, exps):
        self.exps = tuple(int(e) for e in exps)
        if any(e < 0 for e in self.exps):
            raise RingError("negative exponent in monomial")
        self.degree = sum(self.exps)

    def __eq__(self, other):
        return isinstance(other, Monomial) and self.exps == other.exps

    def __hash__(self):
        return hash(self.exps)

    def __repr__(self):
        return "Monomial(%r)" % (self.exps,)

    def format(self, names):
        return _format_monomial(self.exps, names) or "1"


def mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a, b):
    return tuple(x - y for x, y in zip(a, b))


def mono_divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def mono_lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


def _grevlex_key(exps):
    return (sum(exps), tuple(-e for e in reversed(exps)))


class MonomialOrder:
    """A monomial order given by a sort key (larger key = larger monomial).

    kinds: ``grevlex``, ``lex``, ``elim`` (two grevlex blocks, the first
    ``split`` variables dominate) and ``wgrevlex`` (weighted degree first).
    """

    KINDS = ("grevlex", "lex", "elim", "wgrevlex")

    def __init__(self, kind="grevlex", split=None, weights=None):
        if kind not in self.KINDS:
            raise RingError("unknown monomial order %r" % kind)
        if kind == "elim" and split is None:
            raise RingError("elimination order needs a split index")
        if kind == "wgrevlex" and not weights:
            raise RingError("weighted order needs weights")
        self.kind = kind
        self.split = split
        self.weights = tuple(weights) if weights else None
        self.key = self._make_key()

    def _make_key(self):
        if self.kind == "lex":
            return lambda e: e
        if self.kind == "grevlex":
            return lru_cache(maxsize=None)(_grevlex_key)
        if self.kind == "elim":
            k = self.split

            @lru_cache(maxsize=None)
            def key(e):
                return (_grevlex_key(e[:k]), _grevlex_key(e[k:]))
            return key
        w = self.weights

        @lru_cache(maxsize=None)
        def wkey(e):
            return (sum(a * b for a, b in zip(w, e)), tuple(-x for x in reversed(e)))
        return wkey

    def __eq__(self, other):
        return (isinstance(other, MonomialOrder) and self.kind == other.kind
                and self.split == other.split and self.weights == other.weights)

    def __hash__(self):
        return hash((self.kind, self.split, self.weights))

    def __repr__(self):
        if self.kind == "elim":
            return "elim(%d)" % self.split
        if self.kind == "wgrevlex":
            return "wgrevlex%r" % (self.weights,)
        return self.kind


# ---------------------------------------------------------------------------
# rings
# ---------------------------------------------------------------------------

class PolyRing:
    """``field[vars]`` with a monomial order."""

    def __init__(self, field, variables, order=None):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise RingError("duplicate variable names in %r" % (variables,))
        self.field = field
        self.vars = variables
        self.nvars = len(variables)
        if order is None or isinstance(order, str):
            order = MonomialOrder(order or "grevlex")
        self.order = order
        self.key = order.key
        self._zero_exps = (0,) * self.nvars
        self.zero = Polynomial(self, ())
        self.one = Polynomial(self, ((self._zero_exps, field(1)),))

    def with_order(self, order):
        return PolyRing(self.field, self.vars, order)

    def __eq__(self, other):
        return (isinstance(other, PolyRing) and self.field == other.field
                and self.vars == other.vars and self.order == other.order)

    def __hash__(self):
        return hash((self.field, self.vars, self.order))

    def __repr__(self):
        return "%r[%s]" % (self.field, ",".join(self.vars))

    def index(self, name):
        try:
            return self.vars.index(name)
        except ValueError:
            raise RingError("unknown variable %r in ring %r" % (name, self)) from None

    def gen(self, i):
        if isinstance(i, str):
            i = self.index(i)
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, ((tuple(e), self.field(1)),))

    def gens(self):
        return [self.gen(i) for i in range(self.nvars)]

    def monomial(self, exps, coeff=1):
        c = self.field(coeff)
        if not c:
            return self.zero
        return Polynomial(self, ((tuple(exps), c),))

    def from_dict(self, d):
        """Build a polynomial from ``{exps: coeff}``, dropping zeros."""
        key = self.key
        items = [(e, c) for e, c in d.items() if c]
        items.sort(key=lambda t: key(t[0]), reverse=True)
        return Polynomial(self, tuple(items))

    def __call__(self, x):
        if isinstance(x, Polynomial):
            if x.ring == self:
                return x
            return self.convert(x)
        if isinstance(x, str):
            return self.parse(x)
        c = self.field(x)
        if not c:
            return self.zero
        return Polynomial(self, ((self._zero_exps, c),))

    def convert(self, f):
        """Move ``f`` into this ring, matching variables by name."""
        if f.ring.field != self.field:
            raise RingError("characteristic mismatch")
        idx = [self.index(v) for v in f.ring.vars]
        d = {}
        for e, c in f.terms:
            ne = [0] * self.nvars
            for i, k in zip(idx, e):
                ne[i] = k
            d[tuple(ne)] = c
        return self.from_dict(d)

    def parse(self, text):
        from .syntax import parse_poly_expr, eval_expr
        return eval_expr(parse_poly_expr(text), self)


def _format_monomial(exps, names):
    parts = []
    for n, e in zip(names, exps):
        if not e:
            continue
        if callable(n):
            parts.append(n(e))
        elif e == 1:
            parts.append(n)
        else:
            parts.append("%s^%d" % (n, e))
    return "*".join(parts)


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------

class Polynomial:
    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # -- basic access -------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def lt(self):
        return self.terms[0]

    def lm(self):
        return self.terms[0][0]

    def lc(self):
        return self.terms[0][1]

    def degree(self):
        return max((sum(e) for e, _ in self.terms), default=-1)

    def weighted_degree(self, weights):
        return max((sum(a * b for a, b in zip(weights, e)) for e, _ in self.terms), default=-1)

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and not any(self.terms[0][0]))

    def constant_coeff(self):
        z = self.ring._zero_exps
        for e, c in self.terms:
            if e == z:
                return c
        return self.ring.field(0)

    def is_homogeneous(self, weights=None):
        if not self.terms:
            return True
        w = weights or (1,) * self.ring.nvars
        degs = {sum(a * b for a, b in zip(w, e)) for e, _ in self.terms}
        return len(degs) == 1

    def variables_used(self):
        used = set()
        for e, _ in self.terms:
            used.update(i for i, k in enumerate(e) if k)
        return used

    def to_dict(self):
        return dict(self.terms)

    def monic(self):
        if not self.terms:
            return self
        return self.scale(1 / self.lc())

    # -- arithmetic ---------------------------------------------------------
    def _check(self, other):
        if isinstance(other, Polynomial):
            if other.ring is not self.ring and other.ring != self.ring:
                if other.ring.field != self.ring.field:
                    raise RingError("characteristic mismatch")
                raise RingError("variable-list mismatch: %r vs %r" % (self.ring, other.ring))
            return other
        return self.ring(other)

    def __add__(self, other):
        other = self._check(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        d = dict(self.terms)
        for e, c in other.terms:
            v = d.get(e)
            if v is None:
                d[e] = c
            else:
                v = v + c
                if v:
                    d[e] = v
                else:
                    del d[e]
        return self.ring.from_dict(d)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) + (-self)

    def scale(self, c):
        c = self.ring.field(c)
        if not c:
            return self.ring.zero
        return Polynomial(self.ring, tuple((e, v * c) for e, v in self.terms))

    def mul_term(self, exps, c):
        """Multiply by the single term ``c * x^exps`` (order is preserved)."""
        if not c:
            return self.ring.zero
        return Polynomial(self.ring, tuple((mono_mul(e, exps), v * c) for e, v in self.terms))

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        other = self._check(other)
        if not self.terms or not other.terms:
            return self.ring.zero
        if len(other.terms) == 1:
            e, c = other.terms[0]
            return self.mul_term(e, c)
        if len(self.terms) == 1:
            e, c = self.terms[0]
            return other.mul_term(e, c)
        d = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = tuple(x + y for x, y in zip(e1, e2))
                v = d.get(e)
                d[e] = c1 * c2 if v is None else v + c1 * c2
        return self.ring.from_dict(d)

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, c):
        if isinstance(c, Polynomial):
            if not c.is_constant() or not c:
                raise RingError("polynomial division needs poly_divmod")
            c = c.lc()
        return self.scale(1 / self.ring.field(c))

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise RingError("exponent must be a non-negative integer")
        result = self.ring.one
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        try:
            return self == self.ring(other)
        except (RingError, TypeError, ValueError):
            return False

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.terms)
        return self._hash

    # -- calculus and substitution -------------------------------------------
    def diff(self, i):
        if isinstance(i, str):
            i = self.ring.index(i)
        if not 0 <= i < self.ring.nvars:
            raise RingError("variable index %r out of range" % (i,))
        d = {}
        for e, c in self.terms:
            k = e[i]
            if k:
                ne = e[:i] + (k - 1,) + e[i + 1:]
                v = c * k
                if v:
                    d[ne] = v
        return self.ring.from_dict(d)

    def compose(self, images, target=None):
        """Substitute ``images[i]`` for variable ``i``."""
        target = target or (images[0].ring if images else self.ring)
        if len(images) != self.ring.nvars:
            raise RingError("need one image per variable")
        powers = [dict() for _ in images]
        result = {}
        for e, c in self.terms:
            term = target(c)
            for i, k in enumerate(e):
                if k:
                    p = powers[i].get(k)
                    if p is None:
                        p = images[i] ** k
                        powers[i][k] = p
                    term = term * p
            for te, tc in term.terms:
                v = result.get(te)
                result[te] = tc if v is None else v + tc
        return target.from_dict(result)

    def evaluate(self, point):
        total = self.ring.field(0)
        for e, c in self.terms:
            t = c
            for x, k in zip(point, e):
                if k:
                    t = t * self.ring.field(x) ** k
            total = total + t
        return total

    # -- printing -------------------------------------------------------------
    def format(self, names=None):
        names = names or self.ring.vars
        if not self.terms:
            return "0"
        out = []
        for e, c in self.terms:
            mono = _format_monomial(e, names)
            s = str(c)
            neg = s.startswith("-")
            if neg:
                s = s[1:]
            if mono:
                body = mono if s == "1" else "%s*%s" % (s, mono)
            else:
                body = s
            if not out:
                out.append("-" + body if neg else body)
            else:
                out.append(("- " if neg else "+ ") + body)
        return " ".join(out)

    def __str__(self):
        return self.format()

    def __repr__(self):
        return "Polynomial(%s)" % self.format()


def poly_arith(op, f, g=None):
    """Dispatch ``add|sub|mul|neg|scalar_mul`` on polynomials."""
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    if op == "neg":
        return -f
    if op == "scalar_mul":
        return f.scale(g)
    raise RingError("unknown operation %r" % op)


def partial_derivative(f, var_index):
    return f.diff(var_index)


def poly_divmod(f, divisors, order=None):
    """Multivariate division of ``f`` by ``divisors``.

    Returns ``(quotients, remainder)`` with ``f = sum q_i g_i + r`` and no
    term of ``r`` divisible by a leading term of a divisor.
    """
    ring = f.ring
    if order is not None and order != ring.order:
        ring = ring.with_order(order)
        f = ring.convert(f)
        divisors = [ring.convert(g) for g in divisors]
    if any(not g for g in divisors):
        raise RingError("zero polynomial in divisor list")
    for g in divisors:
        f._check(g)
    key = ring.key
    qs = [dict() for _ in divisors]
    rem = {}
    p = dict(f.terms)
    lts = [(g.lm(), g.lc()) for g in divisors]
    while p:
        e = max(p, key=key)
        c = p[e]
        for i, (ge, gc) in enumerate(lts):
            if mono_divides(ge, e):
                qe = mono_div(e, ge)
                qc = c / gc
                qs[i][qe] = qs[i].get(qe, 0) + qc
                for te, tc in divisors[i].terms:
                    ne = mono_mul(te, qe)
                    v = p.get(ne, 0) - qc * tc
                    if v:
                        p[ne] = v
                    else:
                        p.pop(ne, None)
                break
        else:
            rem[e] = c
            del p[e]
    return [ring.from_dict(q) for q in qs], ring.from_dict(rem)
