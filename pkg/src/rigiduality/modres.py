"""Finitely presented modules over presented algebras.

A module is always a cokernel ``A^g / (rows of P)``; relation rows are row
vectors and maps act on the right, so a free complex has differentials
``d_k`` of shape ``r_k x r_{k-1}`` with ``d_{k+1} * d_k == 0``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations

from .groebner import HilbertSeries, ModuleBasis, hilbert_numerator, independent_set_dimension
from .polyring import RingError
from .linalg import rank as field_rank


class ModuleError(RingError):
    pass


def _nonzero(row):
    return any(not p.is_zero() for p in row)


def mat_mul(alg, a, b, ncols=None):
    """``a * b`` with entries reduced in ``alg``."""
    zero = alg.ring.zero
    if ncols is None:
        ncols = len(b[0]) if b else 0
    out = []
    for row in a:
        new = []
        for j in range(ncols):
            acc = zero
            for k, x in enumerate(row):
                if not x.is_zero():
                    y = b[k][j]
                    if not y.is_zero():
                        acc = acc + x * y
            new.append(alg.nf(acc))
        out.append(new)
    return out


def identity_matrix(alg, n):
    return [[alg.ring.one if i == j else alg.ring.zero for j in range(n)] for i in range(n)]


def format_matrix(alg, rows):
    return [[alg.format(p) for p in r] for r in rows]


class FPModule:
    """``A^ngens / (rows)`` over the algebra ``A``."""

    def __init__(self, algebra, rows, ngens):
        self.algebra = algebra
        self.ngens = ngens
        clean = []
        for r in rows:
            if len(r) != ngens:
                raise ModuleError("relation of length %d for %d generators" % (len(r), ngens))
            r = [algebra.element(p) for p in r]
            if _nonzero(r):
                clean.append(r)
        self.rows = clean
        self._mb = None
        self._grading = False

    # -- constructors ----------------------------------------------------------
    @classmethod
    def free(cls, algebra, rank=1):
        return cls(algebra, [], rank)

    @classmethod
    def zero(cls, algebra):
        return cls(algebra, [], 0)

    @classmethod
    def cyclic(cls, algebra, ideal):
        """``A / (ideal)``."""
        return cls(algebra, [[algebra.element(f)] for f in ideal], 1)

    @classmethod
    def from_strings(cls, algebra, rows, ngens=None):
        rows = [[algebra.element(p) for p in r] for r in rows]
        if ngens is None:
            ngens = len(rows[0]) if rows else 1
        return cls(algebra, rows, ngens)

    # -- Groebner data -----------------------------------------------------------
    def basis(self):
        if self._mb is None:
            self._mb = ModuleBasis(self.algebra.ring, self.ngens, self.rows,
                                   ideal=self.algebra.gb.polys)
        return self._mb

    def is_zero(self):
        return self.ngens == 0 or self.basis().is_everything()

    def reduce(self, vec):
        """Normal form of an element (coordinate row) of the module."""
        if self.ngens == 0:
            return []
        return self.basis().reduce([self.algebra.element(p) for p in vec])

    def is_zero_element(self, vec):
        return self.ngens == 0 or self.basis().contains([self.algebra.element(p) for p in vec])

    def generated_by(self, vecs):
        """True if the elements ``vecs`` generate the module."""
        if self.ngens == 0:
            return True
        mb = ModuleBasis(self.algebra.ring, self.ngens, self.rows + [list(v) for v in vecs],
                         ideal=self.algebra.gb.polys)
        return mb.is_everything()

    # -- invariants ----------------------------------------------------------------
    def _initial_by_component(self):
        comps = {j: [] for j in range(self.ngens)}
        for j, e in self.basis().leading_terms():
            comps[j].append(e)
        return comps

    def krull_dim(self):
        """Dimension of the support (−1 for the zero module)."""
        if self.is_zero():
            return -1
        n = self.algebra.ring.nvars
        return max(independent_set_dimension(m, n) for m in self._initial_by_component().values())

    def grading(self):
        """Generator degrees making the presentation homogeneous, or None.

        Degrees are normalized so the smallest is 0.
        """
        if self._grading is not False:
            return self._grading
        self._grading = _find_module_grading(self)
        return self._grading

    def hilbert_series(self, degrees=None):
        w = self.algebra.weights()
        degs = degrees if degrees is not None else self.grading()
        if w is None or degs is None:
            raise ModuleError("Hilbert series needs a graded module over a graded algebra")
        ring_w = tuple(w)
        num = {}
        for j, monos in self._initial_by_component().items():
            part = hilbert_numerator(monos, ring_w) if monos else {0: 1}
            if any(not any(e) for e in monos):
                continue
            for k, v in part.items():
                num[k + degs[j]] = num.get(k + degs[j], 0) + v
        return HilbertSeries(num, ring_w)

    def prune(self, units=None, prefer=()):
        return prune_module(self, units=units, prefer=prefer)

    def minimal_generators(self):
        return minimal_betti(self, length=0)[0]

    # -- display ---------------------------------------------------------------
    def describe(self):
        alg = self.algebra
        if self.ngens == 0:
            return "0"
        base = repr(alg) if self.ngens == 1 else "%r^%d" % (alg, self.ngens)
        if not self.rows:
            return base
        rels = "; ".join("[" + ", ".join(alg.format(p) for p in r) + "]" for r in self.rows)
        return "coker(%s -> %s | %s)" % (len(self.rows), base, rels)

    def __repr__(self):
        return "FPModule(%s)" % self.describe()

    def to_json(self):
        return {"generators": self.ngens, "relations": format_matrix(self.algebra, self.rows),
                "algebra": self.algebra.describe()}


def _find_module_grading(M):
    w = M.algebra.weights()
    if w is None:
        return None
    if M.ngens == 0:
        return []
    wdeg = lambda e: sum(a * b for a, b in zip(w, e))
    deg = [None] * M.ngens
    rowdeg = [None] * len(M.rows)
    # each entry P[r][c] must be homogeneous with deg(P[r][c]) + deg(e_c) = rowdeg[r]
    entry_deg = {}
    for r, row in enumerate(M.rows):
        for c, p in enumerate(row):
            if p.is_zero():
                continue
            ds = {wdeg(e) for e, _ in p.terms}
            if len(ds) != 1:
                return None
            entry_deg[(r, c)] = ds.pop()
    for start in range(M.ngens):
        if deg[start] is not None:
            continue
        deg[start] = 0
        stack = [("g", start)]
        while stack:
            kind, i = stack.pop()
            if kind == "g":
                for r in range(len(M.rows)):
                    if (r, i) in entry_deg:
                        d = entry_deg[(r, i)] + deg[i]
                        if rowdeg[r] is None:
                            rowdeg[r] = d
                            stack.append(("r", r))
                        elif rowdeg[r] != d:
                            return None
            else:
                for c in range(M.ngens):
                    if (i, c) in entry_deg:
                        d = rowdeg[i] - entry_deg[(i, c)]
                        if deg[c] is None:
                            deg[c] = d
                            stack.append(("g", c))
                        elif deg[c] != d:
                            return None
    low = min(deg)
    return [d - low for d in deg]


# ---------------------------------------------------------------------------
# pruning
# ---------------------------------------------------------------------------

@dataclass
class Pruned:
    """A presentation with generators removed.

    ``old_to_new[o]`` expresses old generator ``o`` in the new generators;
    new generator ``j`` is old generator ``kept[j]``.
    """
    module: FPModule
    old_to_new: list
    kept: list


def _pivot_inverse(alg, p, units):
    if p.is_zero():
        return None
    if p.is_constant():
        return alg.ring(1 / p.lc())
    if units:
        return alg.inverse(p)
    return None


def prune_module(M, units=None, prefer=()):
    """Remove generators that a relation with a unit coefficient expresses
    in terms of the others.  Columns listed in ``prefer`` go first."""
    alg = M.algebra
    if units is None:
        units = bool(alg.aux_vars)
    g = M.ngens
    rows = [list(r) for r in M.rows]
    cols = list(range(g))
    T = identity_matrix(alg, g)
    prefer = list(prefer)
    unit_miss = set()
    while True:
        pick = None
        # constants first, sparse rows first
        order_rows = sorted(range(len(rows)), key=lambda r: sum(1 for p in rows[r] if p))
        col_order = sorted(range(len(cols)),
                           key=lambda c: (0 if cols[c] in prefer else 1,
                                          prefer.index(cols[c]) if cols[c] in prefer else 0))
        for c in col_order:
            for r in order_rows:
                p = rows[r][c]
                if p and p.is_constant():
                    pick = (r, c, alg.ring(1 / p.lc()))
                    break
            if pick:
                break
        if pick is None and units:
            for c in col_order:
                for r in order_rows:
                    p = rows[r][c]
                    if p and p not in unit_miss:
                        inv = alg.inverse(p)
                        if inv is not None:
                            pick = (r, c, inv)
                            break
                        unit_miss.add(p)
                if pick:
                    break
        if pick is None:
            break
        r, c, inv = pick
        prow = rows[r]
        new_rows = []
        for s, row in enumerate(rows):
            if s == r:
                continue
            a = row[c]
            if a:
                f = alg.nf(a * inv)
                row = [alg.nf(x - f * y) for x, y in zip(row, prow)]
            row = row[:c] + row[c + 1:]
            if _nonzero(row):
                new_rows.append(row)
        sub = [alg.nf(-inv * prow[j]) for j in range(len(cols)) if j != c]
        for o in range(g):
            t = T[o]
            a = t[c]
            rest = t[:c] + t[c + 1:]
            if a:
                rest = [alg.nf(x + a * y) for x, y in zip(rest, sub)]
            T[o] = rest
        cols.pop(c)
        rows = new_rows
    return Pruned(FPModule(alg, rows, len(cols)), T, cols)


# ---------------------------------------------------------------------------
# syzygies, complexes and resolutions
# ---------------------------------------------------------------------------

def syzygies(alg, rows, rank):
    """Generators of ``{c : sum c_i rows_i == 0}`` over ``alg``."""
    if not rows:
        return []
    if rank == 0:
        return identity_matrix(alg, len(rows))
    mb = ModuleBasis(alg.ring, rank, rows, ideal=alg.gb.polys, tags=True)
    return [[alg.nf(p) for p in s] for s in mb.syzygies()]


@dataclass
class FreeComplex:
    """``... -> F_k -> F_{k-1} -> ... -> F_0`` with ``d[k]`` of shape
    ``ranks[k] x ranks[k-1]`` (``d[0]`` unused)."""
    algebra: object
    ranks: list
    d: list
    offset: int = 0
    complete: bool = False  # True if F_{len} -> F_{len-1} is the last nonzero map
    module: object = None

    def __post_init__(self):
        self.check()

    @property
    def length(self):
        return len(self.ranks) - 1

    def check(self):
        alg = self.algebra
        for k in range(1, len(self.d)):
            D = self.d[k]
            if len(D) != self.ranks[k] or any(len(r) != self.ranks[k - 1] for r in D):
                raise ModuleError("differential %d has the wrong shape" % k)
        for k in range(2, len(self.d)):
            prod = mat_mul(alg, self.d[k], self.d[k - 1], self.ranks[k - 2])
            if any(_nonzero(r) for r in prod):
                raise ModuleError("d o d != 0 at degree %d" % k)

    def betti(self):
        return list(self.ranks)

    def to_json(self):
        alg = self.algebra
        return {"ranks": self.ranks,
                "differentials": [format_matrix(alg, D) for D in self.d[1:]],
                "complete": self.complete}


def _prune_step(alg, D, prev):
    """Split off constant pivots of ``D = d_{k+1}``; ``prev = d_k`` loses rows."""
    D = [list(r) for r in D]
    prev = [list(r) for r in prev]
    while True:
        pick = None
        for r, row in enumerate(D):
            for c, p in enumerate(row):
                if p and p.is_constant():
                    pick = (r, c)
                    break
            if pick:
                break
        if pick is None:
            break
        r, c = pick
        inv = 1 / D[r][c].lc()
        prow = D[r]
        out = []
        for s, row in enumerate(D):
            if s == r:
                continue
            a = row[c]
            if a:
                f = a.scale(inv)
                row = [alg.nf(x - f * y) for x, y in zip(row, prow)]
            out.append(row[:c] + row[c + 1:])
        D = [row for row in out if _nonzero(row)]
        prev.pop(c)
    return D, prev


def free_resolution(M, length):
    """Free resolution of ``M`` through ``F_length`` (``F_0 = A^ngens``).

    Higher differentials are pruned of constant entries, so over a graded
    algebra with a graded module the result is minimal from ``F_1`` on.
    """
    if length < 0:
        raise ModuleError("length must be non-negative")
    alg = M.algebra
    ranks = [M.ngens]
    d = [None]
    complete = not M.rows
    if length >= 1 and M.rows:
        d.append([list(r) for r in M.rows])
        ranks.append(len(M.rows))
        k = 1
        while True:
            nxt = syzygies(alg, d[k], ranks[k - 1])
            nxt, d[k] = _prune_step(alg, nxt, d[k])
            ranks[k] = len(d[k])
            if not nxt:
                complete = True
                break
            if k == length:
                break
            d.append(nxt)
            ranks.append(len(nxt))
            k += 1
    while len(ranks) <= length:
        ranks.append(0)
        d.append([])
    if not alg.relations and not alg.aux_vars and M.grading() is not None:
        n = alg.ring.nvars
        # Hilbert's syzygy theorem for the (minimal) graded resolution
        if any(ranks[n + 1:]) or (length > n and not complete):
            raise ModuleError("graded resolution longer than the number of variables")
    return FreeComplex(alg, ranks, d, complete=complete, module=M)


# ---------------------------------------------------------------------------
# subquotients and cohomology
# ---------------------------------------------------------------------------

class SubQuotient:
    """``(gens + rels) / (rels)`` inside ``A^rank``, with a pruned
    presentation in ``.module`` and coordinate conversions."""

    def __init__(self, alg, rank, gens, rels):
        self.algebra = alg
        self.rank = rank
        self.gens = [list(g) for g in gens if _nonzero(g)]
        self.rels = [list(r) for r in rels if _nonzero(r)]
        ng = len(self.gens)
        if ng == 0 or rank == 0:
            self.mb = None
            self.pruned = Pruned(FPModule(alg, [], 0), [[] for _ in range(ng)], [])
        else:
            self.mb = ModuleBasis(alg.ring, rank, self.gens + self.rels,
                                  ideal=alg.gb.polys, tags=True)
            pres = [[alg.nf(p) for p in s[:ng]] for s in self.mb.syzygies()]
            raw = FPModule(alg, pres, ng)
            self.pruned = prune_module(raw)
        self.module = self.pruned.module

    def express(self, vec):
        """Module coordinates of an ambient vector in the subquotient."""
        alg = self.algebra
        if self.module.ngens == 0:
            return []
        c = self.mb.lift([alg.element(p) for p in vec])
        if c is None:
            raise ModuleError("vector is not in the subquotient")
        ng = len(self.gens)
        out = [alg.ring.zero] * self.module.ngens
        for o in range(ng):
            if c[o]:
                for j, t in enumerate(self.pruned.old_to_new[o]):
                    if t:
                        out[j] = out[j] + c[o] * t
        return [alg.nf(p) for p in out]

    def realize(self, coords):
        """Ambient vector of the element with the given module coordinates."""
        alg = self.algebra
        out = [alg.ring.zero] * self.rank
        for j, c in enumerate(coords):
            if c:
                g = self.gens[self.pruned.kept[j]]
                out = [x + c * y for x, y in zip(out, g)]
        return [alg.nf(p) for p in out]

    def generator_vectors(self):
        return [self.gens[o] for o in self.pruned.kept]


def cochain_space(C, i, N):
    """Rank of ``Hom(F_i, A^n)`` flattened: ``ranks[i] * N.ngens``."""
    return C.ranks[i] * N.ngens


def _coboundary_rows(alg, D, n):
    """Rows of the map ``X -> D X`` on flattened ``r x n`` matrices.

    ``D`` has shape ``r' x r``; the row for basis cochain ``(p, l)`` is the
    flattened ``r' x n`` matrix ``D e_{p,l}``.
    """
    rp = len(D)
    r = len(D[0]) if D else 0
    zero = alg.ring.zero
    rows = []
    for p in range(r):
        for l in range(n):
            v = [zero] * (rp * n)
            for q in range(rp):
                v[q * n + l] = D[q][p]
            rows.append(v)
    return rows


def _block_rels(N, count):
    n = N.ngens
    zero = N.algebra.ring.zero
    out = []
    for q in range(count):
        for rel in N.rows:
            v = [zero] * (count * n)
            v[q * n:(q + 1) * n] = rel
            out.append(v)
    return out


def cohomology_subquotient(C, N, i):
    """``H^i Hom(C, N)`` as a realized subquotient of ``N^{r_i}``."""
    alg = C.algebra
    n = N.ngens
    if i < 0 or i > C.length:
        return SubQuotient(alg, 0, [], [])
    ri = C.ranks[i]
    dim = ri * n
    if dim == 0:
        return SubQuotient(alg, 0, [], [])
    # cocycles: preimage of rels(N)^{r_{i+1}} under X -> d_{i+1} X
    rnext = C.ranks[i + 1] if i + 1 <= C.length else 0
    if i + 1 <= C.length and rnext and n:
        cob = _coboundary_rows(alg, C.d[i + 1], n)
        target = _block_rels(N, rnext)
        syz = syzygies(alg, cob + target, rnext * n)
        gens = [s[:dim] for s in syz]
    else:
        if i == C.length and not C.complete:
            raise ModuleError("complex too short for H^%d" % i)
        gens = identity_matrix(alg, dim)
    bounds = _block_rels(N, ri)
    if i >= 1 and C.ranks[i - 1]:
        D = C.d[i]
        zero = alg.ring.zero
        for p in range(C.ranks[i - 1]):
            for l in range(n):
                v = [zero] * dim
                for q in range(ri):
                    v[q * n + l] = D[q][p]
                bounds.append(v)
    return SubQuotient(alg, dim, gens, bounds)


def complex_cohomology(C, target, i):
    return cohomology_subquotient(C, target, i).module


def ext_subquotient(i, M, N, resolution=None):
    if i < 0:
        return SubQuotient(M.algebra, 0, [], [])
    if M.algebra is not N.algebra and M.algebra.ring != N.algebra.ring:
        raise ModuleError("modules over different algebras")
    C = resolution if resolution is not None and resolution.length >= i + 1 \
        else free_resolution(M, i + 1)
    return cohomology_subquotient(C, N, i)


def ext_module(i, M, N, resolution=None):
    return ext_subquotient(i, M, N, resolution).module


def hom_subquotient(M, N):
    """``Hom(M, N)``: elements are ``M.ngens x N.ngens`` matrices, flattened."""
    return ext_subquotient(0, M, N, free_resolution(M, 1))


# ---------------------------------------------------------------------------
# tensor products and base change
# ---------------------------------------------------------------------------

def tensor_module(M, N):
    """``M (x)_A N``: generators ``e_i (x) f_j`` in row-major order."""
    alg = M.algebra
    if alg.ring != N.algebra.ring:
        raise ModuleError("tensor needs modules over one algebra (use base_change)")
    g, h = M.ngens, N.ngens
    zero = alg.ring.zero
    rows = []
    for rel in M.rows:
        for j in range(h):
            v = [zero] * (g * h)
            for i in range(g):
                v[i * h + j] = rel[i]
            rows.append(v)
    for rel in N.rows:
        for i in range(g):
            v = [zero] * (g * h)
            v[i * h:(i + 1) * h] = rel
            rows.append(v)
    return FPModule(alg, rows, g * h)


def base_change(M, hom):
    """``B (x)_A M`` along ``hom: A -> B``."""
    return FPModule(hom.target, [[hom.apply(p) for p in r] for r in M.rows], M.ngens)


def map_module(M, phi, target_alg):
    """Apply a ring map (callable on full-ring polynomials) to a presentation."""
    return FPModule(target_alg, [[phi(p) for p in r] for r in M.rows], M.ngens)


def direct_sum(*mods):
    alg = mods[0].algebra
    total = sum(m.ngens for m in mods)
    zero = alg.ring.zero
    rows = []
    off = 0
    for m in mods:
        for r in m.rows:
            v = [zero] * total
            v[off:off + m.ngens] = r
            rows.append(v)
        off += m.ngens
    return FPModule(alg, rows, total)


# ---------------------------------------------------------------------------
# minimal Betti numbers
# ---------------------------------------------------------------------------

def _at_origin(alg, p):
    return alg.field(0) if p.is_zero() else p.constant_coeff()


def minimal_betti(M, length=None):
    """Ranks of a minimal free resolution (minimality modulo the ideal of
    all variables, which must define a point of ``Spec A``)."""
    alg = M.algebra
    if alg.aux_vars:
        raise ModuleError("minimal Betti numbers need the origin in Spec A (no inverted elements)")
    if not all(p.constant_coeff() == 0 for p in alg.gb.polys if not p.is_zero()):
        raise ModuleError("the ideal of all variables is not a point of Spec A")
    if length is None:
        length = alg.ring.nvars if not alg.relations else alg.ring.nvars + 1
    C = free_resolution(M, length + 1)
    ranks = []
    rk = []
    for k in range(1, C.length + 1):
        rk.append(field_rank([[_at_origin(alg, p) for p in r] for r in C.d[k]]) if C.d[k] else 0)
    for k in range(length + 1):
        left = rk[k - 1] if k >= 1 else 0
        right = rk[k] if k < len(rk) else 0
        ranks.append(C.ranks[k] - left - right)
    while len(ranks) > 1 and ranks[-1] == 0:
        ranks.pop()
    return ranks


# ---------------------------------------------------------------------------
# isomorphism probing
# ---------------------------------------------------------------------------

@dataclass
class IsoResult:
    status: str  # iso_found | hilbert_mismatch | inconclusive
    forward: list = None   # M.ngens x N.ngens matrix
    backward: list = None
    reason: str = ""
    attempts: int = 0
    seed: int = 0
    details: dict = field(default_factory=dict)

    @property
    def found(self):
        return self.status == "iso_found"

    def to_json(self, alg=None):
        out = {"status": self.status, "reason": self.reason, "attempts": self.attempts,
               "seed": self.seed}
        if alg is not None and self.forward is not None:
            out["map"] = format_matrix(alg, self.forward)
            out["inverse_direction"] = format_matrix(alg, self.backward)
        return out


def _surjects(M, N, mat):
    """Does the map sending generator i of M to row i of ``mat`` hit all of N?"""
    return N.generated_by(mat)


def _is_hom(M, N, mat):
    """Relations of M map into relations of N."""
    alg = M.algebra
    for rel in M.rows:
        img = [alg.ring.zero] * N.ngens
        for c, row in zip(rel, mat):
            if c:
                img = [x + c * y for x, y in zip(img, row)]
        if not N.is_zero_element(img):
            return False
    return True


def _reshape(vec, g, n):
    return [list(vec[i * n:(i + 1) * n]) for i in range(g)]


def _candidates(alg, hom_gens, g, n, rng, budget):
    """Generator-level matrices of candidate homomorphisms (seeded)."""
    seen = 0
    for v in hom_gens:
        if seen >= budget:
            return
        seen += 1
        yield _reshape(v, g, n)
    if not hom_gens:
        return
    monos = [alg.ring.one] + alg.gens()
    monos2 = monos + [a * b for a, b in combinations(monos[1:], 2)] + [a * a for a in monos[1:]]
    while seen < budget:
        use_monos = seen > budget // 2 and len(monos2) > 1
        vec = [alg.ring.zero] * (g * n)
        for h in hom_gens:
            c = rng.randint(-3, 3)
            if not c:
                continue
            coef = alg.ring(c)
            if use_monos:
                coef = coef * rng.choice(monos2)
            vec = [x + coef * y for x, y in zip(vec, h)]
        seen += 1
        vec = [alg.nf(p) for p in vec]
        if _nonzero(vec):
            yield _reshape(vec, g, n)


def _invariant_mismatch(M, N):
    zM, zN = M.is_zero(), N.is_zero()
    if zM != zN:
        return "one module is zero and the other is not"
    if zM:
        return None
    if M.krull_dim() != N.krull_dim():
        return "support dimensions differ (%d vs %d)" % (M.krull_dim(), N.krull_dim())
    alg = M.algebra
    if alg.weights() is not None and M.grading() is not None and N.grading() is not None:
        bm, bn = minimal_betti(M, 0)[0], minimal_betti(N, 0)[0]
        if bm != bn:
            return "minimal generator counts differ (%d vs %d)" % (bm, bn)
        hm, hn = M.hilbert_series(), N.hilbert_series()
        if M.ngens == 1 and N.ngens == 1 and not hm.shifted_equal(hn):
            # cyclic graded modules: an isomorphism is homogeneous up to shift
            return "Hilbert series differ: %s vs %s" % (hm.format(), hn.format())
    return None


def iso_probe(M, N, seed=0, attempts=64):
    """Search for an isomorphism ``M -> N`` (three-valued, seeded)."""
    alg = M.algebra
    if alg.ring != N.algebra.ring:
        raise ModuleError("iso_probe needs modules over one algebra")
    reason = _invariant_mismatch(M, N)
    if reason:
        return IsoResult("hilbert_mismatch", reason=reason, seed=seed)
    if M.is_zero():
        return IsoResult("iso_found", [[alg.ring.zero] * N.ngens for _ in range(M.ngens)],
                         [[alg.ring.zero] * M.ngens for _ in range(N.ngens)],
                         reason="both modules are zero", seed=seed)
    # fast path: identical presentations
    rng = random.Random(seed)
    fwd_gens = hom_subquotient(M, N)
    bwd_gens = hom_subquotient(N, M)
    fg = [fwd_gens.realize(_unit(alg, fwd_gens.module.ngens, j))
          for j in range(fwd_gens.module.ngens)]
    bg = [bwd_gens.realize(_unit(alg, bwd_gens.module.ngens, j))
          for j in range(bwd_gens.module.ngens)]
    if not fg or not bg:
        return IsoResult("hilbert_mismatch", reason="no nonzero homomorphism in one direction",
                         seed=seed)
    half = max(attempts // 2, 1)
    tried = 0
    fwd = None
    if M.ngens == N.ngens:
        ident = identity_matrix(alg, M.ngens)
        if _is_hom(M, N, ident) and _surjects(M, N, ident):
            fwd = ident
    for cand in _candidates(alg, fg, M.ngens, N.ngens, rng, half):
        if fwd is not None:
            break
        tried += 1
        if _surjects(M, N, cand):
            fwd = cand
    bwd = None
    if M.ngens == N.ngens:
        ident = identity_matrix(alg, M.ngens)
        if _is_hom(N, M, ident) and _surjects(N, M, ident):
            bwd = ident
    for cand in _candidates(alg, bg, N.ngens, M.ngens, rng, half):
        if bwd is not None or fwd is None:
            break
        tried += 1
        if _surjects(N, M, cand):
            bwd = cand
    if fwd is not None and bwd is not None:
        return IsoResult("iso_found", fwd, bwd, attempts=tried, seed=seed,
                         reason="surjections in both directions")
    return IsoResult("inconclusive", attempts=tried, seed=seed,
                     reason="no surjection found in %d attempts" % tried)


def _unit(alg, n, j):
    return [alg.ring.one if k == j else alg.ring.zero for k in range(n)]


def is_isomorphic(M, N, seed=0, attempts=64):
    return iso_probe(M, N, seed, attempts).found
