"""Sequential execution of a parsed session into result records."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from ..algebra import make_algebra
from ..duality_core import (CMError, canonical_module, dualize, etale_pairing, finite_upper_shriek,
                       rigidity_check)
from ..form_trace import ORACLE_CHECKS, FormError, Tower
from ..groebner import buchberger, is_groebner
from ..modres import (FPModule, ModuleError, ext_module, format_matrix, free_resolution,
                      iso_probe, minimal_betti)
from ..polyring import QQ, PrimeField, RingError
from ..smoothalg import (FinitenessError, SmoothnessError, finite_data, kahler_module,
                         make_hom, smoothness_rank)
from ..syntax import BinOp, Num, Var, eval_expr, format_expr
from .ast import Arrow, Command, FormArg, HomDef, LocalizeDef, ModuleDef, RingDef, TowerDef
from .ast import format_statement


@dataclass
class Flags:
    order: str = "grevlex"
    max_ext: int = None      # squaring / Ext truncation; None means the command default
    seed: int = 0
    fail_fast: bool = False
    only: str = None


DEFAULT_RIGIDITY_BOUND = 4


@dataclass
class ResultRecord:
    index: int
    command: str
    kind: str                # definition | command
    status: str              # ok | error | inconclusive
    payload: dict
    provenance: dict = field(default_factory=dict)
    wall_time: float = 0.0
    span: tuple = None

    def to_json(self):
        line, col = (self.span or (0, 0))[:2]
        return {"index": self.index, "command": self.command, "kind": self.kind,
                "status": self.status, "payload": self.payload,
                "provenance": self.provenance, "wall_time": round(self.wall_time, 6),
                "span": {"line": line, "col": col}}


class CommandError(RingError):
    pass


def _elem(alg, node):
    return alg.nf(eval_expr(node, alg.ring, invert=alg.invert_for_parse))


def _strings(nodes):
    return [format_expr(n) for n in nodes]


class Executor:
    """Holds the named objects of a session and runs statements one at a time."""

    def __init__(self, flags=None):
        self.flags = flags or Flags()
        self.objects = {}
        self.kinds = {}
        self._canonical = {}
        self.records = []

    # -- helpers -----------------------------------------------------------------
    def get(self, name, kind):
        if name not in self.objects:
            raise CommandError("%r is not defined" % name)
        if self.kinds[name] != kind:
            raise CommandError("%r is a %s, expected a %s" % (name, self.kinds[name], kind))
        return self.objects[name]

    def define(self, name, kind, obj):
        if name in self.objects:
            raise CommandError("%r is already defined" % name)
        self.objects[name] = obj
        self.kinds[name] = kind

    def canonical(self, alg):
        key = id(alg)
        if key not in self._canonical:
            self._canonical[key] = canonical_module(alg)
        return self._canonical[key]

    # -- execution -----------------------------------------------------------------
    def run(self, session):
        out = []
        for st in session.statements:
            rec = self.execute(st)
            out.append(rec)
            if rec.status == "error" and self.flags.fail_fast:
                break
        return out

    def execute(self, st):
        t0 = time.perf_counter()
        kind = "command" if isinstance(st, Command) else "definition"
        provenance = {}
        try:
            if kind == "definition":
                payload = self._define(st)
                status = "ok"
            else:
                handler = getattr(self, "cmd_" + st.verb.replace("-", "_"))
                status, payload, provenance = handler(*st.args)
        except (RingError, ArithmeticError) as exc:
            status = "error"
            payload = {"error": str(exc), "error_type": type(exc).__name__}
        rec = ResultRecord(len(self.records), format_statement(st), kind, status, payload,
                           provenance, time.perf_counter() - t0, st.span)
        self.records.append(rec)
        return rec

    def _define(self, st):
        if isinstance(st, RingDef):
            if isinstance(st.base, str):
                base = self.get(st.base, "ring")
                alg = base.extend(st.variables, _strings(st.relations), name=st.name)
            else:
                K = QQ if st.base.name == "QQ" else PrimeField(st.base.p)
                alg = make_algebra(K, st.variables, _strings(st.relations), name=st.name)
            self.define(st.name, "ring", alg)
            return {"defined": st.name, "ring": alg.describe(), "dim": alg.dim()}
        if isinstance(st, LocalizeDef):
            base = self.get(st.ring, "ring")
            alg = base.localize(_elem(base, st.element), name=st.name)
            self.define(st.name, "ring", alg)
            return {"defined": st.name, "ring": alg.describe()}
        if isinstance(st, HomDef):
            src, dst = self.get(st.source, "ring"), self.get(st.target, "ring")
            f = make_hom(src, dst, [_elem(dst, e) for e in st.images], name=st.name)
            self.define(st.name, "hom", f)
            return {"defined": st.name, "hom": f.describe(), "flags": f.flags()}
        if isinstance(st, ModuleDef):
            alg = self.get(st.ring, "ring")
            if st.kind == "quotient":
                M = FPModule.cyclic(alg, [_elem(alg, e) for e in st.data])
            elif st.kind == "free":
                M = FPModule.free(alg, st.data[0])
            elif st.kind == "coker":
                width = {len(r) for r in st.data}
                if len(width) != 1:
                    raise CommandError("matrix rows have different lengths")
                M = FPModule(alg, [[_elem(alg, e) for e in r] for r in st.data], width.pop())
            else:
                M = self.canonical(alg).omega
            self.define(st.name, "module", M)
            return {"defined": st.name, "module": M.to_json()}
        if isinstance(st, TowerDef):
            base = self.get(st.base, "ring")
            levels = [self.get(n, "ring") for n in st.levels]
            members = {id(base)} | {id(a) for a in levels}
            homs = [h for n, h in self.objects.items() if self.kinds[n] == "hom"
                    and id(h.source) in members and id(h.target) in members]
            T = Tower(base, levels, homs, name=st.name,
                      separable=bool(base.field.characteristic))
            self.define(st.name, "tower", T)
            return {"defined": st.name, "relative_dimension": T.rank,
                    "wedge_basis": {repr(a): T.level(a).wedge_name() or "1" for a in levels}}
        raise CommandError("unknown definition")

    # -- rings ---------------------------------------------------------------------
    def cmd_groebner(self, name, ideal=None):
        A = self.get(name, "ring")
        gens = list(A.ideal_gens)
        if ideal is not None:
            gens = [_elem(A, e) for e in ideal[1]] + gens
        gens = [g for g in gens if g]
        gb = buchberger(gens, order=self.flags.order, ring=A.ring)
        return "ok", {"basis": [A.format(p) for p in gb.polys],
                      "buchberger_criterion": is_groebner(gb)}, {"order": self.flags.order}

    def cmd_nf(self, name, expr):
        A = self.get(name, "ring")
        return "ok", {"normal_form": A.format(_elem(A, expr[1]))}, {}

    def cmd_dim(self, name):
        A = self.get(name, "ring")
        return "ok", {"dim": A.dim()}, {}

    def cmd_hilbert(self, name):
        A = self.get(name, "ring")
        hs = FPModule.free(A).hilbert_series()
        return "ok", {"hilbert_series": hs.format(), "weights": list(hs.weights),
                      "dimension": hs.dimension()}, {}

    # -- modules -------------------------------------------------------------------
    def cmd_res(self, name, length=None):
        M = self.get(name, "module")
        if length is None:
            length = M.algebra.nvars + 1
        C = free_resolution(M, length)
        C.check()
        prov = {} if C.complete else {"truncation": length}
        return "ok", dict(C.to_json(), d_squared_zero=True), prov

    def cmd_betti(self, name):
        M = self.get(name, "module")
        return "ok", {"betti": minimal_betti(M)}, {}

    def cmd_ext(self, i, m, n):
        M, N = self.get(m, "module"), self.get(n, "module")
        if M.algebra is not N.algebra:
            raise CommandError("modules live over different rings")
        E = ext_module(i, M, N)
        return "ok", {"degree": i, "zero": E.is_zero(), "module": E.to_json()}, {}

    def cmd_isoprobe(self, m, n):
        M, N = self.get(m, "module"), self.get(n, "module")
        r = iso_probe(M, N, seed=self.flags.seed)
        status = "inconclusive" if r.status == "inconclusive" else "ok"
        return status, r.to_json(M.algebra), {"seed": self.flags.seed,
                                              "attempts": r.attempts}

    # -- duality ---------------------------------------------------------------------
    def cmd_omega(self, name):
        A = self.get(name, "ring")
        try:
            cd = self.canonical(A)
        except CMError as exc:
            return "ok", {"cohen_macaulay": False, "reason": str(exc),
                          "nonzero_ext": exc.nonzero}, {}
        payload = cd.to_json()
        payload["cohen_macaulay"] = True
        payload["gorenstein"] = cd.is_gorenstein(seed=self.flags.seed)
        return "ok", payload, {"cm_certificate": cd.cm_certificate, "seed": self.flags.seed}

    def cmd_rigidity(self, name, bound=None):
        A = self.get(name, "ring")
        if bound is None:
            bound = self.flags.max_ext if self.flags.max_ext is not None \
                else DEFAULT_RIGIDITY_BOUND
        rep = rigidity_check(A, self.canonical(A), bound=bound, seed=self.flags.seed)
        status = "inconclusive" if rep.rigid == "inconclusive" else "ok"
        return status, rep.to_json(), {"bound": bound, "seed": self.flags.seed}

    def cmd_dualize(self, ring, module):
        A, M = self.get(ring, "ring"), self.get(module, "module")
        if M.algebra is not A:
            raise CommandError("module %s does not live over %s" % (module, ring))
        t = dualize(A, self.canonical(A), M)
        payload = t.to_json()
        payload["concentrated_in"] = t.concentrated()
        return "ok", payload, {}

    def cmd_shriek(self, hom, module, shift=0):
        f, M = self.get(hom, "hom"), self.get(module, "module")
        if M.algebra is not f.source:
            raise CommandError("module %s does not live over the source of %s" % (module, hom))
        t = finite_upper_shriek(f, M, shift=shift, max_ext=self.flags.max_ext)
        payload = t.to_json()
        payload["concentrated_in"] = t.concentrated()
        prov = {"truncation": t.truncation} if t.truncation is not None else {}
        return "ok", payload, prov

    def cmd_trace(self, hom, expr):
        f = self.get(hom, "hom")
        fd = finite_data(f)
        b = _elem(f.target, expr[1])
        return "ok", {"trace": f.source.format(fd.trace(b)), "basis": fd.basis_names()}, {}

    def cmd_etale_pairing(self, hom):
        f = self.get(hom, "hom")
        return "ok", etale_pairing(f).to_json(f.source), {}

    def cmd_kahler(self, hom):
        return "ok", kahler_module(self.get(hom, "hom")).to_json(), {}

    def cmd_smooth(self, hom):
        f = self.get(hom, "hom")
        try:
            cert = smoothness_rank(f, separable=bool(f.target.field.characteristic))
        except SmoothnessError as exc:
            return "ok", {"smooth": False, "reason": str(exc)}, {}
        return "ok", dict(cert.to_json(), smooth=True, etale=cert.rank == 0), {}

    def cmd_finite(self, hom):
        f = self.get(hom, "hom")
        try:
            fd = finite_data(f)
        except FinitenessError as exc:
            return "ok", {"finite": False, "reason": str(exc)}, {}
        return "ok", {"finite": True, "basis": fd.basis_names(), "free": fd.is_free(),
                      "relations": format_matrix(f.source, fd.relations())}, {}

    # -- forms -----------------------------------------------------------------------
    def _form(self, T, alg, arg):
        lev = T.level(alg)
        wedge = list(lev.basis_vars)
        node, sign = arg.coeff, 1
        if arg.wedge is not None:
            if sorted(arg.wedge) != sorted(wedge):
                raise FormError("forms on %r are written in the basis %s"
                                % (alg, lev.wedge_name()))
            perm = [wedge.index(v) for v in arg.wedge]
            for i in range(len(perm)):
                for j in range(i + 1, len(perm)):
                    if perm[i] > perm[j]:
                        sign = -sign
        elif wedge:
            dname = "d" + wedge[0] if len(wedge) == 1 else None
            if dname is None or dname in alg.ring.vars:
                raise FormError("write forms on %r as h * %s" % (alg, lev.wedge_name()))
            if node == Var(dname):
                node = Num(1)
            elif isinstance(node, BinOp) and node.op == "*" and node.right == Var(dname):
                node = node.left
            else:
                raise FormError("write forms on %r as h * %s" % (alg, lev.wedge_name()))
        return T.form(alg, alg.nf(_elem(alg, node).scale(alg.ring.field(sign))))

    def _arrow(self, T, arrow):
        X, Y = self.get(arrow.source, "ring"), self.get(arrow.target, "ring")
        return X, Y, T.structure(X, Y)

    def cmd_pullback(self, tower, arrow, form):
        T = self.get(tower, "tower")
        X, Y, f = self._arrow(T, arrow)
        w = T.pullback_form(f, self._form(T, X, form))
        return "ok", {"form": w.format(), "level": repr(Y)}, {}

    def cmd_traceform(self, tower, arrow, form):
        T = self.get(tower, "tower")
        X, Y, f = self._arrow(T, arrow)
        before = ORACLE_CHECKS["agreements"]
        w = T.trace_form(f, self._form(T, Y, form))
        return "ok", {"form": w.format(), "level": repr(X)}, {
            "oracle_agreements": ORACLE_CHECKS["agreements"] - before}

    def cmd_qform(self, tower, arrow):
        T = self.get(tower, "tower")
        X, Y, f = self._arrow(T, arrow)
        G = T.nondegeneracy_matrix(f)
        return "ok", {"matrix": format_matrix(X, G), "nondegenerate": T.is_nondegenerate(f),
                      "basis": T.finite_step(f).fd.basis_names()}, {}

    # -- suite -------------------------------------------------------------------------
    def cmd_check(self, only=None):
        from .suite import run_suite
        rows = run_suite(only=only, seed=self.flags.seed)
        ok = all(r.passed for r in rows)
        return ("ok" if ok else "error"), {"checks": [r.to_json() for r in rows],
                                           "all_passed": ok}, {"seed": self.flags.seed}


def execute_session(session, flags=None):
    """Run every statement; returns the list of :class:`ResultRecord`."""
    return Executor(flags).run(session)


def format_record(rec):
    """Human-readable one-record summary."""
    head = "[%s] %s" % (rec.status, rec.command)
    p = rec.payload
    if rec.status == "error":
        return head + "\n  error: " + p.get("error", "")
    lines = [head]
    for k, v in p.items():
        if k in ("differentials",):
            continue
        lines.append("  %s: %s" % (k, _short(v)))
    for k, v in rec.provenance.items():
        lines.append("  (%s: %s)" % (k, _short(v)))
    return "\n".join(lines)


def _short(v):
    if isinstance(v, dict):
        return "{" + ", ".join("%s: %s" % (k, _short(x)) for k, x in v.items()) + "}"
    if isinstance(v, list):
        return "[" + ", ".join(_short(x) for x in v) + "]"
    return str(v)
