"""Session AST and its printer (``parse(print(ast)) == ast``)."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..syntax import format_expr


def _span():
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class FieldSpec:
    name: str          # "QQ" or "Fp"
    p: int = 0

    def text(self):
        return "QQ" if self.name == "QQ" else "Fp(%d)" % self.p


@dataclass(frozen=True)
class RingDef:
    name: str
    base: object       # FieldSpec or the name of a ring being extended
    variables: tuple
    relations: tuple
    span: tuple = _span()


@dataclass(frozen=True)
class LocalizeDef:
    name: str
    ring: str
    element: object
    span: tuple = _span()


@dataclass(frozen=True)
class HomDef:
    name: str
    source: str
    target: str
    images: tuple
    span: tuple = _span()


@dataclass(frozen=True)
class ModuleDef:
    name: str
    kind: str          # quotient | free | coker | omega
    ring: str
    data: tuple = ()   # ideal exprs | (rank,) | matrix rows
    span: tuple = _span()


@dataclass(frozen=True)
class TowerDef:
    name: str
    base: str
    levels: tuple
    span: tuple = _span()


@dataclass(frozen=True)
class FormArg:
    coeff: object
    wedge: tuple = None    # explicit d(x,y) names, or None


@dataclass(frozen=True)
class Arrow:
    source: str
    target: str


@dataclass(frozen=True)
class Command:
    verb: str
    args: tuple
    span: tuple = _span()


@dataclass(frozen=True)
class Session:
    statements: tuple


DEFINITIONS = (RingDef, LocalizeDef, HomDef, ModuleDef, TowerDef)


def format_form(f):
    c = format_expr(f.coeff, 2)
    if f.wedge is None:
        return format_expr(f.coeff)
    return "%s * d(%s)" % (c, ",".join(f.wedge))


def format_arg(a):
    if isinstance(a, str):
        return a
    if isinstance(a, int):
        return str(a)
    if isinstance(a, Arrow):
        return "%s -> %s" % (a.source, a.target)
    if isinstance(a, FormArg):
        return ": " + format_form(a)
    if isinstance(a, tuple) and a and a[0] == ":list":
        return ": (%s)" % ", ".join(format_expr(e) for e in a[1])
    if isinstance(a, tuple) and a and a[0] == ":expr":
        return ": " + format_expr(a[1])
    raise TypeError("unprintable argument %r" % (a,))


def format_statement(st):
    if isinstance(st, RingDef):
        base = st.base.text() if isinstance(st.base, FieldSpec) else st.base
        s = "ring %s = %s[%s]" % (st.name, base, ", ".join(st.variables))
        if st.relations:
            s += "/(%s)" % ", ".join(format_expr(e) for e in st.relations)
        return s + ";"
    if isinstance(st, LocalizeDef):
        e = format_expr(st.element, 3)
        return "localize %s = %s[1/%s];" % (st.name, st.ring, e)
    if isinstance(st, HomDef):
        return "hom %s : %s -> %s = (%s);" % (st.name, st.source, st.target,
                                              ", ".join(format_expr(e) for e in st.images))
    if isinstance(st, ModuleDef):
        if st.kind == "quotient":
            rhs = "%s/(%s)" % (st.ring, ", ".join(format_expr(e) for e in st.data))
        elif st.kind == "free":
            rhs = st.ring if st.data[0] == 1 else "%s^%d" % (st.ring, st.data[0])
        elif st.kind == "coker":
            rows = ", ".join("[%s]" % ", ".join(format_expr(e) for e in r) for r in st.data)
            rhs = "coker %s [%s]" % (st.ring, rows)
        else:
            rhs = "omega(%s)" % st.ring
        return "module %s = %s;" % (st.name, rhs)
    if isinstance(st, TowerDef):
        return "tower %s over %s : %s;" % (st.name, st.base, ", ".join(st.levels))
    if isinstance(st, Command):
        parts = [st.verb]
        for a in st.args:
            parts.append(format_arg(a))
        return " ".join(parts) + ";"
    raise TypeError("unknown statement %r" % (st,))


def format_session(session):
    return "\n".join(format_statement(st) for st in session.statements) + (
        "\n" if session.statements else "")
