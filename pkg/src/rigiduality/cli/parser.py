"""Recursive-descent parser for session files.

statement := def | cmd
def  := "ring" NAME "=" base "[" vars "]" ("/" "(" polys ")")? ";"
      | "localize" NAME "=" NAME "[" "1" "/" poly "]" ";"
      | "hom" NAME ":" NAME "->" NAME "=" "(" polys? ")" ";"
      | "module" NAME "=" mod ";"
      | "tower" NAME "over" NAME ":" NAME ("," NAME)* ";"
base := "QQ" | "Fp" "(" NUMBER ")" | NAME
mod  := NAME ("/" "(" polys ")" | "^" NUMBER)? | "coker" NAME "[" row ("," row)* "]"
      | "omega" "(" NAME ")"
cmd  := verb args ";"      (argument shapes per verb in SIGNATURES)
"""

from __future__ import annotations

from dataclasses import dataclass

from ..syntax import BinOp, DSLSyntaxError, Num, TokenStream, Var, parse_expr, tokenize
from .ast import (Arrow, Command, FieldSpec, FormArg, HomDef, LocalizeDef, ModuleDef,
                  RingDef, Session, TowerDef)

# Argument shapes: name, ?name, int, ?int, :expr, ?:list, arrow, :form
SIGNATURES = {
    "groebner": ("name", "?:list"),
    "nf": ("name", ":expr"),
    "dim": ("name",),
    "hilbert": ("name",),
    "res": ("name", "?int"),
    "betti": ("name",),
    "ext": ("int", "name", "name"),
    "isoprobe": ("name", "name"),
    "omega": ("name",),
    "rigidity": ("name", "?int"),
    "dualize": ("name", "name"),
    "shriek": ("name", "name", "?int"),
    "trace": ("name", ":expr"),
    "etale-pairing": ("name",),
    "kahler": ("name",),
    "smooth": ("name",),
    "finite": ("name",),
    "pullback": ("name", "arrow", ":form"),
    "traceform": ("name", "arrow", ":form"),
    "qform": ("name", "arrow"),
    "check": ("?name",),
}

# what kind of object each command argument must name (for binding checks)
NAME_KINDS = {
    "groebner": ("ring",), "nf": ("ring",), "dim": ("ring",), "hilbert": ("ring",),
    "res": ("module",), "betti": ("module",), "ext": ("module", "module"),
    "isoprobe": ("module", "module"), "omega": ("ring",), "rigidity": ("ring",),
    "dualize": ("ring", "module"), "shriek": ("hom", "module"), "trace": ("hom",),
    "etale-pairing": ("hom",), "kahler": ("hom",), "smooth": ("hom",), "finite": ("hom",),
    "pullback": ("tower",), "traceform": ("tower",), "qform": ("tower",), "check": (),
}

DEF_KEYWORDS = ("ring", "localize", "hom", "module", "tower")
RESERVED = set(DEF_KEYWORDS) | set(SIGNATURES) | {"QQ", "Fp", "coker", "over"}


@dataclass
class Diagnostic:
    kind: str          # lexical | syntax | binding
    message: str
    line: int
    col: int
    expected: tuple = ()
    span: tuple = None

    def format(self, filename="<session>"):
        s = "%s:%d:%d: %s error: %s" % (filename, self.line, self.col, self.kind, self.message)
        if self.expected:
            s += " (expected %s)" % " or ".join(repr(e) for e in self.expected)
        return s

    def to_json(self):
        return {"kind": self.kind, "message": self.message, "line": self.line,
                "col": self.col, "expected": list(self.expected)}


class SessionSyntaxError(DSLSyntaxError):
    def __init__(self, diagnostics):
        self.diagnostics = diagnostics
        d = diagnostics[0]
        super().__init__(d.message, d.line, d.col, d.expected)


def _span(first, last):
    return (first.line, first.col, first.start, last.end)


class _Parser:
    def __init__(self, tokens):
        self.ts = TokenStream(tokens)

    def last(self):
        return self.ts.tokens[max(self.ts.pos - 1, 0)]

    def name(self, what="name"):
        tok = self.ts.peek()
        if tok.kind == "IDENT" and tok.value not in RESERVED:
            return self.ts.next().value
        found = "end of input" if tok.kind == "EOF" else repr(tok.value)
        raise DSLSyntaxError("unexpected %s" % found, tok.line, tok.col, (what,))

    def int_(self):
        return int(self.ts.expect_kind("NUMBER", "integer").value)

    def expr_list(self, close=")"):
        items = []
        if self.ts.at(close):
            return ()
        items.append(parse_expr(self.ts))
        while self.ts.accept(","):
            items.append(parse_expr(self.ts))
        return tuple(items)

    def statement(self):
        first = self.ts.peek()
        if first.kind != "IDENT":
            found = "end of input" if first.kind == "EOF" else repr(first.value)
            raise DSLSyntaxError("unexpected %s" % found, first.line, first.col,
                                 ("definition", "command"))
        kw = first.value
        if kw == "ring":
            st = self.ring_def()
        elif kw == "localize":
            st = self.localize_def()
        elif kw == "hom":
            st = self.hom_def()
        elif kw == "module":
            st = self.module_def()
        elif kw == "tower":
            st = self.tower_def()
        elif kw in SIGNATURES:
            st = self.command()
        else:
            raise DSLSyntaxError("unknown statement %r" % kw, first.line, first.col,
                                 ("definition", "command"))
        self.ts.expect(";")
        return st.__class__(**{**st.__dict__, "span": _span(first, self.last())})

    def ring_def(self):
        ts = self.ts
        ts.next()
        name = self.name("ring name")
        ts.expect("=")
        tok = ts.peek()
        if ts.accept("QQ"):
            base = FieldSpec("QQ")
        elif ts.accept("Fp"):
            ts.expect("(")
            p = self.int_()
            ts.expect(")")
            base = FieldSpec("Fp", p)
        elif tok.kind == "IDENT":
            base = self.name("field or ring")
        else:
            raise DSLSyntaxError("unexpected %r" % tok.value, tok.line, tok.col,
                                 ("QQ", "Fp", "ring name"))
        ts.expect("[")
        variables = []
        if not ts.at("]"):
            variables.append(self.name("variable"))
            while not ts.at("]"):
                ts.expect("]", ",")
                variables.append(self.name("variable"))
        ts.expect("]")
        relations = ()
        if ts.accept("/"):
            ts.expect("(")
            relations = self.expr_list()
            ts.expect(")")
        return RingDef(name, base, tuple(variables), relations)

    def localize_def(self):
        ts = self.ts
        ts.next()
        name = self.name("ring name")
        ts.expect("=")
        ring = self.name("ring name")
        ts.expect("[")
        one = ts.peek()
        if not (one.kind == "NUMBER" and one.value == "1"):
            raise DSLSyntaxError("unexpected %r" % one.value, one.line, one.col, ("1/",))
        ts.next()
        ts.expect("/")
        element = parse_expr(ts)
        ts.expect("]")
        return LocalizeDef(name, ring, element)

    def hom_def(self):
        ts = self.ts
        ts.next()
        name = self.name("hom name")
        ts.expect(":")
        src = self.name("ring name")
        ts.expect("->")
        dst = self.name("ring name")
        ts.expect("=")
        ts.expect("(")
        images = self.expr_list()
        ts.expect(")")
        return HomDef(name, src, dst, images)

    def module_def(self):
        ts = self.ts
        ts.next()
        name = self.name("module name")
        ts.expect("=")
        if ts.accept("coker"):
            ring = self.name("ring name")
            ts.expect("[")
            rows = [self.matrix_row()]
            while ts.accept(","):
                rows.append(self.matrix_row())
            ts.expect("]")
            return ModuleDef(name, "coker", ring, tuple(rows))
        if ts.accept("omega"):
            ts.expect("(")
            ring = self.name("ring name")
            ts.expect(")")
            return ModuleDef(name, "omega", ring)
        ring = self.name("ring name")
        if ts.accept("/"):
            ts.expect("(")
            ideal = self.expr_list()
            ts.expect(")")
            return ModuleDef(name, "quotient", ring, ideal)
        if ts.accept("^"):
            return ModuleDef(name, "free", ring, (self.int_(),))
        return ModuleDef(name, "free", ring, (1,))

    def matrix_row(self):
        self.ts.expect("[")
        row = self.expr_list("]")
        self.ts.expect("]")
        return row

    def tower_def(self):
        ts = self.ts
        ts.next()
        name = self.name("tower name")
        ts.expect("over")
        base = self.name("ring name")
        ts.expect(":")
        levels = [self.name("ring name")]
        while ts.accept(","):
            levels.append(self.name("ring name"))
        return TowerDef(name, base, tuple(levels))

    def command(self):
        ts = self.ts
        verb = ts.next().value
        args = []
        for shape in SIGNATURES[verb]:
            if shape == "name":
                args.append(self.name())
            elif shape == "?name":
                tok = ts.peek()
                if tok.kind == "IDENT":
                    args.append(ts.next().value)
            elif shape == "int":
                args.append(self.int_())
            elif shape == "?int":
                if ts.peek().kind == "NUMBER":
                    args.append(self.int_())
            elif shape == ":expr":
                ts.expect(":")
                args.append((":expr", parse_expr(ts)))
            elif shape == "?:list":
                if ts.accept(":"):
                    ts.expect("(")
                    args.append((":list", self.expr_list()))
                    ts.expect(")")
            elif shape == "arrow":
                src = self.name("level")
                ts.expect("->")
                args.append(Arrow(src, self.name("level")))
            elif shape == ":form":
                ts.expect(":")
                args.append(self.form())
        return Command(verb, tuple(args))

    def form(self):
        """``coeff``, ``coeff * dX`` or ``coeff * d(x,y)``; a bare ``dX`` factor
        is resolved against the level's wedge basis at execution time."""
        ts = self.ts
        node = parse_expr(ts)
        if ts.at("("):
            # "... * d(x,y)": the expression parser stopped after the "d"
            if isinstance(node, Var) and node.name == "d":
                coeff = Num(1)
            elif isinstance(node, BinOp) and node.op == "*" and node.right == Var("d"):
                coeff = node.left
            else:
                tok = ts.peek()
                raise DSLSyntaxError("unexpected '('", tok.line, tok.col, (";",))
            ts.expect("(")
            names = [self.name("variable")]
            while ts.accept(","):
                names.append(self.name("variable"))
            ts.expect(")")
            return FormArg(coeff, tuple(names))
        return FormArg(node)


def _recover(ts):
    while ts.peek().kind != "EOF" and not ts.at(";"):
        ts.next()
    ts.accept(";")


def parse_session_recover(text):
    """Parse as much as possible; returns ``(Session, diagnostics)``."""
    try:
        tokens = tokenize(text)
    except DSLSyntaxError as e:
        return Session(()), [Diagnostic("lexical", e.message, e.line, e.col, e.expected,
                                        (e.line, e.col, None, None))]
    p = _Parser(tokens)
    statements, diags = [], []
    while p.ts.peek().kind != "EOF":
        start = p.ts.pos
        try:
            statements.append(p.statement())
        except DSLSyntaxError as e:
            diags.append(Diagnostic("syntax", e.message, e.line, e.col, e.expected,
                                    (e.line, e.col, None, None)))
            if p.ts.pos == start and not p.ts.at(";"):
                p.ts.next()
            _recover(p.ts)
    session = Session(tuple(statements))
    diags.extend(check_bindings(session))
    return session, diags


def parse_session(text):
    """Parse a session; raises :class:`SessionSyntaxError` carrying every diagnostic."""
    session, diags = parse_session_recover(text)
    if diags:
        raise SessionSyntaxError(diags)
    return session


def check_bindings(session, known=None):
    """Names defined before use, one definition per name, kinds respected."""
    kinds = dict(known or {})
    diags = []

    def err(st, msg):
        line, col = st.span[0], st.span[1]
        diags.append(Diagnostic("binding", msg, line, col, (), st.span))

    def need(st, name, kind):
        if name not in kinds:
            err(st, "%r is not defined" % name)
        elif kind and kinds[name] != kind:
            err(st, "%r is a %s, expected a %s" % (name, kinds[name], kind))

    def define(st, name, kind):
        if name in kinds:
            err(st, "%r is already defined" % name)
        else:
            kinds[name] = kind

    for st in session.statements:
        if isinstance(st, RingDef):
            if isinstance(st.base, str):
                need(st, st.base, "ring")
            define(st, st.name, "ring")
        elif isinstance(st, LocalizeDef):
            need(st, st.ring, "ring")
            define(st, st.name, "ring")
        elif isinstance(st, HomDef):
            need(st, st.source, "ring")
            need(st, st.target, "ring")
            define(st, st.name, "hom")
        elif isinstance(st, ModuleDef):
            need(st, st.ring, "ring")
            define(st, st.name, "module")
        elif isinstance(st, TowerDef):
            need(st, st.base, "ring")
            for lv in st.levels:
                need(st, lv, "ring")
            define(st, st.name, "tower")
        elif isinstance(st, Command):
            names = [a for a in st.args if isinstance(a, str)]
            if st.verb == "check":
                continue
            for a, kind in zip(names, NAME_KINDS[st.verb]):
                need(st, a, kind)
            for a in st.args:
                if isinstance(a, Arrow):
                    need(st, a.source, "ring")
                    need(st, a.target, "ring")
    return diags
