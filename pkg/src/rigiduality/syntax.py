"""Lexer and polynomial-expression grammar shared by rings and the session DSL.

Expression precedence: ``^`` binds tighter than ``*``/``/``, which bind
tighter than binary ``+``/``-``.  ``a/b`` with integer literals is a
rational literal; division by a non-constant is allowed only when the
divisor is inverted in the ambient algebra.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .polyring import RingError


class DSLSyntaxError(RingError):
    """Lexical or syntactic error with a source location."""

    def __init__(self, message, line, col, expected=()):
        self.message = message
        self.line = line
        self.col = col
        self.expected = tuple(expected)
        text = "%d:%d: %s" % (line, col, message)
        if expected:
            text += " (expected %s)" % " or ".join(repr(e) for e in expected)
        super().__init__(text)


@dataclass(frozen=True)
class Token:
    kind: str  # NUMBER, IDENT, SYM, EOF
    value: str
    line: int
    col: int
    start: int
    end: int


_SYMBOLS = ("->", "+", "-", "*", "/", "^", "(", ")", "[", "]", ",", ";", "=", ":", "<", "{", "}", "|")
_DASHED_WORDS = ("etale-pairing",)


def tokenize(text):
    tokens = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        start, scol = i, col
        if ch.isdigit():
            while i < n and text[i].isdigit():
                i += 1
            tokens.append(Token("NUMBER", text[start:i], line, scol, start, i))
        elif ch.isalpha() or ch == "_":
            word = next((w for w in _DASHED_WORDS if text.startswith(w, i)), None)
            if word:
                i += len(word)
            else:
                while i < n and (text[i].isalnum() or text[i] == "_"):
                    i += 1
            tokens.append(Token("IDENT", text[start:i], line, scol, start, i))
        else:
            sym = next((s for s in _SYMBOLS if text.startswith(s, i)), None)
            if sym is None:
                raise DSLSyntaxError("unexpected character %r" % ch, line, col)
            i += len(sym)
            tokens.append(Token("SYM", sym, line, scol, start, i))
        col += i - start
    tokens.append(Token("EOF", "", line, col, n, n))
    return tokens


# ---------------------------------------------------------------------------
# expression AST
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: int
    span: tuple = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Var:
    name: str
    span: tuple = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Neg:
    operand: object
    span: tuple = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object
    span: tuple = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Pow:
    base: object
    exp: int
    span: tuple = field(default=None, compare=False, repr=False)


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def format_expr(node, parent=0):
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        s = "-" + format_expr(node.operand, 3)
        return "(%s)" % s if parent > 1 else s
    if isinstance(node, Pow):
        base = format_expr(node.base, 4)
        if isinstance(node.base, Pow):
            base = "(%s)" % base
        return "%s^%d" % (base, node.exp)
    prec = _PREC[node.op]
    left = format_expr(node.left, prec)
    right = format_expr(node.right, prec + 1)
    if node.op in "+-":
        s = "%s %s %s" % (left, node.op, right)
    else:
        s = "%s%s%s" % (left, node.op, right)
    return "(%s)" % s if parent > prec else s


class TokenStream:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self, k=0):
        return self.tokens[min(self.pos + k, len(self.tokens) - 1)]

    def next(self):
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def at(self, value, kind=None):
        tok = self.peek()
        return tok.value == value and (kind is None or tok.kind == kind) and tok.kind != "EOF"

    def accept(self, value):
        if self.at(value):
            return self.next()
        return None

    def expect(self, *values):
        tok = self.peek()
        if tok.value in values and tok.kind != "EOF":
            return self.next()
        found = "end of input" if tok.kind == "EOF" else repr(tok.value)
        raise DSLSyntaxError("unexpected %s" % found, tok.line, tok.col, values)

    def expect_kind(self, kind, what=None):
        tok = self.peek()
        if tok.kind == kind:
            return self.next()
        found = "end of input" if tok.kind == "EOF" else repr(tok.value)
        raise DSLSyntaxError("unexpected %s" % found, tok.line, tok.col, (what or kind,))


def _span(start_tok, end_tok):
    return (start_tok.line, start_tok.col, start_tok.start, end_tok.end)


def parse_expr(ts):
    first = ts.peek()
    node = _parse_term(ts)
    while ts.peek().kind == "SYM" and ts.peek().value in ("+", "-"):
        op = ts.next().value
        right = _parse_term(ts)
        node = BinOp(op, node, right, _span(first, ts.tokens[ts.pos - 1]))
    return node


def _parse_term(ts):
    first = ts.peek()
    node = _parse_unary(ts)
    while ts.peek().kind == "SYM" and ts.peek().value in ("*", "/"):
        op = ts.next().value
        right = _parse_unary(ts)
        node = BinOp(op, node, right, _span(first, ts.tokens[ts.pos - 1]))
    return node


def _parse_unary(ts):
    first = ts.peek()
    if ts.accept("-"):
        operand = _parse_unary(ts)
        return Neg(operand, _span(first, ts.tokens[ts.pos - 1]))
    if ts.accept("+"):
        return _parse_unary(ts)
    return _parse_power(ts)


def _parse_power(ts):
    first = ts.peek()
    base = _parse_atom(ts)
    if ts.accept("^"):
        sign = -1 if ts.accept("-") else 1
        tok = ts.expect_kind("NUMBER", "exponent")
        return Pow(base, sign * int(tok.value), _span(first, tok))
    return base


def _parse_atom(ts):
    tok = ts.peek()
    if tok.kind == "NUMBER":
        ts.next()
        return Num(int(tok.value), _span(tok, tok))
    if tok.kind == "IDENT":
        ts.next()
        return Var(tok.value, _span(tok, tok))
    if ts.accept("("):
        node = parse_expr(ts)
        ts.expect(")")
        return node
    found = "end of input" if tok.kind == "EOF" else repr(tok.value)
    raise DSLSyntaxError("unexpected %s in expression" % found, tok.line, tok.col,
                         ("number", "variable", "("))


def parse_poly_expr(text):
    ts = TokenStream(tokenize(text))
    node = parse_expr(ts)
    if ts.peek().kind != "EOF":
        tok = ts.peek()
        raise DSLSyntaxError("trailing input %r" % tok.value, tok.line, tok.col, ("end of input",))
    return node


def eval_expr(node, ring, invert=None, names=None):
    """Evaluate an expression AST in ``ring``.

    ``invert(p)`` returns an inverse of ``p`` or raises; it backs ``/`` by
    non-constants and negative powers.  ``names`` maps extra identifiers
    to ready-made polynomials.
    """
    def ev(n):
        if isinstance(n, Num):
            return ring(n.value)
        if isinstance(n, Var):
            if names and n.name in names:
                return names[n.name]
            if n.name not in ring.vars or n.name.startswith("_"):
                raise RingError("unknown variable %r" % n.name)
            return ring.gen(n.name)
        if isinstance(n, Neg):
            return -ev(n.operand)
        if isinstance(n, Pow):
            b = ev(n.base)
            if n.exp >= 0:
                return b ** n.exp
            return _inverse(b) ** (-n.exp)
        a, b = ev(n.left), ev(n.right)
        if n.op == "+":
            return a + b
        if n.op == "-":
            return a - b
        if n.op == "*":
            return a * b
        if b.is_constant():
            if not b:
                raise RingError("division by zero")
            return a.scale(1 / b.lc())
        return a * _inverse(b)

    def _inverse(b):
        if b.is_constant() and b:
            return ring(1 / b.lc())
        if invert is None:
            raise RingError("%s is not invertible here" % b)
        return invert(b)

    return ev(node)
