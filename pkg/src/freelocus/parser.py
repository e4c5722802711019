"""Expression grammar for free polynomials and matrix polynomials.

    expr    := ['+'|'-'] term (('+'|'-') term)*
    term    := postfix ('*'? postfix)*          juxtaposition multiplies
    postfix := primary ("'" | '^' INT)*         apostrophe is the adjoint
    primary := NUMBER | 'i' | VAR | '(' expr ')' | '[' row (';' row)* ']'
    row     := expr (',' expr)*

NUMBER is an integer or a fraction a/b; VAR is x<k>, bare x (= x1) or y.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .freealg import MatrixPoly, Poly, Y, as_matrix_poly, letter, letter_str
from .scalars import I, Gaussian, as_scalar, format_scalar


class ParseError(SyntaxError):
    def __init__(self, msg, pos):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


class UnknownVariable(ParseError):
    pass


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<var>x\d*|y)|(?P<i>i)|(?P<op>[-+*^'()\[\],;])|(?P<bad>\S))"
)
_NORMALIZE = {"−": "-", "’": "'", "·": "*", "⋅": "*", "′": "'"}


@dataclass
class Tok:
    kind: str
    text: str
    pos: int


def tokenize(text):
    for a, b in _NORMALIZE.items():
        text = text.replace(a, b)
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        kind = m.lastgroup
        if kind == "bad":
            ch = m.group("bad")
            if ch.isalpha():
                raise UnknownVariable(f"unknown identifier {ch!r}", m.start("bad"))
            raise ParseError(f"unexpected character {ch!r}", m.start("bad"))
        toks.append(Tok(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    toks.append(Tok("end", "", len(text)))
    return toks


# AST nodes -------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: object


@dataclass(frozen=True)
class Var:
    code: int


@dataclass(frozen=True)
class Add:
    items: tuple  # (sign, node)


@dataclass(frozen=True)
class Mul:
    items: tuple


@dataclass(frozen=True)
class Pow:
    base: object
    k: int


@dataclass(frozen=True)
class Adj:
    base: object


@dataclass(frozen=True)
class Mat:
    rows: tuple


class _Parser:
    def __init__(self, text):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def eat(self, text=None, kind=None):
        t = self.tok
        if (text is not None and t.text != text) or (kind is not None and t.kind != kind):
            want = text or kind
            raise ParseError(f"expected {want!r}, found {t.text or 'end of input'!r}", t.pos)
        self.i += 1
        return t

    def parse(self):
        node = self.expr()
        if self.tok.kind != "end":
            raise ParseError(f"unexpected {self.tok.text!r}", self.tok.pos)
        return node

    def expr(self):
        items = []
        sign = 1
        if self.tok.text in "+-" and self.tok.kind == "op":
            sign = -1 if self.eat().text == "-" else 1
        items.append((sign, self.term()))
        while self.tok.kind == "op" and self.tok.text in ("+", "-"):
            sign = -1 if self.eat().text == "-" else 1
            items.append((sign, self.term()))
        if len(items) == 1 and items[0][0] == 1:
            return items[0][1]
        return Add(tuple(items))

    def _starts_primary(self):
        t = self.tok
        return t.kind in ("num", "var", "i") or t.text in ("(", "[")

    def term(self):
        items = [self.postfix()]
        while True:
            if self.tok.kind == "op" and self.tok.text == "*":
                self.eat()
                items.append(self.postfix())
            elif self._starts_primary():
                items.append(self.postfix())
            else:
                break
        return items[0] if len(items) == 1 else Mul(tuple(items))

    def postfix(self):
        node = self.primary()
        while self.tok.kind == "op" and self.tok.text in ("'", "^"):
            if self.eat().text == "'":
                node = Adj(node)
            else:
                t = self.eat(kind="num")
                if "/" in t.text:
                    raise ParseError("exponent must be a nonnegative integer", t.pos)
                node = Pow(node, int(t.text))
        return node

    def primary(self):
        t = self.tok
        if t.kind == "num":
            self.eat()
            return Num(as_scalar(t.text))
        if t.kind == "i":
            self.eat()
            return Num(I)
        if t.kind == "var":
            self.eat()
            if t.text == "y":
                return Var(Y)
            idx = int(t.text[1:]) if len(t.text) > 1 else 1
            if idx < 1:
                raise UnknownVariable("variable indices start at 1", t.pos)
            return Var(letter(idx))
        if t.text == "(":
            self.eat()
            node = self.expr()
            self.eat(")")
            return node
        if t.text == "[":
            self.eat()
            rows = [[self.expr()]]
            while self.tok.text in (",", ";"):
                if self.eat().text == ",":
                    rows[-1].append(self.expr())
                else:
                    rows.append([self.expr()])
            self.eat("]")
            if len({len(r) for r in rows}) != 1:
                raise ParseError("ragged matrix rows", t.pos)
            return Mat(tuple(tuple(r) for r in rows))
        raise ParseError(f"unexpected {t.text or 'end of input'!r}", t.pos)


def parse_ast(text):
    return _Parser(text).parse()


# lowering ----------------------------------------------------------------------


def _is_mat(v):
    return isinstance(v, MatrixPoly) and v.shape != (1, 1)


def _add(a, b):
    if _is_mat(a) or _is_mat(b):
        return as_matrix_poly(a) + (b if _is_mat(b) else _embed(b, a.nrows)) if _is_mat(a) else _embed(a, b.nrows) + b
    return _as_poly(a) + _as_poly(b)


def _embed(p, n):
    p = _as_poly(p)
    return MatrixPoly([[p if i == j else Poly() for j in range(n)] for i in range(n)])


def _mul(a, b):
    if _is_mat(a) and _is_mat(b):
        return a @ b
    if _is_mat(a):
        p = _as_poly(b)
        return a.map_entries(lambda e: e * p)
    if _is_mat(b):
        p = _as_poly(a)
        return b.map_entries(lambda e: p * e)
    return _as_poly(a) * _as_poly(b)


def _as_poly(v):
    if isinstance(v, Poly):
        return v
    if isinstance(v, MatrixPoly):
        return v.entries[0][0]
    return Poly.const(v)


def lower(node):
    if isinstance(node, Num):
        return Poly.const(node.value)
    if isinstance(node, Var):
        return Poly.monomial((node.code,))
    if isinstance(node, Add):
        acc = Poly()
        for sign, item in node.items:
            v = lower(item)
            acc = _add(acc, v if sign > 0 else _neg(v))
        return acc
    if isinstance(node, Mul):
        acc = lower(node.items[0])
        for item in node.items[1:]:
            acc = _mul(acc, lower(item))
        return acc
    if isinstance(node, Pow):
        base = lower(node.base)
        acc = _embed(Poly.const(1), base.nrows) if _is_mat(base) else Poly.const(1)
        for _ in range(node.k):
            acc = _mul(acc, base)
        return acc
    if isinstance(node, Adj):
        return lower(node.base).star()
    if isinstance(node, Mat):
        rows = [[lower(e) for e in r] for r in node.rows]
        if any(_is_mat(e) for r in rows for e in r):
            raise ParseError("matrix entries must be scalar polynomials", 0)
        return MatrixPoly([[_as_poly(e) for e in r] for r in rows])
    raise TypeError(node)


def _neg(v):
    return -v


def parse(text):
    """Parse into a Poly (scalar) or MatrixPoly (bracketed input)."""
    return lower(parse_ast(text))


def parse_matrix_poly(text):
    return as_matrix_poly(parse(text))


# printing ----------------------------------------------------------------------


def _coef_text(c):
    """Text for |c| with the sign pulled out; returns (sign, text)."""
    c = as_scalar(c)
    if isinstance(c, Gaussian):
        if c.re == 0:
            sign = -1 if c.im < 0 else 1
            mag = abs(c.im)
            return sign, "i" if mag == 1 else format_scalar(mag) + " i"
        return 1, "(" + format_scalar(c) + ")"
    sign = -1 if c < 0 else 1
    return sign, format_scalar(abs(c))


def poly_text(p):
    if not p.terms:
        return "0"
    parts = []
    for w, c in p.sorted_terms():
        sign, ct = _coef_text(c)
        word = " ".join(letter_str(a) for a in w)
        if not w:
            body = ct
        elif ct == "1":
            body = word
        else:
            body = f"{ct} {word}"
        if not parts:
            parts.append(("-" if sign < 0 else "") + body)
        else:
            parts.append(("- " if sign < 0 else "+ ") + body)
    return " ".join(parts)


def to_text(f):
    """Inverse of :func:`parse` up to polynomial equality."""
    if isinstance(f, MatrixPoly):
        if f.shape == (1, 1):
            return poly_text(f.entries[0][0])
        return "[" + "; ".join(", ".join(poly_text(e) for e in r) for r in f.entries) + "]"
    if isinstance(f, Poly):
        return poly_text(f)
    return format_scalar(f)
