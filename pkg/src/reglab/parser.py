"""Recursive-descent parser for polynomials, rational functions and maps.

Grammar::

    input    := map | ratfunc
    map      := '(' ratfunc (',' ratfunc)+ ')'
    ratfunc  := expr ('/' expr)?
    expr     := term (('+' | '-') term)*
    term     := unary ('*' unary)*
    unary    := '-' unary | factor
    factor   := base ('^' uint)?
    base     := identifier | rational | '(' expr ')'
    rational := int | int '/' int      (no spaces around the slash)

Implicit multiplication is rejected.  A leading minus is accepted so the
printed forms of negative polynomials parse back.
"""

import re
from fractions import Fraction

from .maps import PolyMap
from .mpoly import MPoly
from .ratfunc import RatFunc, reduce

_TOKEN = re.compile(r"\s*(?:(\d+/\d+)|(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


class ParseError(ValueError):
    def __init__(self, message, offset):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


def tokenize(text):
    """``(kind, value, offset)`` triples; kinds are rat, int, ident, op, end."""
    out = []
    pos = 0
    while True:
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        start = m.start(m.lastindex)
        kind = ("rat", "int", "ident", "op")[m.lastindex - 1]
        out.append((kind, m.group(m.lastindex), start))
        pos = m.end()
    if text[pos:].strip():
        raise ParseError("unexpected character", pos)
    out.append(("end", "", len(text.rstrip()) if text.strip() else 0))
    return out


class _Parser:
    def __init__(self, tokens, vars):
        self.tokens = tokens
        self.i = 0
        self.vars = vars

    @property
    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, v, off = self.take()
        if v != value or kind != "op":
            raise ParseError(f"expected '{value}'", off)

    def fail(self, message):
        raise ParseError(message, self.peek[2])

    def ratfunc(self):
        num = self.expr()
        kind, v, off = self.peek
        if kind == "op" and v == "/":
            self.take()
            den = self.expr()
            if den.is_zero():
                raise ParseError("zero denominator", off)
            return reduce(num, den)
        return num

    def expr(self):
        acc = self.term()
        while self.peek[0] == "op" and self.peek[1] in "+-":
            op = self.take()[1]
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self):
        acc = self.unary()
        while self.peek[0] == "op" and self.peek[1] == "*":
            self.take()
            acc = acc * self.unary()
        return acc

    def unary(self):
        if self.peek[0] == "op" and self.peek[1] == "-":
            self.take()
            return -self.unary()
        return self.factor()

    def factor(self):
        b = self.base()
        if self.peek[0] == "op" and self.peek[1] == "^":
            self.take()
            kind, v, off = self.take()
            if kind != "int":
                raise ParseError("expected a nonnegative integer exponent", off)
            b = b ** int(v)
        return b

    def base(self):
        kind, v, off = self.peek
        if kind == "ident":
            self.take()
            return MPoly.var(v, self.vars)
        if kind in ("int", "rat"):
            self.take()
            return MPoly.const(Fraction(v), self.vars)
        if kind == "op" and v == "(":
            self.take()
            inner = self.expr()
            self.expect(")")
            return inner
        if kind == "end":
            raise ParseError("unexpected end of input", off)
        raise ParseError(f"unexpected '{v}'", off)


def _variables(tokens, vars):
    found = sorted({v for kind, v, _ in tokens if kind == "ident"})
    if vars is None:
        return tuple(found)
    vars = tuple(vars)
    extra = [v for v in found if v not in vars]
    if extra:
        off = next(o for kind, v, o in tokens if kind == "ident" and v == extra[0])
        raise ParseError(f"unknown variable '{extra[0]}'", off)
    return vars


def _try_map(tokens, vars):
    if tokens[0][1] != "(" or tokens[0][0] != "op":
        return None
    p = _Parser(tokens, vars)
    p.take()
    comps = [p.ratfunc()]
    while p.peek[0] == "op" and p.peek[1] == ",":
        p.take()
        comps.append(p.ratfunc())
    if len(comps) < 2:
        return None
    p.expect(")")
    if p.peek[0] != "end":
        p.fail("trailing input after map")
    return comps


def parse_expression(text, vars=None):
    """Parse ``text`` into an ``MPoly``, a ``RatFunc`` or a ``PolyMap``.

    Variables are the sorted identifiers unless ``vars`` fixes them.
    """
    tokens = tokenize(text)
    vars = _variables(tokens, vars)
    comps = None
    try:
        comps = _try_map(tokens, vars)
    except ParseError:
        # a leading parenthesis may also open an ordinary expression
        comps = None
        if _has_top_level_comma(tokens):
            raise
    if comps is not None:
        return PolyMap(vars, comps)
    p = _Parser(tokens, vars)
    result = p.ratfunc()
    if p.peek[0] != "end":
        p.fail(f"unexpected '{p.peek[1]}'")
    return result


def _has_top_level_comma(tokens):
    depth = 0
    for kind, v, _ in tokens:
        if kind != "op":
            continue
        if v == "(":
            depth += 1
        elif v == ")":
            depth -= 1
        elif v == "," and depth == 1:
            return True
    return False


def parse_ratfunc(text, vars=None):
    """Parse a rational function (polynomials are promoted)."""
    out = parse_expression(text, vars)
    if isinstance(out, PolyMap):
        raise ParseError("expected a rational function, got a map", 0)
    return out if isinstance(out, RatFunc) else RatFunc.from_poly(out)


def parse_point(text):
    """A point written as a parenthesized list of rationals, e.g. ``(1/2, -3)``."""
    out = parse_expression(text, vars=())
    comps = out.components if isinstance(out, PolyMap) else [out]
    values = []
    for c in comps:
        if isinstance(c, RatFunc):
            if not (c.num.is_constant() and c.den.is_constant()):
                raise ParseError("point coordinates must be constants", 0)
            values.append(c.num.constant_value() / c.den.constant_value())
        else:
            values.append(c.constant_value())
    return tuple(values)


def to_text(obj):
    """Canonical printed form; ``parse_expression(to_text(x)) == x``."""
    if isinstance(obj, PolyMap):
        return "(" + ", ".join(str(c) for c in obj.components) + ")"
    return str(obj)
