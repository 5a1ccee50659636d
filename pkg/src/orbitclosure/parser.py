"""
System-definition files and the expression grammar they use.

    field: QQ            |  field: Fp 1000003
    vars: x, y
    monoid: true
    gen: x, x + y        (one line per generator)
    point a: 2, 1/3

Expressions: integers, variables, + - * / ^ and parentheses; ``^`` binds
tightest and takes a non-negative integer literal. ``#`` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .dynsys import SelfMap, SemigroupSpec
from .exactla import QQ, PrimeField, is_prime
from .poly import Poly, RatFunc


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.message, self.line, self.col = message, line, col
        where = f"line {line}, column {col}: " if line else (f"column {col}: " if col else "")
        super().__init__(where + message)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        if m.group(1) is not None:
            out.append(("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            out.append(("name", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*/^(),":
                raise ParseError(f"unexpected character {ch!r}", col=m.start(3) + 1)
            out.append(("op", ch, m.start(3)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _ExprParser:
    def __init__(self, text, names, fld):
        self.toks = _tokenize(text)
        self.i = 0
        self.index = {n: k for k, n in enumerate(names)}
        self.n = len(names)
        self.field = fld

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, col=tok[2] + 1)

    def parse(self):
        val = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected {self.peek()[1]!r}")
        return val

    def expr(self):
        val = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self):
        val = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            tok = self.take()
            rhs = self.unary()
            if tok[1] == "*":
                val = val * rhs
            else:
                if rhs.is_zero():
                    self.error("denominator is identically zero", tok)
                val = val / rhs
        return val

    def unary(self):
        t = self.peek()
        if t[0] == "op" and t[1] in "+-":
            self.take()
            v = self.unary()
            return -v if t[1] == "-" else v
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            t = self.peek()
            if t[0] != "int":
                self.error("exponent must be a non-negative integer literal")
            self.take()
            base = base ** int(t[1])
            if self.peek()[0] == "op" and self.peek()[1] == "^":
                self.error("chained exponents need parentheses")
        return base

    def atom(self):
        t = self.take()
        if t[0] == "int":
            return RatFunc(Poly.constant(int(t[1]), self.n, self.field))
        if t[0] == "name":
            if t[1] not in self.index:
                self.error(f"unknown identifier {t[1]!r}", t)
            return RatFunc(Poly.var(self.index[t[1]], self.n, self.field))
        if t[0] == "op" and t[1] == "(":
            v = self.expr()
            if self.peek()[1] != ")":
                self.error("expected ')'")
            self.take()
            return v
        self.error("expected a number, variable or '('", t)


def parse_expr(text: str, names, fld=QQ) -> RatFunc:
    return _ExprParser(text, list(names), fld).parse()


def parse_poly(text: str, names, fld=QQ) -> Poly:
    r = parse_expr(text, names, fld)
    if not r.den.is_constant():
        raise ParseError(f"{text!r} is not a polynomial")
    return r.num


def parse_rational(text: str, fld=QQ):
    text = text.strip()
    if not re.fullmatch(r"[+-]?\d+(/\d+)?", text):
        raise ParseError(f"not a rational number: {text!r}")
    q = Fraction(text)
    return fld.convert(q)


def parse_point(text: str, fld=QQ) -> tuple:
    return tuple(parse_rational(c, fld) for c in text.split(","))


def parse_field(text: str):
    t = text.strip()
    if t in ("QQ", "Q"):
        return QQ
    m = re.fullmatch(r"(?:Fp|GF)\s*\(?\s*(\d+)\s*\)?", t)
    if not m:
        raise ParseError(f"unknown field {t!r} (expected QQ or Fp <prime>)")
    p = int(m.group(1))
    if not is_prime(p):
        raise ParseError(f"modulus {p} is not prime")
    return PrimeField(p, check=False)


def _split_top(text: str):
    """Split on commas outside parentheses, returning (piece, offset)."""
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append((text[start:i], start))
            start = i + 1
    parts.append((text[start:], start))
    return parts


@dataclass
class SystemFile:
    field: object
    vars: list
    monoid: bool
    generators: list  # list of lists of RatFunc
    gen_text: list = field(default_factory=list)
    named_points: dict = field(default_factory=dict)

    def spec(self) -> SemigroupSpec:
        return SemigroupSpec([SelfMap(g) for g in self.generators], self.monoid, self.vars)


_KEY = re.compile(r"\s*(field|vars|monoid|gen|point\s+([A-Za-z_][A-Za-z_0-9]*))\s*:")


def parse_system(text: str, field_override=None) -> SystemFile:
    fld = None
    names = None
    monoid = False
    gens, gen_text, points = [], [], {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        m = _KEY.match(line)
        if not m:
            raise ParseError("expected 'field:', 'vars:', 'monoid:', 'gen:' or 'point <name>:'",
                             lineno, len(line) - len(line.lstrip()) + 1)
        key = m.group(1).split()[0]
        body = line[m.end():]
        off = m.end()
        try:
            if key == "field":
                if fld is not None or gens or points:
                    raise ParseError("'field' must come once, before generators and points")
                fld = parse_field(body)
            elif key == "vars":
                names = [v.strip() for v in body.split(",")]
                if not all(re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", v) for v in names):
                    raise ParseError("variables must be identifiers")
                if len(set(names)) != len(names):
                    raise ParseError("duplicate variable name")
            elif key == "monoid":
                v = body.strip().lower()
                if v not in ("true", "false"):
                    raise ParseError("monoid must be true or false")
                monoid = v == "true"
            else:
                if names is None:
                    raise ParseError("'vars' must precede generators and points")
                use = field_override or fld or QQ
                pieces = _split_top(body)
                if len(pieces) != len(names):
                    raise ParseError(f"expected {len(names)} comma-separated entries, got {len(pieces)}")
                if key == "gen":
                    comps = []
                    for piece, o in pieces:
                        try:
                            comps.append(parse_expr(piece, names, use))
                        except ParseError as e:
                            raise ParseError(e.message, lineno, off + o + e.col) from None
                    gens.append(comps)
                    gen_text.append([p.strip() for p, _ in pieces])
                else:
                    name = m.group(2)
                    points[name] = tuple(parse_rational(p, use) for p, _ in pieces)
        except ParseError as e:
            if e.line:
                raise
            raise ParseError(e.message, lineno, e.col or off + 1) from None
        except ZeroDivisionError as e:
            raise ParseError(str(e), lineno, off + 1) from None
    if names is None:
        raise ParseError("missing 'vars:' line")
    if not gens:
        raise ParseError("at least one 'gen:' line is required")
    return SystemFile(field_override or fld or QQ, names, monoid, gens, gen_text, points)
