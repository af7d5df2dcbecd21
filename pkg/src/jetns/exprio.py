"""Text grammar, parser and printer for expressions and tuples.

Grammar (whitespace-insensitive, LL(1)):

    expr     := ['-'] term (('+'|'-') term)*
    term     := factor ('*' factor)*
    factor   := base ('^' nat)?
    base     := rational | 'nu' | 't' | 'x' nat
              | 'u' nat '_[' nat (',' nat)* ']'
              | 'p_[' nat (',' nat)* ']'
              | '(' expr ')'
    rational := int ('/' nat)?

Tuples use named components separated by ';', e.g.

    f1: u1_[1,0,0]; f2: u2_[1,0,0]; f3: u3_[1,0,0]; f: p_[1,0,0]

Component names: f1..fm and f for characteristics and cotuples, j1..jm
for currents, chi01 / chi[a,i1] / chi[i1] for the continuity tuple shape
and chi01 / chi[a,i1] / chi0 / chi1 for the joint shape.  Missing
components default to zero.

The structured serialization mirrors the canonical monomial map: a list
of records with integer numerator and denominator and a factor list of
(variable label, exponent) pairs, in canonical order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .evolutionary import Characteristic
from .jetalgebra import (
    Expr,
    JetVariable,
    Monomial,
    NU_VAR,
    T_VAR,
    _raw,
    pvar,
    uvar,
    xvar,
)
from .multiindex import MultiIndex
from .reducedcomplex import ChiTupleCE, ChiTupleCPE
from .variational import Cotuple, CurrentTuple


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int


class ExprSyntaxError(ValueError):
    def __init__(self, message: str, span: SourceSpan):
        super().__init__(f"{message} at {span.start}..{span.end}")
        self.message = message
        self.span = span


@dataclass(frozen=True)
class _Token:
    kind: str  # 'num', 'word', or a literal symbol
    text: str
    span: SourceSpan


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    n = len(text)
    while pos < n:
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        if ch.isdigit():
            end = pos
            while end < n and text[end].isdigit():
                end += 1
            tokens.append(_Token("num", text[pos:end], SourceSpan(pos, end)))
            pos = end
            continue
        if ch.isalpha():
            end = pos
            while end < n and text[end].isalpha():
                end += 1
            tokens.append(_Token("word", text[pos:end], SourceSpan(pos, end)))
            pos = end
            continue
        if ch in "+-*/^()[],_":
            tokens.append(_Token(ch, ch, SourceSpan(pos, pos + 1)))
            pos += 1
            continue
        raise ExprSyntaxError(f"unexpected character {ch!r}", SourceSpan(pos, pos + 1))
    tokens.append(_Token("end", "", SourceSpan(n, n)))
    return tokens


class _Parser:
    def __init__(self, text: str, m: int):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.m = m

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ExprSyntaxError(
                f"expected {kind!r}, found {tok.text or 'end of input'!r}", tok.span
            )
        return self.advance()

    def parse_expr(self) -> Expr:
        negate = False
        if self.peek().kind == "-":
            self.advance()
            negate = True
        result = self.parse_term()
        if negate:
            result = -result
        while self.peek().kind in ("+", "-"):
            op = self.advance()
            term = self.parse_term()
            result = result + term if op.kind == "+" else result - term
        return result

    def parse_term(self) -> Expr:
        result = self.parse_factor()
        while self.peek().kind == "*":
            self.advance()
            result = result * self.parse_factor()
        return result

    def parse_factor(self) -> Expr:
        base = self.parse_base()
        if self.peek().kind == "^":
            self.advance()
            tok = self.expect("num")
            return base ** int(tok.text)
        return base

    def parse_base(self) -> Expr:
        tok = self.peek()
        if tok.kind == "num":
            self.advance()
            value = Fraction(int(tok.text))
            if self.peek().kind == "/":
                self.advance()
                den = self.expect("num")
                if int(den.text) == 0:
                    raise ExprSyntaxError("zero denominator", den.span)
                value = value / int(den.text)
            return Expr.const(value)
        if tok.kind == "(":
            self.advance()
            inner = self.parse_expr()
            self.expect(")")
            return inner
        if tok.kind == "word":
            return self.parse_symbol()
        raise ExprSyntaxError(
            f"expected a factor, found {tok.text or 'end of input'!r}", tok.span
        )

    def parse_symbol(self) -> Expr:
        tok = self.advance()
        word = tok.text
        if word == "nu":
            return Expr.var(NU_VAR)
        if word == "t":
            return Expr.var(T_VAR)
        if word == "x":
            num = self.expect("num")
            return Expr.var(xvar(self._component(num)))
        if word == "u":
            num = self.expect("num")
            mu = self._component(num)
            index = self.parse_index()
            return Expr.var(uvar(mu, index))
        if word == "p":
            index = self.parse_index()
            return Expr.var(pvar(index))
        raise ExprSyntaxError(f"unknown symbol {word!r}", tok.span)

    def _component(self, tok: _Token) -> int:
        mu = int(tok.text)
        if not 1 <= mu <= self.m:
            raise ExprSyntaxError(
                f"component {mu} out of range 1..{self.m}", tok.span
            )
        return mu

    def parse_index(self) -> MultiIndex:
        self.expect("_")
        open_tok = self.expect("[")
        entries = []
        while True:
            tok = self.peek()
            if tok.kind == "-":
                raise ExprSyntaxError("negative index entry", tok.span)
            num = self.expect("num")
            entries.append(int(num.text))
            if self.peek().kind == ",":
                self.advance()
                continue
            close = self.expect("]")
            break
        if len(entries) != self.m:
            raise ExprSyntaxError(
                f"index has {len(entries)} entries, dimension is {self.m}",
                SourceSpan(open_tok.span.start, close.span.end),
            )
        return MultiIndex(tuple(entries))

    def finish(self) -> None:
        tok = self.peek()
        if tok.kind != "end":
            raise ExprSyntaxError(f"trailing input {tok.text!r}", tok.span)


def parse_expr(text: str, m: int) -> Expr:
    parser = _Parser(text, m)
    result = parser.parse_expr()
    parser.finish()
    return result


def print_expr(f: Expr) -> str:
    """Deterministic canonical rendering; inverse of parse_expr."""
    return str(f)


# -- tuples -----------------------------------------------------------------

_CHI_NAME = re.compile(r"^chi\[(\d+)(?:,(\d+))?\]$")

SHAPES = ("characteristic", "cotuple", "current", "chi_ce", "chi_cpe")


def parse_tuple(text: str, shape: str, m: int):
    if shape not in SHAPES:
        raise ValueError(f"unknown tuple shape {shape!r}")
    components: dict[str, Expr] = {}
    offset = 0
    for part in text.split(";"):
        stripped = part.strip()
        if not stripped:
            offset += len(part) + 1
            continue
        if ":" not in part:
            raise ExprSyntaxError(
                "expected 'name: expression'",
                SourceSpan(offset, offset + len(part)),
            )
        name_text, expr_text = part.split(":", 1)
        name = name_text.strip()
        span = SourceSpan(offset, offset + len(name_text))
        if name in components:
            raise ExprSyntaxError(f"duplicate component {name!r}", span)
        _validate_component(name, shape, m, span)
        components[name] = parse_expr(expr_text, m)
        offset += len(part) + 1
    return _build_tuple(components, shape, m)


def _validate_component(name: str, shape: str, m: int, span: SourceSpan) -> None:
    if shape in ("characteristic", "cotuple"):
        if name == "f" or (
            name.startswith("f") and name[1:].isdigit() and 1 <= int(name[1:]) <= m
        ):
            return
    elif shape == "current":
        if name.startswith("j") and name[1:].isdigit() and 1 <= int(name[1:]) <= m:
            return
    else:
        if name == "chi01":
            return
        if shape == "chi_cpe" and name in ("chi0", "chi1"):
            return
        match = _CHI_NAME.match(name)
        if match:
            if match.group(2) is None:
                if shape == "chi_ce":
                    return
            else:
                a = int(match.group(1))
                if 2 <= a <= m:
                    return
                raise ExprSyntaxError(
                    f"velocity component {a} out of range 2..{m}", span
                )
    raise ExprSyntaxError(f"unknown component {name!r} for shape {shape}", span)


def _build_tuple(components: dict[str, Expr], shape: str, m: int):
    def get(name: str) -> Expr:
        return components.get(name, Expr.zero())

    if shape in ("characteristic", "cotuple"):
        velocity = tuple(get(f"f{mu}") for mu in range(1, m + 1))
        if shape == "characteristic":
            return Characteristic(velocity, get("f"))
        return Cotuple(velocity, get("f"))
    if shape == "current":
        return CurrentTuple(tuple(get(f"j{mu}") for mu in range(1, m + 1)))
    chi_alpha: dict[tuple[int, int], Expr] = {}
    chi_p: dict[int, Expr] = {}
    for name, expr in components.items():
        match = _CHI_NAME.match(name)
        if not match:
            continue
        if match.group(2) is None:
            chi_p[int(match.group(1))] = expr
        else:
            chi_alpha[(int(match.group(2)), int(match.group(1)))] = expr
    if shape == "chi_ce":
        return ChiTupleCE(get("chi01"), chi_alpha, chi_p)
    return ChiTupleCPE(get("chi01"), chi_alpha, get("chi0"), get("chi1"))


def print_tuple(value) -> str:
    """Canonical tuple rendering; inverse of parse_tuple for its shape."""
    if isinstance(value, Characteristic) or isinstance(value, Cotuple):
        parts = [
            f"f{mu}: {value.velocity[mu - 1]}" for mu in range(1, value.m + 1)
        ]
        parts.append(f"f: {value.pressure}")
        return "; ".join(parts)
    if isinstance(value, CurrentTuple):
        return "; ".join(
            f"j{mu}: {comp}" for mu, comp in enumerate(value.components, start=1)
        )
    if isinstance(value, (ChiTupleCE, ChiTupleCPE)):
        parts = []
        if not value.chi01.is_zero():
            parts.append(f"chi01: {value.chi01}")
        for (i1, a) in sorted(value.chi_alpha):
            parts.append(f"chi[{a},{i1}]: {value.chi_alpha[(i1, a)]}")
        if isinstance(value, ChiTupleCE):
            for i1 in sorted(value.chi_p):
                parts.append(f"chi[{i1}]: {value.chi_p[i1]}")
        else:
            if not value.chi0.is_zero():
                parts.append(f"chi0: {value.chi0}")
            if not value.chi1.is_zero():
                parts.append(f"chi1: {value.chi1}")
        return "; ".join(parts) if parts else "chi01: 0"
    raise TypeError(f"cannot print value of type {type(value).__name__}")


def tuple_shape(value) -> str:
    if isinstance(value, Characteristic):
        return "characteristic"
    if isinstance(value, Cotuple):
        return "cotuple"
    if isinstance(value, CurrentTuple):
        return "current"
    if isinstance(value, ChiTupleCE):
        return "chi_ce"
    if isinstance(value, ChiTupleCPE):
        return "chi_cpe"
    raise TypeError(f"no tuple shape for {type(value).__name__}")


# -- structured serialization ------------------------------------------------


def expr_to_records(f: Expr) -> list[dict]:
    records = []
    for mono, coeff in f.items():
        records.append(
            {
                "num": coeff.numerator,
                "den": coeff.denominator,
                "factors": [[v.label(), e] for v, e in mono],
            }
        )
    return records


def variable_from_label(label: str, m: int) -> JetVariable:
    expr = parse_expr(label, m)
    items = expr.items()
    if len(items) != 1 or items[0][1] != 1 or len(items[0][0]) != 1:
        raise ValueError(f"not a variable label: {label!r}")
    (v, e), = items[0][0]
    if e != 1:
        raise ValueError(f"not a variable label: {label!r}")
    return v


def records_to_expr(records: list[dict], m: int) -> Expr:
    terms: dict[Monomial, Fraction] = {}
    for record in records:
        coeff = Fraction(int(record["num"]), int(record["den"]))
        factors = tuple(
            (variable_from_label(label, m), int(e)) for label, e in record["factors"]
        )
        factors = tuple(sorted(factors, key=lambda ve: ve[0].sort_key()))
        terms[factors] = terms.get(factors, Fraction(0)) + coeff
    return _raw({mono: c for mono, c in terms.items() if c != 0})
