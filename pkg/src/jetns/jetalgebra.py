"""Canonical polynomial expressions in jet variables.

The function algebra is realized as sparse multivariate polynomials over
exact rationals.  Variables are the space coordinates x^mu, the velocity
jets u^mu indexed by a multi-index, the pressure jets p indexed likewise,
the viscosity symbol nu and the time symbol t.  Only finitely many
variables occur in any expression, monomial maps are kept free of zero
coefficients, and equal expressions have identical internal maps, so zero
testing is decidable and printing is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .multiindex import MultiIndex

_KIND_RANK = {"nu": 0, "t": 1, "x": 2, "u": 3, "p": 4}


@dataclass(frozen=True)
class JetVariable:
    """A single jet coordinate: x^mu, u^mu_i, p_i, nu or t."""

    kind: str
    mu: int = 0
    index: MultiIndex | None = None

    def __post_init__(self) -> None:
        if self.kind not in _KIND_RANK:
            raise ValueError(f"unknown variable kind {self.kind!r}")
        if self.kind in ("x", "u") and self.mu < 1:
            raise ValueError(f"component index must be >= 1, got {self.mu}")
        if self.kind in ("u", "p") and self.index is None:
            raise ValueError(f"{self.kind}-variable requires a multi-index")
        if self.kind in ("x", "nu", "t") and self.index is not None:
            raise ValueError(f"{self.kind}-variable carries no multi-index")

    def sort_key(self):
        rank = _KIND_RANK[self.kind]
        if self.kind == "u":
            return (rank, self.mu, self.index.sort_key())
        if self.kind == "p":
            return (rank, 0, self.index.sort_key())
        return (rank, self.mu, ((), ()))

    def label(self) -> str:
        """Token form used by the expression grammar."""
        if self.kind == "x":
            return f"x{self.mu}"
        if self.kind == "u":
            return f"u{self.mu}_{self.index}"
        if self.kind == "p":
            return f"p_{self.index}"
        return self.kind

    def __str__(self) -> str:
        return self.label()


def xvar(mu: int) -> JetVariable:
    return JetVariable("x", mu)


def uvar(mu: int, index) -> JetVariable:
    return JetVariable("u", mu, _as_index(index))


def pvar(index) -> JetVariable:
    return JetVariable("p", 0, _as_index(index))


NU_VAR = JetVariable("nu")
T_VAR = JetVariable("t")


def _as_index(index) -> MultiIndex:
    return index if isinstance(index, MultiIndex) else MultiIndex(tuple(index))


# A monomial is a sorted tuple of (variable, exponent) pairs, exponent >= 1.
Monomial = tuple[tuple[JetVariable, int], ...]

_ONE_MONOMIAL: Monomial = ()


def _monomial_key(mono: Monomial):
    degree = sum(e for _, e in mono)
    return (degree, tuple((v.sort_key(), e) for v, e in mono))


class Expr:
    """A polynomial in canonical form: a map from monomials to rationals."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Monomial, Fraction] | None = None):
        data: dict[Monomial, Fraction] = {}
        if terms:
            for mono, coeff in terms.items():
                c = Fraction(coeff)
                if c != 0:
                    data[mono] = c
        self._terms = data

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero() -> Expr:
        return Expr()

    @staticmethod
    def const(value) -> Expr:
        c = Fraction(value)
        return Expr({_ONE_MONOMIAL: c}) if c != 0 else Expr()

    @staticmethod
    def var(v: JetVariable) -> Expr:
        return Expr({((v, 1),): Fraction(1)})

    # -- inspection ---------------------------------------------------

    def is_zero(self) -> bool:
        return not self._terms

    def items(self) -> list[tuple[Monomial, Fraction]]:
        """Monomial/coefficient pairs in canonical order."""
        return sorted(self._terms.items(), key=lambda kv: _monomial_key(kv[0]))

    def variables(self) -> list[JetVariable]:
        """Distinct variables occurring, in canonical order."""
        seen = {v for mono in self._terms for v, _ in mono}
        return sorted(seen, key=JetVariable.sort_key)

    def coefficient(self, mono: Monomial) -> Fraction:
        return self._terms.get(mono, Fraction(0))

    def constant_value(self) -> Fraction | None:
        """The rational value when the expression is constant, else None."""
        if not self._terms:
            return Fraction(0)
        if len(self._terms) == 1 and _ONE_MONOMIAL in self._terms:
            return self._terms[_ONE_MONOMIAL]
        return None

    def orders(self) -> tuple[int | None, int | None]:
        """(u-order, p-order): maximal |i| among occurring u/p jets, or None."""
        u_order: int | None = None
        p_order: int | None = None
        for v in {v for mono in self._terms for v, _ in mono}:
            if v.kind == "u":
                u_order = v.index.total if u_order is None else max(u_order, v.index.total)
            elif v.kind == "p":
                p_order = v.index.total if p_order is None else max(p_order, v.index.total)
        return (u_order, p_order)

    # -- ring operations ----------------------------------------------

    def __add__(self, other) -> Expr:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        data = dict(self._terms)
        for mono, coeff in other._terms.items():
            new = data.get(mono, Fraction(0)) + coeff
            if new == 0:
                data.pop(mono, None)
            else:
                data[mono] = new
        return _raw(data)

    __radd__ = __add__

    def __neg__(self) -> Expr:
        return _raw({mono: -c for mono, c in self._terms.items()})

    def __sub__(self, other) -> Expr:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> Expr:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> Expr:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        data: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                mono = _merge_monomials(m1, m2)
                new = data.get(mono, Fraction(0)) + c1 * c2
                if new == 0:
                    data.pop(mono, None)
                else:
                    data[mono] = new
        return _raw(data)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Expr:
        if not isinstance(n, int) or n < 0:
            raise ValueError(f"exponent must be a non-negative integer, got {n!r}")
        result = Expr.const(1)
        base = self
        k = n
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    # -- calculus -----------------------------------------------------

    def diff(self, v: JetVariable) -> Expr:
        """Formal partial derivative, treating all jet variables as independent."""
        data: dict[Monomial, Fraction] = {}
        for mono, coeff in self._terms.items():
            for pos, (w, e) in enumerate(mono):
                if w == v:
                    rest = mono[:pos] + ((w, e - 1),) * (e > 1) + mono[pos + 1:]
                    new = data.get(rest, Fraction(0)) + coeff * e
                    if new == 0:
                        data.pop(rest, None)
                    else:
                        data[rest] = new
                    break
        return _raw(data)

    def subs(self, v: JetVariable, replacement: Expr) -> Expr:
        """Replace v by an expression, single pass (the replacement is not revisited)."""
        result = Expr.zero()
        for mono, coeff in self._terms.items():
            exponent = 0
            rest = mono
            for pos, (w, e) in enumerate(mono):
                if w == v:
                    exponent = e
                    rest = mono[:pos] + mono[pos + 1:]
                    break
            term = _raw({rest: coeff})
            if exponent:
                term = term * replacement ** exponent
            result = result + term
        return result

    def evaluate(self, assignment: Mapping[JetVariable, Fraction]) -> Fraction:
        """Exact value at a point; every occurring variable must be assigned."""
        for v in self.variables():
            if v not in assignment:
                raise ValueError(f"no value assigned to variable {v.label()}")
        total = Fraction(0)
        for mono, coeff in self._terms.items():
            value = coeff
            for v, e in mono:
                value *= Fraction(assignment[v]) ** e
            total += value
        return total

    # -- printing -------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts: list[str] = []
        for mono, coeff in self.items():
            body = _monomial_str(mono, coeff)
            if not parts:
                parts.append(body if coeff > 0 else "-" + body)
            else:
                parts.append((" + " if coeff > 0 else " - ") + body)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"Expr({self})"


def _raw(data: dict[Monomial, Fraction]) -> Expr:
    e = Expr.__new__(Expr)
    e._terms = data
    return e


def _coerce(value) -> Expr:
    if isinstance(value, Expr):
        return value
    if isinstance(value, (int, Fraction)):
        return Expr.const(value)
    return NotImplemented


def _merge_monomials(m1: Monomial, m2: Monomial) -> Monomial:
    merged: dict[JetVariable, int] = {}
    for v, e in m1:
        merged[v] = merged.get(v, 0) + e
    for v, e in m2:
        merged[v] = merged.get(v, 0) + e
    return tuple(sorted(merged.items(), key=lambda ve: ve[0].sort_key()))


def _monomial_str(mono: Monomial, coeff: Fraction) -> str:
    factors = []
    for v, e in mono:
        factors.append(v.label() if e == 1 else f"{v.label()}^{e}")
    mag = abs(coeff)
    if not factors:
        return str(mag)
    if mag != 1:
        factors.insert(0, str(mag))
    return "*".join(factors)


# -- convenience expression builders -----------------------------------


def x(mu: int) -> Expr:
    return Expr.var(xvar(mu))


def u(mu: int, index) -> Expr:
    return Expr.var(uvar(mu, index))


def p(index) -> Expr:
    return Expr.var(pvar(index))


nu: Expr = Expr.var(NU_VAR)
t: Expr = Expr.var(T_VAR)


def expr_sum(terms: Iterable[Expr]) -> Expr:
    total = Expr.zero()
    for term in terms:
        total = total + term
    return total
