"""The formal calculus of variations on the jet algebra.

The variational derivative of a density is the alternating-sign sum of
total derivatives of its formal partials.  A cotuple (one expression per
velocity slot plus one for the pressure slot) has a linearization and a
formal adjoint, both represented as finite coefficient families of
total-derivative operators; the cotuple is a variational derivative
exactly when the two families coincide.

Slot convention: integers 1..m address the velocity slots, 0 addresses
the pressure slot.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .constraints import ReductionContext, reduce
from .jetalgebra import Expr
from .multiindex import MultiIndex, sub_indices, zero
from .totalderiv import total_derivative, total_derivative_multi

PRESSURE_SLOT = 0


@dataclass
class Cotuple:
    """A tuple dual to characteristics: m velocity entries and a pressure entry."""

    velocity: tuple[Expr, ...]
    pressure: Expr

    def __post_init__(self) -> None:
        self.velocity = tuple(self.velocity)

    @property
    def m(self) -> int:
        return len(self.velocity)

    @staticmethod
    def zero(m: int) -> Cotuple:
        return Cotuple(tuple(Expr.zero() for _ in range(m)), Expr.zero())

    def component(self, slot: int) -> Expr:
        return self.pressure if slot == PRESSURE_SLOT else self.velocity[slot - 1]

    def is_zero(self) -> bool:
        return self.pressure.is_zero() and all(c.is_zero() for c in self.velocity)

    def __sub__(self, other: Cotuple) -> Cotuple:
        return Cotuple(
            tuple(a - b for a, b in zip(self.velocity, other.velocity)),
            self.pressure - other.pressure,
        )


@dataclass
class CurrentTuple:
    """Components of a flux: one expression per spatial direction."""

    components: tuple[Expr, ...]

    def __post_init__(self) -> None:
        self.components = tuple(self.components)

    @property
    def m(self) -> int:
        return len(self.components)


class OperatorCoefficients:
    """A matrix of total-derivative operators with finite support.

    Keys are (target slot, source slot, multi-index); the value is the
    coefficient multiplying the multi-index derivative of the source
    component in the target row.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: dict[tuple[int, int, MultiIndex], Expr] | None = None):
        data = {}
        if coeffs:
            for key, expr in coeffs.items():
                if not expr.is_zero():
                    data[key] = expr
        self._coeffs = data

    def items(self) -> list[tuple[tuple[int, int, MultiIndex], Expr]]:
        return sorted(
            self._coeffs.items(),
            key=lambda kv: (kv[0][0], kv[0][1], kv[0][2].sort_key()),
        )

    def coefficient(self, target: int, source: int, k: MultiIndex) -> Expr:
        return self._coeffs.get((target, source, k), Expr.zero())

    def is_zero(self) -> bool:
        return not self._coeffs

    def __sub__(self, other: OperatorCoefficients) -> OperatorCoefficients:
        data = dict(self._coeffs)
        for key, expr in other._coeffs.items():
            data[key] = data.get(key, Expr.zero()) - expr
        return OperatorCoefficients(data)

    def __eq__(self, other) -> bool:
        if not isinstance(other, OperatorCoefficients):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __repr__(self) -> str:
        rows = ", ".join(
            f"({t},{s},{k}): {expr}" for (t, s, k), expr in self.items()
        )
        return f"OperatorCoefficients({{{rows}}})"


def euler_collect(
    L: Expr, directions: Iterable[int]
) -> dict[tuple[str, int, tuple[int, ...]], Expr]:
    """Alternating-sign integration by parts along the given directions.

    For each jet variable occurring in L, the part of its multi-index
    supported on `directions` is integrated by parts and the remainder is
    kept as a label.  Returns a map from (kind, component, remainder
    entries) to the accumulated expression.  With all directions included
    this is the classical variational derivative; with the first
    direction excluded it is the variational derivative of the auxiliary
    complex.
    """
    directions = set(directions)
    acc: dict[tuple[str, int, tuple[int, ...]], Expr] = {}
    for v in L.variables():
        if v.kind not in ("u", "p"):
            continue
        integrated = tuple(
            e if (pos + 1) in directions else 0 for pos, e in enumerate(v.index.entries)
        )
        remainder = tuple(
            0 if (pos + 1) in directions else e for pos, e in enumerate(v.index.entries)
        )
        j = MultiIndex(integrated)
        sign = Fraction(-1) ** j.total
        term = sign * total_derivative_multi(j, L.diff(v))
        label = (v.kind, v.mu, remainder)
        acc[label] = acc.get(label, Expr.zero()) + term
    return {label: expr for label, expr in acc.items() if not expr.is_zero()}


def euler_operator(L: Expr, m: int) -> Cotuple:
    """The variational derivative of a density, one entry per slot."""
    collected = euler_collect(L, range(1, m + 1))
    zeros = (0,) * m
    velocity = tuple(
        collected.get(("u", mu, zeros), Expr.zero()) for mu in range(1, m + 1)
    )
    pressure = collected.get(("p", 0, zeros), Expr.zero())
    return Cotuple(velocity, pressure)


def _slots(m: int) -> list[int]:
    return list(range(1, m + 1)) + [PRESSURE_SLOT]


def frechet_linearization(chi: Cotuple, m: int) -> OperatorCoefficients:
    """Coefficients of the linearization: the formal partials of each entry."""
    data: dict[tuple[int, int, MultiIndex], Expr] = {}
    for target in _slots(m):
        component = chi.component(target)
        for v in component.variables():
            if v.kind == "u":
                data[(target, v.mu, v.index)] = component.diff(v)
            elif v.kind == "p":
                data[(target, PRESSURE_SLOT, v.index)] = component.diff(v)
    return OperatorCoefficients(data)


def formal_adjoint(chi: Cotuple, m: int) -> OperatorCoefficients:
    """Coefficients of the formal adjoint, by the higher Leibniz expansion.

    The coefficient of the k-th derivative of source slot s in target row
    t collects, over every jet variable of slot t with index i >= k, the
    signed binomial multiple of the (i-k)-th derivative of the formal
    partial of the s-entry.
    """
    data: dict[tuple[int, int, MultiIndex], Expr] = {}
    for source in _slots(m):
        component = chi.component(source)
        for v in component.variables():
            if v.kind == "u":
                target = v.mu
            elif v.kind == "p":
                target = PRESSURE_SLOT
            else:
                continue
            i = v.index
            partial = component.diff(v)
            sign = Fraction(-1) ** i.total
            for k in sub_indices(i):
                l = i.subtract(k)
                coeff = sign * i.binomial(k) * total_derivative_multi(l, partial)
                key = (target, source, k)
                data[key] = data.get(key, Expr.zero()) + coeff
    return OperatorCoefficients(data)


def operator_adjoint(op: OperatorCoefficients, m: int) -> OperatorCoefficients:
    """The adjoint of a general coefficient family: transpose and integrate by parts."""
    data: dict[tuple[int, int, MultiIndex], Expr] = {}
    for (target, source, i), expr in op.items():
        sign = Fraction(-1) ** i.total
        for k in sub_indices(i):
            l = i.subtract(k)
            coeff = sign * i.binomial(k) * total_derivative_multi(l, expr)
            key = (source, target, k)
            data[key] = data.get(key, Expr.zero()) + coeff
    return OperatorCoefficients(data)


def helmholtz_residual(chi: Cotuple, m: int) -> OperatorCoefficients:
    """Linearization minus formal adjoint; empty exactly for variational cotuples."""
    return frechet_linearization(chi, m) - formal_adjoint(chi, m)


def current_divergence(ctx: ReductionContext, current: CurrentTuple) -> Expr:
    """The reduced divergence of the flux; zero for a conserved current."""
    total = Expr.zero()
    for mu, comp in enumerate(current.components, start=1):
        total = total + total_derivative(mu, comp)
    return reduce(ctx, total)
