"""The reduced complex along the distinguished direction and its kernel.

After flattening the first direction, cohomology representatives live in
finite tuples indexed by the residual first-direction order.  The
derivative transported to these tuples is the componentwise restricted
first derivative plus a linear correction coming from the characteristic
that generates the restricted derivative.  Kernels of that operator are
computed exactly at bounded ansatz size by assembling one linear
constraint per output monomial and solving over the rationals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .constraints import (
    ReductionContext,
    Setting,
    reduce,
    restricted_derivative,
    restricted_laplacian,
    restricted_laplacian_primed,
    velocity_gradient_entry,
)
from .jetalgebra import (
    Expr,
    Monomial,
    T_VAR,
    _raw,
    expr_sum,
    pvar,
    u,
    uvar,
    xvar,
)
from .multiindex import indices_up_to, unit
from .variational import euler_collect


def _clean(mapping: dict) -> dict:
    return {k: v for k, v in mapping.items() if not v.is_zero()}


@dataclass
class ChiTupleCE:
    """Tuple for the continuity-setting complex.

    chi01 is the single entry dual to the unconstrained first velocity
    component; chi_alpha maps (first-direction order, spatial component)
    to an entry; chi_p maps the first-direction order to a pressure
    entry.  Finite support throughout.
    """

    chi01: Expr = field(default_factory=Expr.zero)
    chi_alpha: dict[tuple[int, int], Expr] = field(default_factory=dict)
    chi_p: dict[int, Expr] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.chi_alpha = _clean(self.chi_alpha)
        self.chi_p = _clean(self.chi_p)

    def is_zero(self) -> bool:
        return self.chi01.is_zero() and not self.chi_alpha and not self.chi_p

    def reduce(self, ctx: ReductionContext) -> ChiTupleCE:
        return ChiTupleCE(
            reduce(ctx, self.chi01),
            {k: reduce(ctx, v) for k, v in self.chi_alpha.items()},
            {k: reduce(ctx, v) for k, v in self.chi_p.items()},
        )


@dataclass
class ChiTupleCPE:
    """Tuple for the joint-setting complex.

    Velocity entries as in the continuity shape; the pressure block
    collapses to the two entries chi0 and chi1 because only the first two
    first-direction orders of the pressure survive the reduction.
    """

    chi01: Expr = field(default_factory=Expr.zero)
    chi_alpha: dict[tuple[int, int], Expr] = field(default_factory=dict)
    chi0: Expr = field(default_factory=Expr.zero)
    chi1: Expr = field(default_factory=Expr.zero)

    def __post_init__(self) -> None:
        self.chi_alpha = _clean(self.chi_alpha)

    def is_zero(self) -> bool:
        return (
            self.chi01.is_zero()
            and not self.chi_alpha
            and self.chi0.is_zero()
            and self.chi1.is_zero()
        )

    def reduce(self, ctx: ReductionContext) -> ChiTupleCPE:
        return ChiTupleCPE(
            reduce(ctx, self.chi01),
            {k: reduce(ctx, v) for k, v in self.chi_alpha.items()},
            reduce(ctx, self.chi0),
            reduce(ctx, self.chi1),
        )


@dataclass(frozen=True)
class AnsatzSpec:
    """Finite truncation of the tuple space for kernel search.

    max_order bounds the jet order of the ansatz variables and the
    first-direction support of the velocity block; max_degree bounds the
    total monomial degree; max_x_degree bounds the coordinate degree
    within it; include_t admits the time symbol.
    """

    max_order: int = 0
    max_degree: int = 0
    max_x_degree: int = 0
    include_t: bool = False

    def __post_init__(self) -> None:
        if self.max_order < 0 or self.max_degree < 0 or self.max_x_degree < 0:
            raise ValueError("ansatz bounds must be non-negative")


class AnsatzTooLargeError(ValueError):
    def __init__(self, required: int, cap: int):
        super().__init__(
            f"ansatz requires {required} unknown coefficients, cap is {cap}"
        )
        self.required = required
        self.cap = cap


# -- the transported derivative -------------------------------------------


def correction_ce(ctx: ReductionContext, chi: ChiTupleCE) -> ChiTupleCE:
    """The linear correction term of the transported derivative (continuity shape)."""
    m = ctx.m
    alpha_range = range(2, m + 1)
    order_bound = max(
        [i1 for i1, _ in chi.chi_alpha] + [i1 for i1 in chi.chi_p] + [0]
    )
    chi_alpha: dict[tuple[int, int], Expr] = {}
    for i1 in range(order_bound + 2):
        for a in alpha_range:
            term = Expr.zero()
            if i1 == 0:
                term = term + restricted_derivative(ctx, a, chi.chi01)
            term = term + chi.chi_alpha.get((i1 - 1, a), Expr.zero())
            if not term.is_zero():
                chi_alpha[(i1, a)] = term
    chi_p = {
        i1 + 1: expr for i1, expr in chi.chi_p.items() if not expr.is_zero()
    }
    return ChiTupleCE(Expr.zero(), chi_alpha, chi_p)


def correction_cpe(ctx: ReductionContext, chi: ChiTupleCPE) -> ChiTupleCPE:
    """The linear correction term of the transported derivative (joint shape)."""
    m = ctx.m
    alpha_range = range(2, m + 1)
    d = lambda a, g: restricted_derivative(ctx, a, g)
    u_first = lambda a: u(a, unit(1, m))  # u^a with one first-direction derivative
    div_block = expr_sum(u(b, unit(b, m)) for b in alpha_range)

    chi01 = 2 * expr_sum(d(a, u_first(a) * chi.chi1) for a in alpha_range)
    order_bound = max([i1 for i1, _ in chi.chi_alpha] + [1])
    chi_alpha: dict[tuple[int, int], Expr] = {}
    for i1 in range(order_bound + 2):
        for a in alpha_range:
            term = chi.chi_alpha.get((i1 - 1, a), Expr.zero())
            if i1 == 0:
                term = term + d(a, chi.chi01)
                term = term + 2 * d(a, div_block * chi.chi1)
                term = term + 2 * expr_sum(
                    d(b, u(b, unit(a, m)) * chi.chi1) for b in alpha_range
                )
            if i1 == 1:
                term = term - 2 * u(1, unit(a, m)) * chi.chi1
            if not term.is_zero():
                chi_alpha[(i1, a)] = term
    chi0 = -restricted_laplacian_primed(ctx, chi.chi1)
    chi1 = chi.chi0
    return ChiTupleCPE(chi01, chi_alpha, chi0, chi1)


def reduced_derivative(ctx: ReductionContext, chi):
    """Componentwise restricted first derivative plus the setting's correction."""
    d1 = lambda g: restricted_derivative(ctx, 1, g)
    if ctx.setting is Setting.CE:
        corr = correction_ce(ctx, chi)
        keys = set(chi.chi_alpha) | set(corr.chi_alpha)
        chi_alpha = {
            k: d1(chi.chi_alpha.get(k, Expr.zero()))
            + corr.chi_alpha.get(k, Expr.zero())
            for k in keys
        }
        p_keys = set(chi.chi_p) | set(corr.chi_p)
        chi_p = {
            k: d1(chi.chi_p.get(k, Expr.zero())) + corr.chi_p.get(k, Expr.zero())
            for k in p_keys
        }
        return ChiTupleCE(d1(chi.chi01) + corr.chi01, chi_alpha, chi_p)
    if ctx.setting is Setting.CPE:
        corr = correction_cpe(ctx, chi)
        keys = set(chi.chi_alpha) | set(corr.chi_alpha)
        chi_alpha = {
            k: d1(chi.chi_alpha.get(k, Expr.zero()))
            + corr.chi_alpha.get(k, Expr.zero())
            for k in keys
        }
        return ChiTupleCPE(
            d1(chi.chi01) + corr.chi01,
            chi_alpha,
            d1(chi.chi0) + corr.chi0,
            d1(chi.chi1) + corr.chi1,
        )
    raise ValueError("reduced derivative requires the ce or cpe setting")


# -- the equivalent first-order system (joint setting) ---------------------


def reduced_system_residuals(
    ctx: ReductionContext, chi: ChiTupleCPE
) -> list[tuple[str, Expr]]:
    """Residuals of the first-order system equivalent to the kernel equation.

    Vanishing of every entry characterizes kernel elements of the
    transported derivative in the joint setting: the velocity block is
    slaved to the pressure entries, the top pressure entry is harmonic
    with a compatibility condition, and chi01 solves a gradient system.
    """
    if ctx.setting is not Setting.CPE:
        raise ValueError("the reduced system lives in the cpe setting")
    m = ctx.m
    alpha_range = range(2, m + 1)
    d = lambda mu, g: restricted_derivative(ctx, mu, g)
    grad = lambda la, mu: velocity_gradient_entry(ctx, la, mu)
    out: list[tuple[str, Expr]] = []

    for a in alpha_range:
        out.append(
            (
                f"velocity_slaved[{a}]",
                reduce(ctx, chi.chi_alpha.get((0, a), Expr.zero())
                       - 2 * u(1, unit(a, m)) * chi.chi1),
            )
        )
    for (i1, a) in sorted(chi.chi_alpha):
        if i1 >= 1:
            out.append(
                (f"higher_velocity_vanish[{i1},{a}]", reduce(ctx, chi.chi_alpha[(i1, a)]))
            )
    out.append(("pressure_slaved", reduce(ctx, chi.chi0 + d(1, chi.chi1))))
    out.append(("harmonic", reduce(ctx, restricted_laplacian(ctx, chi.chi1))))
    for a in alpha_range:
        cross = expr_sum(
            grad(mu, 1) * d(mu, d(a, chi.chi1)) - grad(mu, a) * d(mu, d(1, chi.chi1))
            for mu in range(1, m + 1)
        )
        out.append((f"compatibility[{a}]", reduce(ctx, cross)))
    out.append(
        (
            "gradient_first",
            reduce(
                ctx,
                d(1, chi.chi01)
                + 2 * expr_sum(d(a, u(a, unit(1, m)) * chi.chi1) for a in alpha_range),
            ),
        )
    )
    div_block = expr_sum(u(b, unit(b, m)) for b in alpha_range)
    for a in alpha_range:
        out.append(
            (
                f"gradient[{a}]",
                reduce(
                    ctx,
                    d(a, chi.chi01)
                    + 2
                    * (
                        expr_sum(grad(mu, a) * d(mu, chi.chi1) for mu in range(1, m + 1))
                        + d(a, div_block * chi.chi1)
                    ),
                ),
            )
        )
    return out


# -- the variational derivative of the auxiliary complex -------------------


def reduced_variational_derivative(ctx: ReductionContext, L: Expr):
    """Integration by parts along the directions 2..m, grouped by tuple slot."""
    collected = euler_collect(L, range(2, ctx.m + 1))
    chi01 = Expr.zero()
    chi_alpha: dict[tuple[int, int], Expr] = {}
    pressure: dict[int, Expr] = {}
    for (kind, mu, remainder), expr in collected.items():
        i1 = remainder[0]
        if kind == "u" and mu == 1:
            if i1 != 0:
                raise ValueError("density is not in canonical coordinates")
            chi01 = chi01 + expr
        elif kind == "u":
            chi_alpha[(i1, mu)] = chi_alpha.get((i1, mu), Expr.zero()) + expr
        else:
            pressure[i1] = pressure.get(i1, Expr.zero()) + expr
    if ctx.setting is Setting.CE:
        return ChiTupleCE(chi01, chi_alpha, pressure)
    if ctx.setting is Setting.CPE:
        if any(i1 > 1 for i1 in pressure):
            raise ValueError("density is not in canonical coordinates")
        return ChiTupleCPE(
            chi01,
            chi_alpha,
            pressure.get(0, Expr.zero()),
            pressure.get(1, Expr.zero()),
        )
    raise ValueError("the auxiliary complex lives in the ce or cpe setting")


# -- bounded-order kernel search --------------------------------------------


def _component_labels(ctx: ReductionContext, ansatz: AnsatzSpec) -> list:
    labels: list = [("chi01",)]
    for i1 in range(ansatz.max_order + 1):
        for a in range(2, ctx.m + 1):
            labels.append(("chi_alpha", i1, a))
    if ctx.setting is Setting.CE:
        for i1 in range(ansatz.max_order + 1):
            labels.append(("chi_p", i1))
    else:
        labels.append(("chi0",))
        labels.append(("chi1",))
    return labels


def ansatz_monomials(ctx: ReductionContext, ansatz: AnsatzSpec) -> list[Monomial]:
    """All canonical-coordinate monomials within the ansatz bounds."""
    m = ctx.m
    pool = [xvar(mu) for mu in range(1, m + 1)]
    if ansatz.include_t:
        pool.append(T_VAR)
    for i in indices_up_to(m, ansatz.max_order):
        if i.first == 0:
            pool.append(uvar(1, i))
        for a in range(2, m + 1):
            pool.append(uvar(a, i))
    for i in indices_up_to(m, ansatz.max_order):
        if ctx.setting is Setting.CE or i.first <= 1:
            pool.append(pvar(i))
    pool.sort(key=lambda v: v.sort_key())

    monomials: list[Monomial] = []

    def extend(prefix: list, start: int, degree_left: int, x_left: int) -> None:
        monomials.append(tuple(prefix))
        for pos in range(start, len(pool)):
            v = pool[pos]
            if degree_left < 1 or (v.kind == "x" and x_left < 1):
                continue
            exponent = 1
            while exponent <= degree_left and (v.kind != "x" or exponent <= x_left):
                prefix.append((v, exponent))
                extend(
                    prefix,
                    pos + 1,
                    degree_left - exponent,
                    x_left - (exponent if v.kind == "x" else 0),
                )
                prefix.pop()
                exponent += 1

    extend([], 0, ansatz.max_degree, ansatz.max_x_degree)
    monomials.sort(
        key=lambda mo: (sum(e for _, e in mo), tuple((v.sort_key(), e) for v, e in mo))
    )
    return monomials


def _basis_tuple(ctx: ReductionContext, label, mono: Monomial):
    expr = _raw({mono: Fraction(1)})
    if ctx.setting is Setting.CE:
        chi = ChiTupleCE()
    else:
        chi = ChiTupleCPE()
    if label[0] == "chi01":
        chi.chi01 = expr
    elif label[0] == "chi_alpha":
        chi.chi_alpha = {(label[1], label[2]): expr}
    elif label[0] == "chi_p":
        chi.chi_p = {label[1]: expr}
    elif label[0] == "chi0":
        chi.chi0 = expr
    else:
        chi.chi1 = expr
    return chi


def _tuple_components(ctx: ReductionContext, chi) -> list[tuple[tuple, Expr]]:
    out = [(("chi01",), chi.chi01)]
    for key in sorted(chi.chi_alpha):
        out.append((("chi_alpha",) + key, chi.chi_alpha[key]))
    if ctx.setting is Setting.CE:
        for key in sorted(chi.chi_p):
            out.append((("chi_p", key), chi.chi_p[key]))
    else:
        out.append((("chi0",), chi.chi0))
        out.append((("chi1",), chi.chi1))
    return out


def _solve_homogeneous(
    ctx: ReductionContext, ansatz: AnsatzSpec, constraint_entries, max_unknowns: int
) -> list:
    """Nullspace basis of a chi-linear constraint map within the ansatz.

    constraint_entries maps a tuple to named expressions that must all
    vanish identically; each monomial of each named expression
    contributes one linear constraint on the unknown coefficients.
    """
    labels = _component_labels(ctx, ansatz)
    monomials = ansatz_monomials(ctx, ansatz)
    unknowns = [(label, mono) for label in labels for mono in monomials]
    if len(unknowns) > max_unknowns:
        raise AnsatzTooLargeError(len(unknowns), max_unknowns)

    rows: dict[tuple, dict[int, Fraction]] = {}
    for col, (label, mono) in enumerate(unknowns):
        for slot, expr in constraint_entries(_basis_tuple(ctx, label, mono)):
            for out_mono, coeff in expr.items():
                rows.setdefault((slot, out_mono), {})[col] = coeff

    ordered_rows = [rows[key] for key in sorted(rows, key=_row_key)]
    vectors = linalg.nullspace(ordered_rows, len(unknowns))

    basis = []
    for vec in vectors:
        chi = ChiTupleCE() if ctx.setting is Setting.CE else ChiTupleCPE()
        for (label, mono), coeff in zip(unknowns, vec):
            if coeff == 0:
                continue
            expr = _raw({mono: Fraction(coeff)})
            if label[0] == "chi01":
                chi.chi01 = chi.chi01 + expr
            elif label[0] == "chi_alpha":
                key = (label[1], label[2])
                chi.chi_alpha[key] = chi.chi_alpha.get(key, Expr.zero()) + expr
            elif label[0] == "chi_p":
                chi.chi_p[label[1]] = chi.chi_p.get(label[1], Expr.zero()) + expr
            elif label[0] == "chi0":
                chi.chi0 = chi.chi0 + expr
            else:
                chi.chi1 = chi.chi1 + expr
        chi.chi_alpha = _clean(chi.chi_alpha)
        if ctx.setting is Setting.CE:
            chi.chi_p = _clean(chi.chi_p)
        basis.append(chi)
    return basis


def kernel_search(
    ctx: ReductionContext, ansatz: AnsatzSpec, max_unknowns: int = 4000
) -> list:
    """Exact kernel basis of the transported derivative within the ansatz.

    Every tuple built from the ansatz monomials with unknown rational
    coefficients is required to map to the identically zero tuple; each
    monomial of each output component contributes one linear constraint.
    The basis is deterministically ordered and scaled to coprime
    integers.
    """
    if ctx.setting is Setting.FREE:
        raise ValueError("kernel search requires the ce or cpe setting")
    return _solve_homogeneous(
        ctx,
        ansatz,
        lambda chi: _tuple_components(ctx, reduced_derivative(ctx, chi)),
        max_unknowns,
    )


def reduced_system_kernel(
    ctx: ReductionContext, ansatz: AnsatzSpec, max_unknowns: int = 4000
) -> list:
    """Solution basis of the first-order reduced system within the ansatz.

    Solves the same unknown space as kernel_search against the
    reduced-system residuals instead of the transported derivative, so
    the two solution spaces can be compared.
    """
    if ctx.setting is not Setting.CPE:
        raise ValueError("the reduced system lives in the cpe setting")
    return _solve_homogeneous(
        ctx,
        ansatz,
        lambda chi: reduced_system_residuals(ctx, chi),
        max_unknowns,
    )


def _row_key(key):
    slot, mono = key
    return (slot, (sum(e for _, e in mono), tuple((v.sort_key(), e) for v, e in mono)))


def kernel_vectors(ctx: ReductionContext, ansatz: AnsatzSpec, chi) -> tuple[Fraction, ...]:
    """Coordinates of a tuple in the ansatz unknown basis (for span tests).

    Raises if a component involves a monomial outside the ansatz.
    """
    labels = _component_labels(ctx, ansatz)
    monomials = ansatz_monomials(ctx, ansatz)
    position = {
        (label, mono): k
        for k, (label, mono) in enumerate(
            (label, mono) for label in labels for mono in monomials
        )
    }
    vec = [Fraction(0)] * len(position)
    for slot, expr in _tuple_components(ctx, chi):
        for mono, coeff in expr.items():
            key = (slot, mono)
            if key not in position:
                raise ValueError(f"component {slot} uses a monomial outside the ansatz")
            vec[position[key]] = coeff
    return tuple(vec)
