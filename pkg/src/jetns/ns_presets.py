"""Built-in presets for the incompressible viscous flow system.

The evolution velocity components are the convective term, the viscous
term and the pressure gradient:

    E^mu = -u^la u^mu_(la) + nu * (Laplacian u^mu) - p_(mu)

The sign on the pressure gradient is fixed by the exact divergence
identity

    D_mu E^mu + PE - (nu*Laplacian - u^la D_la) CE = 0

which holds in the free algebra and makes the flux divergence vanish on
the constrained setting.  The pressure component of the evolution is not
fixed here; it is determined by a Poisson equation whose residual the
verification report exposes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .constraints import (
    ReductionContext,
    Setting,
    continuity_generator,
    pressure_generator,
    quad_source,
    reduce,
    reduce_ce,
)
from .evolutionary import (
    Characteristic,
    EvolutionField,
    pressure_coupling_residual,
)
from .jetalgebra import Expr, expr_sum, nu, p, u
from .multiindex import unit, zero
from .totalderiv import laplacian, total_derivative
from .variational import CurrentTuple


@dataclass
class NsInstance:
    """The flow system at a fixed dimension and viscosity."""

    m: int
    viscosity: Expr
    context: ReductionContext
    evolution_velocity: tuple[Expr, ...]


def ns_build(m: int = 3, viscosity=None) -> NsInstance:
    """Construct the presets; viscosity stays symbolic unless a positive rational is given."""
    if m < 2:
        raise ValueError(f"dimension must be >= 2, got {m}")
    if viscosity is None:
        visc = nu
    else:
        value = Fraction(viscosity)
        if value <= 0:
            raise ValueError(f"viscosity must be positive, got {value}")
        visc = Expr.const(value)
    velocity = tuple(_evolution_component(m, mu, visc) for mu in range(1, m + 1))
    return NsInstance(m, visc, ReductionContext(Setting.CPE, m), velocity)


def _evolution_component(m: int, mu: int, visc: Expr) -> Expr:
    convection = expr_sum(
        u(la, zero(m)) * u(mu, unit(la, m)) for la in range(1, m + 1)
    )
    return -convection + visc * laplacian(m, u(mu, zero(m))) - p(unit(mu, m))


def evolution_current(inst: NsInstance) -> CurrentTuple:
    """The evolution flux as a current; conserved on the constrained setting."""
    return CurrentTuple(inst.evolution_velocity)


def evolution_field(inst: NsInstance, pressure_component: Expr | None = None) -> EvolutionField:
    """The evolution field, with the given (or zero) pressure component, reduced."""
    pressure = pressure_component if pressure_component is not None else Expr.zero()
    characteristic = Characteristic(inst.evolution_velocity, pressure).reduce(
        inst.context
    )
    return EvolutionField(characteristic, inst.context)


@dataclass
class CheckEntry:
    name: str
    residual: Expr
    checked: bool  # informational entries report a value without pass/fail weight

    @property
    def passed(self) -> bool:
        return self.residual.is_zero()


@dataclass
class CheckReport:
    entries: list[CheckEntry]

    @property
    def all_passed(self) -> bool:
        return all(e.passed for e in self.entries if e.checked)

    def entry(self, name: str) -> CheckEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)


def divergence_identity_residual(inst: NsInstance) -> Expr:
    """The free-algebra combination that must vanish identically.

    D_mu E^mu + PE - (nu*Laplacian - u^la D_la) CE, with the constraint
    generators at the zero index.
    """
    m = inst.m
    div = expr_sum(
        total_derivative(mu, inst.evolution_velocity[mu - 1]) for mu in range(1, m + 1)
    )
    ce = continuity_generator(m)
    transported = inst.viscosity * laplacian(m, ce) - expr_sum(
        u(la, zero(m)) * total_derivative(la, ce) for la in range(1, m + 1)
    )
    return div + pressure_generator(m) - transported


def ns_verify(inst: NsInstance, pressure_component: Expr | None = None) -> CheckReport:
    """Run the named identity checks.

    Reports the reduced flux divergence, the free divergence identity,
    and the Poisson residual of the pressure component.  When no
    pressure component is supplied the Poisson entry carries the reduced
    source term as information instead of a pass/fail check.
    """
    m = inst.m
    ctx = inst.context
    div = expr_sum(
        total_derivative(mu, inst.evolution_velocity[mu - 1]) for mu in range(1, m + 1)
    )
    div_reduced = reduce(ctx, div)
    entries = [
        CheckEntry("velocity_divergence", div_reduced, True),
        CheckEntry("divergence_identity_free", divergence_identity_residual(inst), True),
        CheckEntry("flux_divergence_reduced", div_reduced, True),
    ]
    field = evolution_field(inst, pressure_component)
    poisson = pressure_coupling_residual(ctx, field.characteristic)
    entries.append(
        CheckEntry("pressure_poisson", poisson, pressure_component is not None)
    )
    return CheckReport(entries)


def ns_integrability_prolongations(inst: NsInstance) -> list[tuple[str, Expr, Expr]]:
    """The prolongation expressions forcing the joint constraint setting.

    Returns (name, free form, reduced form) triples: the time derivative
    of the divergence constraint rewritten through the evolution
    components, the first spatial prolongations of the divergence
    constraint, and the pressure constraint generator.
    """
    m = inst.m
    ctx = inst.context
    out: list[tuple[str, Expr, Expr]] = []
    div = expr_sum(
        total_derivative(mu, inst.evolution_velocity[mu - 1]) for mu in range(1, m + 1)
    )
    out.append(("time_prolongation", div, reduce(ctx, div)))
    ce = continuity_generator(m)
    for mu in range(1, m + 1):
        prolonged = total_derivative(mu, ce)
        out.append((f"space_prolongation[{mu}]", prolonged, reduce(ctx, prolonged)))
    pe = pressure_generator(m)
    out.append(("pressure_constraint", pe, reduce(ctx, pe)))
    return out


def poisson_source(inst: NsInstance) -> Expr:
    """The reduced source of the pressure Poisson equation (zero pressure component)."""
    return pressure_coupling_residual(
        inst.context, evolution_field(inst).characteristic
    )


def preset_table(inst: NsInstance) -> list[tuple[str, Expr]]:
    """Named presets in canonical reduced and free forms, for display."""
    m = inst.m
    ctx = inst.context
    rows = [(f"E{mu}", inst.evolution_velocity[mu - 1]) for mu in range(1, m + 1)]
    rows.append(("CE", continuity_generator(m)))
    rows.append(("PE", pressure_generator(m)))
    rows.append(("Phi", ctx.phi_reduced))
    rows.append(("quad_source", quad_source(m)))
    rows.append(("quad_source_reduced", reduce_ce(quad_source(m), m)))
    return rows
