"""Exact symbolic jet-space calculus for divergence-free flows."""

from .constraints import (
    ReductionContext,
    Setting,
    continuity_generator,
    ideal_member,
    phi_expr,
    pressure_generator,
    quad_source,
    reduce,
    reduce_ce,
    restricted_derivative,
    restricted_derivative_multi,
    restricted_laplacian,
)
from .evolutionary import (
    Characteristic,
    EvolutionField,
    ev_apply,
    evolution_derivative,
    linearize_evolution,
    symmetry_residuals,
    time_symmetry_residual,
)
from .exprio import parse_expr, parse_tuple, print_expr, print_tuple
from .jetalgebra import Expr, JetVariable, nu, p, t, u, x
from .multiindex import MultiIndex, unit, zero
from .ns_presets import NsInstance, ns_build, ns_verify
from .reducedcomplex import (
    AnsatzSpec,
    ChiTupleCE,
    ChiTupleCPE,
    kernel_search,
    reduced_derivative,
    reduced_system_residuals,
    reduced_variational_derivative,
)
from .totalderiv import (
    HForm,
    horizontal_differential,
    laplacian,
    laplacian_primed,
    total_derivative,
    total_derivative_multi,
)
from .variational import (
    Cotuple,
    CurrentTuple,
    OperatorCoefficients,
    current_divergence,
    euler_operator,
    formal_adjoint,
    frechet_linearization,
    helmholtz_residual,
    operator_adjoint,
)

__all__ = [
    "AnsatzSpec",
    "Characteristic",
    "ChiTupleCE",
    "ChiTupleCPE",
    "Cotuple",
    "CurrentTuple",
    "EvolutionField",
    "Expr",
    "HForm",
    "JetVariable",
    "MultiIndex",
    "NsInstance",
    "OperatorCoefficients",
    "ReductionContext",
    "Setting",
    "continuity_generator",
    "current_divergence",
    "ev_apply",
    "euler_operator",
    "evolution_derivative",
    "formal_adjoint",
    "frechet_linearization",
    "helmholtz_residual",
    "horizontal_differential",
    "ideal_member",
    "kernel_search",
    "laplacian",
    "laplacian_primed",
    "linearize_evolution",
    "ns_build",
    "ns_verify",
    "nu",
    "operator_adjoint",
    "p",
    "parse_expr",
    "parse_tuple",
    "phi_expr",
    "pressure_generator",
    "print_expr",
    "print_tuple",
    "quad_source",
    "reduce",
    "reduce_ce",
    "reduced_derivative",
    "reduced_system_residuals",
    "reduced_variational_derivative",
    "restricted_derivative",
    "restricted_derivative_multi",
    "restricted_laplacian",
    "symmetry_residuals",
    "t",
    "time_symmetry_residual",
    "total_derivative",
    "total_derivative_multi",
    "u",
    "unit",
    "x",
    "zero",
]
