import random
from fractions import Fraction

import pytest

from jetns import linalg
from jetns.constraints import ReductionContext, Setting, reduce, restricted_derivative
from jetns.jetalgebra import Expr, p, u, x, pvar, uvar, xvar
from jetns.multiindex import indices_up_to
from jetns.reducedcomplex import (
    AnsatzSpec,
    AnsatzTooLargeError,
    ChiTupleCE,
    ChiTupleCPE,
    correction_ce,
    correction_cpe,
    kernel_search,
    kernel_vectors,
    reduced_derivative,
    reduced_system_kernel,
    reduced_system_residuals,
    reduced_variational_derivative,
)

from jetns.variational import helmholtz_residual, Cotuple

from conftest import random_expr


def density_pool(ctx, max_ord=1):
    pool = [xvar(k) for k in range(1, 4)]
    for i in indices_up_to(3, max_ord):
        if i.first == 0:
            pool.append(uvar(1, i))
        pool.append(uvar(2, i))
        pool.append(uvar(3, i))
        if ctx.setting is Setting.CE or i.first <= 1:
            pool.append(pvar(i))
    return pool


# -- correction term --------------------------------------------------------


def test_correction_ce_kills_constants(ce_ctx):
    chi = ChiTupleCE(chi01=Expr.const(1))
    out = correction_ce(ce_ctx, chi)
    assert out.is_zero()


def test_correction_ce_spatial_gradient(ce_ctx):
    chi = ChiTupleCE(chi01=x(2) ** 2)
    out = correction_ce(ce_ctx, chi)
    assert out.chi01.is_zero()
    assert out.chi_alpha[(0, 2)] == 2 * x(2)
    assert (0, 3) not in out.chi_alpha
    assert not out.chi_p


def test_correction_ce_index_shift(ce_ctx):
    chi = ChiTupleCE(chi_alpha={(0, 2): Expr.const(5)})
    out = correction_ce(ce_ctx, chi)
    assert out.chi_alpha == {(1, 2): Expr.const(5)}
    chi = ChiTupleCE(chi_p={0: Expr.const(7)})
    assert correction_ce(ce_ctx, chi).chi_p == {1: Expr.const(7)}


def test_correction_cpe_of_constant_tuple(cpe_ctx):
    assert correction_cpe(cpe_ctx, ChiTupleCPE(chi01=Expr.const(1))).is_zero()


def test_correction_cpe_of_unit_chi1(cpe_ctx):
    # expand each displayed term for chi1 = 1 and freeze the results
    out = correction_cpe(cpe_ctx, ChiTupleCPE(chi1=Expr.const(1)))
    assert out.chi01 == 2 * (u(2, (1, 1, 0)) + u(3, (1, 0, 1)))
    assert out.chi0.is_zero()
    assert out.chi1.is_zero()
    assert out.chi_alpha[(1, 2)] == -2 * u(1, (0, 1, 0))
    assert out.chi_alpha[(1, 3)] == -2 * u(1, (0, 0, 1))
    # the order-zero entries collect both gradient blocks
    assert out.chi_alpha[(0, 2)] == 4 * (u(2, (0, 2, 0)) + u(3, (0, 1, 1)))
    assert out.chi_alpha[(0, 3)] == 4 * (u(2, (0, 1, 1)) + u(3, (0, 0, 2)))


def test_correction_cpe_chi0_feeds_chi1(cpe_ctx):
    out = correction_cpe(cpe_ctx, ChiTupleCPE(chi0=Expr.const(3)))
    assert out.chi1 == Expr.const(3)
    assert out.chi01.is_zero() and not out.chi_alpha and out.chi0.is_zero()


def test_correction_is_linear(cpe_ctx, ce_ctx):
    rng = random.Random(41)
    pool = density_pool(cpe_ctx)
    for _ in range(5):
        a = ChiTupleCPE(
            chi01=random_expr(rng, pool, n_terms=2),
            chi_alpha={(0, 2): random_expr(rng, pool, n_terms=2)},
            chi1=random_expr(rng, pool, n_terms=2),
        )
        b = ChiTupleCPE(
            chi01=random_expr(rng, pool, n_terms=2),
            chi0=random_expr(rng, pool, n_terms=2),
            chi1=random_expr(rng, pool, n_terms=2),
        )
        combined = ChiTupleCPE(
            chi01=2 * a.chi01 + 3 * b.chi01,
            chi_alpha={(0, 2): 2 * a.chi_alpha.get((0, 2), Expr.zero())},
            chi0=3 * b.chi0,
            chi1=2 * a.chi1 + 3 * b.chi1,
        )
        out_a = correction_cpe(cpe_ctx, a)
        out_b = correction_cpe(cpe_ctx, b)
        out = correction_cpe(cpe_ctx, combined)
        keys = set(out.chi_alpha) | set(out_a.chi_alpha) | set(out_b.chi_alpha)
        assert out.chi01 == 2 * out_a.chi01 + 3 * out_b.chi01
        for k in keys:
            assert out.chi_alpha.get(k, Expr.zero()) == 2 * out_a.chi_alpha.get(
                k, Expr.zero()
            ) + 3 * out_b.chi_alpha.get(k, Expr.zero())
        assert out.chi0 == 2 * out_a.chi0 + 3 * out_b.chi0
        assert out.chi1 == 2 * out_a.chi1 + 3 * out_b.chi1


# -- transported derivative --------------------------------------------------


def test_reduced_derivative_kills_constant_ce(ce_ctx):
    assert reduced_derivative(ce_ctx, ChiTupleCE(chi01=Expr.const(1))).is_zero()


def test_reduced_derivative_kills_constant_cpe(cpe_ctx):
    assert reduced_derivative(cpe_ctx, ChiTupleCPE(chi01=Expr.const(1))).is_zero()


def test_reduced_derivative_of_x1_entry(ce_ctx):
    out = reduced_derivative(ce_ctx, ChiTupleCE(chi01=x(1)))
    assert out.chi01 == Expr.const(1)
    assert not out.chi_alpha and not out.chi_p
    out = reduced_derivative(ce_ctx, ChiTupleCE(chi01=x(2)))
    assert out.chi01.is_zero()
    assert out.chi_alpha == {(0, 2): Expr.const(1)}


# -- commutation with the variational derivative -----------------------------


def chi_difference_is_zero(ctx, a, b):
    if isinstance(a, ChiTupleCE):
        keys = set(a.chi_alpha) | set(b.chi_alpha)
        p_keys = set(a.chi_p) | set(b.chi_p)
        return (
            reduce(ctx, a.chi01 - b.chi01).is_zero()
            and all(
                reduce(ctx, a.chi_alpha.get(k, Expr.zero()) - b.chi_alpha.get(k, Expr.zero())).is_zero()
                for k in keys
            )
            and all(
                reduce(ctx, a.chi_p.get(k, Expr.zero()) - b.chi_p.get(k, Expr.zero())).is_zero()
                for k in p_keys
            )
        )
    keys = set(a.chi_alpha) | set(b.chi_alpha)
    return (
        reduce(ctx, a.chi01 - b.chi01).is_zero()
        and all(
            reduce(ctx, a.chi_alpha.get(k, Expr.zero()) - b.chi_alpha.get(k, Expr.zero())).is_zero()
            for k in keys
        )
        and reduce(ctx, a.chi0 - b.chi0).is_zero()
        and reduce(ctx, a.chi1 - b.chi1).is_zero()
    )


@pytest.mark.parametrize("setting", [Setting.CE, Setting.CPE])
def test_variational_derivative_commutes_with_transport(setting):
    ctx = ReductionContext(setting, 3)
    rng = random.Random(43)
    pool = density_pool(ctx)
    for _ in range(10):
        L = random_expr(rng, pool, n_terms=3)
        lhs = reduced_variational_derivative(ctx, restricted_derivative(ctx, 1, L))
        rhs = reduced_derivative(ctx, reduced_variational_derivative(ctx, L))
        assert chi_difference_is_zero(ctx, lhs, rhs)


def test_variational_derivative_slots(ce_ctx):
    # grouping by residual first-direction order: one spatial integration
    # by parts for the u1 jet, none for the u2 jet, and the pressure term
    # dies because its coefficient is independent of the third coordinate
    L = u(1, (0, 1, 0)) * u(2, (2, 0, 0)) + p((1, 0, 1)) * x(2)
    out = reduced_variational_derivative(ce_ctx, L)
    assert out.chi01 == -u(2, (2, 1, 0))
    assert out.chi_alpha[(2, 2)] == u(1, (0, 1, 0))
    assert not out.chi_p


def test_variational_derivative_pressure_slot(ce_ctx):
    L = p((1, 0, 1)) * x(3)
    out = reduced_variational_derivative(ce_ctx, L)
    # one spatial integration by parts of x3 gives -1
    assert out.chi_p == {1: Expr.const(-1)}


# -- the first-order reduced system ------------------------------------------


def test_reduced_system_constant_solution(cpe_ctx):
    chi = ChiTupleCPE(chi01=Expr.const(4))
    assert all(expr.is_zero() for _, expr in reduced_system_residuals(cpe_ctx, chi))


def test_reduced_system_harmonic_violation(cpe_ctx):
    # chi1 = u1 with the slaved components still fails the harmonic equation
    chi1 = u(1, (0, 0, 0))
    chi = ChiTupleCPE(
        chi_alpha={(0, 2): 2 * u(1, (0, 1, 0)) * chi1, (0, 3): 2 * u(1, (0, 0, 1)) * chi1},
        chi0=-restricted_derivative(cpe_ctx, 1, chi1),
        chi1=chi1,
    )
    residuals = dict(reduced_system_residuals(cpe_ctx, chi))
    assert residuals["velocity_slaved[2]"].is_zero()
    assert residuals["pressure_slaved"].is_zero()
    from jetns.constraints import restricted_laplacian

    assert residuals["harmonic"] == reduce(cpe_ctx, restricted_laplacian(cpe_ctx, chi1))
    assert not residuals["harmonic"].is_zero()


def test_reduced_system_pressure_relation_witness(cpe_ctx):
    chi = ChiTupleCPE(chi0=x(1), chi1=x(1))
    residuals = dict(reduced_system_residuals(cpe_ctx, chi))
    assert residuals["pressure_slaved"] == x(1) + Expr.const(1)


# -- kernel search ------------------------------------------------------------


def test_kernel_ce_constants_only(ce_ctx):
    basis = kernel_search(ce_ctx, AnsatzSpec(0, 0, 0))
    assert len(basis) == 1
    assert basis[0].chi01 == Expr.const(1)
    assert not basis[0].chi_alpha and not basis[0].chi_p


def test_kernel_ce_order_one_still_one_dimensional(ce_ctx):
    basis = kernel_search(ce_ctx, AnsatzSpec(1, 1, 1))
    assert len(basis) == 1
    assert basis[0].chi01.constant_value() is not None
    assert not basis[0].chi_alpha and not basis[0].chi_p


def test_kernel_cpe_contains_constant(cpe_ctx):
    ansatz = AnsatzSpec(0, 0, 0)
    basis = kernel_search(cpe_ctx, ansatz)
    vectors = [kernel_vectors(cpe_ctx, ansatz, chi) for chi in basis]
    constant = kernel_vectors(cpe_ctx, ansatz, ChiTupleCPE(chi01=Expr.const(1)))
    assert linalg.in_span(vectors, constant)


def test_kernel_cpe_order_one_matches_reduced_system(cpe_ctx):
    ansatz = AnsatzSpec(1, 1, 1)
    kernel = kernel_search(cpe_ctx, ansatz)
    system = reduced_system_kernel(cpe_ctx, ansatz)
    kv = [kernel_vectors(cpe_ctx, ansatz, chi) for chi in kernel]
    sv = [kernel_vectors(cpe_ctx, ansatz, chi) for chi in system]
    assert linalg.same_span(kv, sv)
    for chi in kernel:
        assert all(expr.is_zero() for _, expr in reduced_system_residuals(cpe_ctx, chi))
    # the pressure-constraint class shows up beside the constants
    assert len(kernel) == 2


def test_kernel_elements_map_to_zero(cpe_ctx, ce_ctx):
    for ctx, ansatz in ((ce_ctx, AnsatzSpec(1, 1, 0)), (cpe_ctx, AnsatzSpec(1, 1, 0))):
        for chi in kernel_search(ctx, ansatz):
            assert reduced_derivative(ctx, chi).is_zero()


def test_kernel_dimension_two():
    ce2 = ReductionContext(Setting.CE, 2)
    cpe2 = ReductionContext(Setting.CPE, 2)
    ansatz = AnsatzSpec(1, 1, 1)
    basis = kernel_search(ce2, ansatz)
    assert len(basis) == 1 and basis[0].chi01.constant_value() is not None
    kernel = kernel_search(cpe2, ansatz)
    system = reduced_system_kernel(cpe2, ansatz)
    kv = [kernel_vectors(cpe2, ansatz, chi) for chi in kernel]
    sv = [kernel_vectors(cpe2, ansatz, chi) for chi in system]
    assert linalg.same_span(kv, sv)


def test_kernel_cap_enforced(cpe_ctx):
    with pytest.raises(AnsatzTooLargeError):
        kernel_search(cpe_ctx, AnsatzSpec(0, 0, 0), max_unknowns=0)


def test_kernel_requires_constrained_setting(free_ctx):
    with pytest.raises(ValueError):
        kernel_search(free_ctx, AnsatzSpec(0, 0, 0))


def test_kernel_helmholtz_report(cpe_ctx):
    # the found kernel elements can be screened by the variationality test;
    # the constant tuple passes it trivially
    basis = kernel_search(cpe_ctx, AnsatzSpec(0, 0, 0))
    chi = basis[0]
    cot = Cotuple((chi.chi01, Expr.zero(), Expr.zero()), chi.chi0)
    assert helmholtz_residual(cot, 3).is_zero()


# -- exact linear algebra -----------------------------------------------------


def test_nullspace_known_system():
    # x + y - z = 0, y + z = 0  ->  span{(2, -1, 1)}
    rows = [
        {0: Fraction(1), 1: Fraction(1), 2: Fraction(-1)},
        {1: Fraction(1), 2: Fraction(1)},
    ]
    basis = linalg.nullspace(rows, 3)
    assert basis == [(Fraction(2), Fraction(-1), Fraction(1))]


def test_nullspace_matches_naive_gauss():
    rng = random.Random(44)
    for _ in range(20):
        nrows, ncols = rng.randint(1, 5), rng.randint(1, 5)
        rows = [
            {
                c: Fraction(rng.randint(-4, 4), rng.randint(1, 3))
                for c in range(ncols)
                if rng.random() < 0.7
            }
            for _ in range(nrows)
        ]
        rows = [{c: v for c, v in row.items() if v != 0} for row in rows]
        basis = linalg.nullspace(rows, ncols)
        # every basis vector solves the system exactly
        for vec in basis:
            for row in rows:
                assert sum((v * vec[c] for c, v in row.items()), Fraction(0)) == 0
        # dimension agrees with a dense rank computation
        dense = [tuple(row.get(c, Fraction(0)) for c in range(ncols)) for row in rows]
        assert len(basis) == ncols - linalg.rank(dense)


def test_rank_and_span_helpers():
    a = [(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))]
    b = [(Fraction(1), Fraction(1)), (Fraction(1), Fraction(-1))]
    assert linalg.rank(a) == 2
    assert linalg.same_span(a, b)
    assert linalg.in_span(a, (Fraction(3), Fraction(5)))
    assert not linalg.same_span(a[:1], b)
