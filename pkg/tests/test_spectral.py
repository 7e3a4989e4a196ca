import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracell.grid import Grid2D, GridFunction, inner_product, norm_H
from fracell.linsolve import spd_solve
from fracell.operators import (
    CoefficientField,
    apply,
    assemble_operator,
    total_lower_bound,
)
from fracell.spectral import (
    DENSE_LIMIT,
    analytic_laplacian_basis,
    apply_fractional_power,
    dense_basis,
    exact_continuous_solution,
    model_mode_eigenvalues,
    reference_solve,
)
from fracell.experiments import preset_paper_problem

from conftest import laplacian, variable_problem


def gram(basis, count):
    vecs = [basis.eigenvector(m) for m in range(count)]
    return np.array([[inner_product(a, b) for b in vecs] for a in vecs])


def test_smallest_eigenvalue_is_delta():
    grid, coeff, _ = laplacian(100)
    basis = analytic_laplacian_basis(grid)
    assert basis.eigenvalues[0] == pytest.approx(total_lower_bound(grid, coeff), rel=1e-14)
    assert basis.provenance == "analytic"
    assert tuple(basis.modes[0]) == (1, 1)


def test_eigenvalues_ascending():
    basis = analytic_laplacian_basis(Grid2D(17, 9, 1.0, 2.0))
    assert np.all(np.diff(basis.eigenvalues) >= 0)
    assert len(basis) == 16 * 8


def test_orthonormal_first_modes():
    basis = analytic_laplacian_basis(Grid2D(10, 10))
    assert np.abs(gram(basis, 10) - np.eye(10)).max() <= 1e-10


def test_full_analytic_basis_orthonormal():
    grid = Grid2D(9, 6, 1.3, 0.4)
    basis = analytic_laplacian_basis(grid)
    assert np.abs(gram(basis, len(basis)) - np.eye(len(basis))).max() <= 1e-10


def test_random_modes_are_eigenvectors(rng):
    grid, _, A = laplacian(24, 18, 1.0, 0.75)
    basis = analytic_laplacian_basis(grid)
    for m in rng.choice(len(basis), 5, replace=False):
        phi = basis.eigenvector(m)
        lam = basis.eigenvalues[m]
        assert norm_H(apply(A, phi) - lam * phi) <= 1e-10 * lam


def test_mode_index_round_trip():
    basis = analytic_laplacian_basis(Grid2D(8, 8))
    m = basis.mode_index(3, 2)
    assert tuple(basis.modes[m]) == (3, 2)
    with pytest.raises(ValueError):
        basis.mode_index(8, 1)


def test_dense_matches_analytic():
    grid, _, A = laplacian(12, 10)
    dense = dense_basis(A)
    analytic = analytic_laplacian_basis(grid)
    assert dense.provenance == "dense-numeric"
    np.testing.assert_allclose(dense.eigenvalues, analytic.eigenvalues, rtol=1e-9)


def test_dense_scalar_operator():
    grid = Grid2D(5, 4)
    coeff = CoefficientField.constant(grid)
    A = assemble_operator(grid, coeff)
    zero = type(A.a1)(grid, 1, 0 * A.a1.sub, 0 * A.a1.diag, 0 * A.a1.sup)
    zero2 = type(A.a2)(grid, 2, 0 * A.a2.sub, 0 * A.a2.diag, 0 * A.a2.sup)
    scalar = type(A)(zero, zero2, shift=-2.5)  # A1 + A2 - (-2.5) I = 2.5 I
    np.testing.assert_allclose(dense_basis(scalar).eigenvalues, 2.5, rtol=1e-14)


def test_dense_trace_and_orthonormality():
    grid, coeff, A = variable_problem(9, 8)
    basis = dense_basis(A)
    trace = A.diagonal_array().sum()
    assert basis.eigenvalues.sum() == pytest.approx(trace, rel=1e-12)
    assert np.abs(gram(basis, len(basis)) - np.eye(len(basis))).max() <= 1e-10
    assert basis.eigenvalues[0] >= total_lower_bound(grid, coeff) * (1 - 1e-10)


def test_dense_size_limit():
    _, _, A = laplacian(66, 65)
    assert A.grid.size > DENSE_LIMIT
    with pytest.raises(ValueError):
        dense_basis(A)


def test_power_of_eigenvector():
    grid, _, _ = laplacian(16)
    basis = analytic_laplacian_basis(grid)
    phi = basis.eigenvector(5)
    out = apply_fractional_power(basis, 0.3, phi)
    assert norm_H(out - basis.eigenvalues[5] ** 0.3 * phi) <= 1e-12 * basis.eigenvalues[5] ** 0.3


def test_alpha_one_is_operator(rng):
    grid, _, A = laplacian(20, 13)
    basis = analytic_laplacian_basis(grid)
    y = grid.random(rng)
    Ay = apply(A, y)
    assert norm_H(apply_fractional_power(basis, 1.0, y) - Ay) <= 1e-9 * norm_H(Ay)


def test_half_power_semigroup(rng):
    grid, _, A = variable_problem(11, 9)
    basis = dense_basis(A)
    y = grid.random(rng)
    twice = apply_fractional_power(basis, 0.5, apply_fractional_power(basis, 0.5, y))
    Ay = apply(A, y)
    assert norm_H(twice - Ay) <= 1e-9 * norm_H(Ay)


@pytest.mark.parametrize("alpha", [0.0, -0.5, 1.5])
def test_alpha_out_of_range(alpha):
    basis = analytic_laplacian_basis(Grid2D(4, 4))
    f = Grid2D(4, 4).ones()
    with pytest.raises(ValueError):
        apply_fractional_power(basis, alpha, f)
    with pytest.raises(ValueError):
        reference_solve(basis, alpha, f)


def test_reference_of_first_mode():
    basis = analytic_laplacian_basis(Grid2D(20, 20))
    phi = basis.eigenvector(0)
    w = reference_solve(basis, 0.5, phi)
    assert norm_H(w - basis.eigenvalues[0] ** -0.5 * phi) <= 1e-14


def test_model_problem_round_trip():
    coeff, f = preset_paper_problem(100, 100)
    basis = analytic_laplacian_basis(coeff.grid)
    w = reference_solve(basis, 0.5, f)
    back = apply_fractional_power(basis, 0.5, w)
    assert norm_H(back - f) <= 1e-9 * norm_H(f)


def test_reference_alpha_one_matches_cg(rng):
    grid, _, A = laplacian(40, 30)
    basis = analytic_laplacian_basis(grid)
    f = grid.random(rng)
    w = reference_solve(basis, 1.0, f)
    y = spd_solve(A, f, 0.0, 1.0, tol=1e-13)
    assert norm_H(w - y) <= 1e-8 * norm_H(w)


@given(st.floats(0.05, 1.0), st.integers(0, 2**31))
@settings(max_examples=25, deadline=None)
def test_power_then_solve_is_identity(alpha, seed):
    grid = Grid2D(14, 11)
    basis = analytic_laplacian_basis(grid)
    y = grid.random(np.random.default_rng(seed))
    back = reference_solve(basis, alpha, apply_fractional_power(basis, alpha, y))
    assert norm_H(back - y) <= 1e-9 * norm_H(y)


@given(st.integers(0, 2**31))
@settings(max_examples=25, deadline=None)
def test_parseval(seed):
    grid = Grid2D(13, 10, 0.8, 1.1)
    basis = analytic_laplacian_basis(grid)
    y = grid.random(np.random.default_rng(seed))
    c = basis.coefficients(y.as_array())
    assert np.sum(c * c) == pytest.approx(inner_product(y, y), rel=1e-9)


@given(st.floats(0.01, 0.98), st.floats(0.001, 0.02))
def test_negative_power_decreasing_in_alpha(alpha, gap):
    lam = analytic_laplacian_basis(Grid2D(8, 8)).eigenvalues
    assert np.all(lam > 1)
    assert np.all(lam ** -(alpha + gap) < lam**-alpha)


def test_model_mode_eigenvalues():
    nu1, nu2 = model_mode_eigenvalues()
    assert nu1 == pytest.approx(2 * math.pi**2, rel=1e-15)
    assert nu2 == pytest.approx(13 * math.pi**2, rel=1e-15)


def test_exact_solution_center_and_amplitude():
    grid = Grid2D(10, 10)
    u = exact_continuous_solution(grid, 0.5).as_array()
    nu1 = 2 * math.pi**2
    # centre node (i1, i2) = (5, 5)
    assert u[4, 4] == pytest.approx(nu1**-0.5, rel=1e-14)
    assert nu1**-0.5 == pytest.approx(1 / (math.pi * math.sqrt(2)), rel=1e-15)


def test_exact_solution_amplitudes_by_projection():
    grid = Grid2D(32, 32)
    basis = analytic_laplacian_basis(grid)
    alpha = 0.7
    u = exact_continuous_solution(grid, alpha)
    c = basis.coefficients(u.as_array())
    # grid-normalized mode = 2 sin sin, so the coefficient is amplitude / 2
    nu1, nu2 = model_mode_eigenvalues()
    assert c[basis.mode_index(1, 1)] == pytest.approx(0.5 * nu1**-alpha, rel=1e-12)
    assert c[basis.mode_index(3, 2)] == pytest.approx(0.5 * nu2**-alpha, rel=1e-12)


def test_exact_solution_close_to_discrete_reference():
    # the continuous solution is the h -> 0 limit of the discrete one
    errs = []
    for n in (20, 40, 80):
        coeff, f = preset_paper_problem(n, n)
        w = reference_solve(analytic_laplacian_basis(coeff.grid), 0.5, f)
        errs.append(norm_H(w - exact_continuous_solution(coeff.grid, 0.5)))
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.05)
    assert errs[1] / errs[2] == pytest.approx(4.0, rel=0.05)


def test_exact_solution_needs_unit_square():
    with pytest.raises(ValueError):
        exact_continuous_solution(Grid2D(8, 8, 2.0, 1.0), 0.5)
