"""Fractional powers of elliptic operators via pseudo-time integration.

The discrete problem ``A^alpha w = f`` on a rectangle is solved by integrating
an auxiliary pseudo-parabolic Cauchy problem from ``t = 0`` to ``t = 1``,
either with an implicit two-level weighted scheme or with a vector additive
(splitting) scheme whose steps reduce to independent tridiagonal line solves.
"""

from .grid import Grid2D, GridFunction, inner_product, norm_energy, norm_H
from .operators import (
    CoefficientField,
    FullOperator,
    SplitOperator,
    apply,
    assemble_direction_operator,
    make_shifted,
    spectral_lower_bound,
)
from .linsolve import ShiftedLineSystem, SolverError, spd_solve, thomas_solve_lines
from .spectral import (
    EigenBasis,
    analytic_laplacian_basis,
    apply_fractional_power,
    dense_basis,
    exact_continuous_solution,
    reference_solve,
)
from .evolution import SchemeConfig, initial_state, run_two_level, two_level_step
from .splitting import (
    SplittingSetup,
    VectorState,
    energy_theorem2,
    first_step,
    quadratic_form_A,
    quadratic_form_A0,
    quadratic_form_C,
    run_splitting,
    splitting_step,
)

__version__ = "0.1.0"
