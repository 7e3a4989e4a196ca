"""Vector additive (splitting) scheme for the pseudo-parabolic problem.

With ``D = D_1 + ... + D_p`` and ``D_i = A_i - theta delta_i I`` every
component ``y_i`` solves the same Cauchy problem; the three-level scheme with
weights ``sigma1`` (time derivative) and ``sigma2`` (operator term) treats
only ``D_i`` implicitly in the equation for ``y_i``, so each step is ``p``
batches of independent tridiagonal solves.

Two couplings of the off-diagonal terms are available:

``"parallel"``
    every component uses the other components at levels ``n`` and ``n - 1``;
    this is the scheme covered by the energy estimate in
    :func:`energy_theorem2`.
``"sequential"``
    component ``i`` uses the already updated levels ``n + 1`` and ``n`` of
    components ``j < i`` (Gauss-Seidel ordering). The reference error tables
    for the splitting scheme were produced with this ordering.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .evolution import initial_state
from .grid import GridFunction, weighted_dot
from .linsolve import SolverError, thomas_solve_array
from .operators import SplitOperator, make_shifted

COUPLINGS = ("parallel", "sequential")


@dataclass(frozen=True)
class SplittingSetup:
    """Operators ``D_i`` (shift ``chi_i = theta delta_i``) and scheme weights."""

    d_ops: tuple
    deltas: tuple
    alpha: float
    theta: float
    steps: int
    sigma1: float = 1.0
    sigma2: float = 1.0
    coupling: str = "parallel"

    def __post_init__(self):
        if len(self.d_ops) != len(self.deltas) or len(self.d_ops) < 1:
            raise ValueError("need one lower bound per operator component")
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")
        if not 0.0 < self.theta <= 1.0:
            raise ValueError(f"theta must lie in (0, 1], got {self.theta}")
        if int(self.steps) != self.steps or self.steps < 1:
            raise ValueError("steps must be a positive integer")
        if self.coupling not in COUPLINGS:
            raise ValueError(f"coupling must be one of {COUPLINGS}")
        grids = {op.grid for op in self.d_ops}
        if len(grids) != 1:
            raise ValueError("all components must share one grid")
        chi_sum = math.fsum(op.shift for op in self.d_ops)
        if abs(chi_sum - self.theta * self.delta) > 1e-14 * max(1.0, self.theta * self.delta):
            raise ValueError("component shifts must sum to theta * delta")

    @classmethod
    def build(cls, a_ops, deltas, alpha, theta, steps, sigma1=1.0, sigma2=1.0,
              coupling="parallel"):
        """Shift each ``A_i`` by ``theta * delta_i``."""
        d_ops = tuple(make_shifted(a, theta * d) for a, d in zip(a_ops, deltas))
        return cls(d_ops, tuple(float(d) for d in deltas), alpha, theta, steps,
                   sigma1, sigma2, coupling)

    @property
    def p(self) -> int:
        return len(self.d_ops)

    @property
    def grid(self):
        return self.d_ops[0].grid

    @property
    def delta(self) -> float:
        return math.fsum(self.deltas)

    @property
    def tau(self) -> float:
        return 1.0 / self.steps

    @property
    def chis(self) -> tuple:
        return tuple(op.shift for op in self.d_ops)

    @property
    def unconditionally_stable(self) -> bool:
        return 2 * self.sigma1 >= self.p and 2 * self.sigma2 >= self.p

    def apply_D(self, y: np.ndarray) -> np.ndarray:
        return sum(op.apply_array(y) for op in self.d_ops)


@dataclass(frozen=True)
class VectorState:
    """Components ``(y_1, ..., y_p)`` at level ``n`` and level ``n - 1``."""

    current: tuple
    previous: tuple | None
    n: int

    def __post_init__(self):
        grids = {y.grid for y in self.current}
        if self.previous is not None:
            grids |= {y.grid for y in self.previous}
            if len(self.previous) != len(self.current):
                raise ValueError("levels n and n-1 have different component counts")
        if len(grids) != 1:
            raise ValueError("all components must share one grid")

    @classmethod
    def initial(cls, y0: GridFunction, p: int) -> "VectorState":
        return cls((y0,) * p, None, 0)

    @property
    def p(self) -> int:
        return len(self.current)


def _wrap(grid, arrays):
    return tuple(GridFunction(grid, a.ravel()) for a in arrays)


def first_step(y0: GridFunction, setup: SplittingSetup) -> VectorState:
    """Explicit start ``theta delta (y^1 - y^0) / tau + alpha D y^0 = 0``.

    All components coincide at levels 0 and 1.
    """
    td = setup.theta * setup.delta
    Y0 = y0.as_array()
    y1 = GridFunction(y0.grid, (Y0 - setup.tau * setup.alpha / td * setup.apply_D(Y0)).ravel())
    return VectorState((y1,) * setup.p, (y0,) * setup.p, 1)


def _step_arrays(cur, prev, n, setup: SplittingSetup):
    p, tau, alpha = setup.p, setup.tau, setup.alpha
    s1, s2 = setup.sigma1, setup.sigma2
    td = setup.theta * setup.delta
    t = n * tau
    ops = setup.d_ops
    Dcur = [op.apply_array(y) for op, y in zip(ops, cur)]
    Ddiff = [op.apply_array(yc - yp) for op, yc, yp in zip(ops, cur, prev)]
    b = s1 * t + s2 * tau * alpha
    new = [None] * p
    Dnew_diff = [None] * p
    Dnew = [None] * p
    for i in range(p):
        rhs = td * cur[i] + (s1 * t - tau * alpha * (1 - s2)) * Dcur[i] - (1 - s1) * t * Ddiff[i]
        for j in range(p):
            if j == i:
                continue
            if setup.coupling == "sequential" and j < i:
                rhs -= t * Dnew_diff[j] + tau * alpha * Dnew[j]
            else:
                rhs -= t * Ddiff[j] + tau * alpha * Dcur[j]
        try:
            new[i] = thomas_solve_array(ops[i], td, b, rhs)
        except SolverError as exc:
            raise SolverError(f"component {i + 1}: {exc}", line=exc.line, component=i + 1) from exc
        if setup.coupling == "sequential" and i < p - 1:
            Dnew[i] = ops[i].apply_array(new[i])
            Dnew_diff[i] = Dnew[i] - Dcur[i]
    return new


def splitting_step(state: VectorState, setup: SplittingSetup) -> VectorState:
    """Advance the three-level scheme from level ``n >= 1`` to ``n + 1``.

    Component ``i`` solves
    ``(theta delta I + (sigma1 t_n + sigma2 tau alpha) D_i) y_i^(n+1) = rhs_i``
    line by line, where ``rhs_i`` gathers all known terms.
    """
    if state.n < 1 or state.previous is None:
        raise ValueError("splitting_step needs levels n >= 1 and n - 1; use first_step")
    if state.p != setup.p:
        raise ValueError(f"state has {state.p} components, setup expects {setup.p}")
    if state.n >= setup.steps:
        raise ValueError("already at the final level")
    cur = [y.as_array() for y in state.current]
    prev = [y.as_array() for y in state.previous]
    new = _step_arrays(cur, prev, state.n, setup)
    grid = setup.grid
    return VectorState(_wrap(grid, new), state.current, state.n + 1)


# -- quadratic forms of the operator matrices C, A and A0 ------------------


def _arrays(v):
    return [y.as_array() if isinstance(y, GridFunction) else np.asarray(y) for y in v]


def _forms(v, setup: SplittingSetup):
    """``(sum_i (D_i v_i, v_i), ||sum_j D_j v_j||^2, sum_i ||D_i v_i||^2)``."""
    grid = setup.grid
    v = _arrays(v)
    Dv = [op.apply_array(y) for op, y in zip(setup.d_ops, v)]
    c = math.fsum(weighted_dot(grid, d, y) for d, y in zip(Dv, v))
    total = sum(Dv)
    a = weighted_dot(grid, total, total)
    a0 = math.fsum(weighted_dot(grid, d, d) for d in Dv)
    return c, a, a0


def quadratic_form_C(v, setup: SplittingSetup) -> float:
    """``||v||_C^2 = theta delta sum_i (D_i v_i, v_i)``."""
    return setup.theta * setup.delta * _forms(v, setup)[0]


def quadratic_form_A(v, setup: SplittingSetup) -> float:
    """``(A v, v) = alpha ||sum_j D_j v_j||^2``."""
    return setup.alpha * _forms(v, setup)[1]


def quadratic_form_A0(v, setup: SplittingSetup) -> float:
    """``(A0 v, v) = alpha sum_i ||D_i v_i||^2`` (block diagonal of A)."""
    return setup.alpha * _forms(v, setup)[2]


def seminorm_R(w, n: int, setup: SplittingSetup) -> float:
    """``((R^n - tau^2/4 A) w, w)`` with the time-dependent ``R^n``.

    ``R^n = tau/2 C + sigma1 tau t_n/alpha A0 - tau/2 t_n/alpha A + sigma2 tau^2/2 A0``.
    """
    c, a, a0 = _forms(w, setup)
    alpha, tau, t = setup.alpha, setup.tau, n * setup.tau
    C = setup.theta * setup.delta * c
    A = alpha * a
    A0 = alpha * a0
    return (
        0.5 * tau * C
        + setup.sigma1 * tau * t / alpha * A0
        - 0.5 * tau * t / alpha * A
        + 0.5 * setup.sigma2 * tau**2 * A0
        - 0.25 * tau**2 * A
    )


def energy_theorem2(y_next, y_cur, y_prev, n: int, setup: SplittingSetup):
    """Both sides of the per-step energy inequality at step ``n``.

    Returns ``(E_plus, E_minus)`` with
    ``E_plus = ||(y^(n+1) + y^n)/2||_A^2 + ||(y^(n+1) - y^n)/tau||_(R^n - tau^2/4 A)^2``
    and ``E_minus`` the same expression for levels ``n`` and ``n - 1``, using
    the same ``R^n``. For ``2 sigma1 >= p`` and ``2 sigma2 >= p`` the parallel
    scheme satisfies ``E_plus <= E_minus``.
    """
    nxt, cur, prv = _arrays(y_next), _arrays(y_cur), _arrays(y_prev)
    tau = setup.tau

    def side(a, b):
        mean = [(x + y) / 2 for x, y in zip(a, b)]
        rate = [(x - y) / tau for x, y in zip(a, b)]
        return quadratic_form_A(mean, setup) + seminorm_R(rate, n, setup)

    return side(nxt, cur), side(cur, prv)


@dataclass
class SplittingResult:
    """Final state plus per-step energies ``(n, E_plus, E_minus)``."""

    state: VectorState
    energies: list = field(default_factory=list)

    @property
    def components(self) -> tuple:
        return self.state.current


def run_splitting(f: GridFunction, setup: SplittingSetup, record_energy: bool = True,
                  callback=None) -> SplittingResult:
    """Explicit first step followed by ``N - 1`` splitting steps.

    ``callback(n, next_levels, current_levels, previous_levels)`` is called
    with raw arrays after every splitting step, before the levels shift.
    """
    if setup.grid != f.grid:
        raise ValueError("operators and right-hand side live on different grids")
    y0 = initial_state(f, setup.theta, setup.delta, setup.alpha)
    state = first_step(y0, setup)
    energies = []
    if setup.steps == 1:
        return SplittingResult(state, energies)
    cur = [y.as_array() for y in state.current]
    prev = [y.as_array() for y in state.previous]
    for n in range(1, setup.steps):
        new = _step_arrays(cur, prev, n, setup)
        if record_energy:
            e_plus, e_minus = energy_theorem2(new, cur, prev, n, setup)
            energies.append((n, e_plus, e_minus))
        if callback is not None:
            callback(n, new, cur, prev)
        prev, cur = cur, new
    grid = f.grid
    return SplittingResult(VectorState(_wrap(grid, cur), _wrap(grid, prev), setup.steps), energies)
