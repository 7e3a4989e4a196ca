"""Per-step linear solvers: batched Thomas elimination and Jacobi-PCG."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import GridFunction
from .operators import SplitOperator


class SolverError(RuntimeError):
    """A linear solve failed (zero pivot, breakdown or no convergence)."""

    def __init__(self, message: str, line: int | None = None, component: int | None = None):
        super().__init__(message)
        self.line = line
        self.component = component


@dataclass(frozen=True)
class ShiftedLineSystem:
    """``a * I + b * base`` with ``base`` tridiagonal on every line."""

    base: SplitOperator
    a: float
    b: float = 1.0

    def __post_init__(self):
        if self.a < 0 or self.b < 0:
            raise ValueError(f"need a >= 0 and b >= 0, got a={self.a}, b={self.b}")

    def apply_array(self, y: np.ndarray) -> np.ndarray:
        Y = np.asarray(y).reshape(self.base.grid.shape)
        return self.a * Y + self.b * self.base.apply_array(Y)


def thomas_solve_array(base: SplitOperator, a: float, b: float, rhs: np.ndarray) -> np.ndarray:
    """Solve ``(a I + b base) y = rhs`` on every line of ``base`` at once.

    ``rhs`` is grid-shaped; so is the result. Elimination runs without
    pivoting, which is safe for the diagonally dominant systems used here; a
    pivot that is not safely positive raises :class:`SolverError`.
    """
    grid = base.grid
    # (n, n_lines) layout so that each elimination step touches a contiguous row
    r = np.array(base.to_lines(np.asarray(rhs, dtype=float).reshape(grid.shape)).T)
    lower = (b * base.sub).T
    upper = (b * base.sup).T
    d = (a + b * (base.diag - base.shift)).T.copy()
    n = d.shape[0]
    scale = np.abs(d).max(axis=0) + np.abs(lower).max(axis=0) + np.abs(upper).max(axis=0)
    tiny = 1e3 * np.finfo(float).eps * np.where(scale > 0, scale, 1.0)

    def check(j):
        bad = d[j] <= tiny
        if np.any(bad):
            line = int(np.flatnonzero(bad)[0])
            raise SolverError(
                f"non-positive pivot {d[j, line]:.3e} at row {j} of line {line} "
                f"(direction {base.direction})",
                line=line,
            )

    check(0)
    for j in range(1, n):
        m = lower[j] / d[j - 1]
        d[j] -= m * upper[j - 1]
        r[j] -= m * r[j - 1]
        check(j)
    r[n - 1] /= d[n - 1]
    for j in range(n - 2, -1, -1):
        r[j] = (r[j] - upper[j] * r[j + 1]) / d[j]
    return base.from_lines(r.T)


def thomas_solve_lines(system: ShiftedLineSystem, rhs: GridFunction) -> GridFunction:
    """Line-by-line tridiagonal solve of ``(a I + b base) y = rhs``."""
    if rhs.grid != system.base.grid:
        raise ValueError("right-hand side lives on a different grid")
    y = thomas_solve_array(system.base, system.a, system.b, rhs.as_array())
    return GridFunction(rhs.grid, y.ravel())


def pcg(matvec, diag: np.ndarray, rhs: np.ndarray, tol: float, x0=None, maxiter=None):
    """Jacobi-preconditioned conjugate gradients on flat arrays.

    Stops when ``||r|| <= tol * ||rhs||`` (Euclidean norms; the constant grid
    weight cancels). Returns ``(x, iterations)``.
    """
    b = np.asarray(rhs, dtype=float).ravel()
    n = b.size
    maxiter = 10 * n if maxiter is None else maxiter
    if np.any(diag <= 0):
        raise SolverError("Jacobi preconditioner has non-positive entries")
    dinv = 1.0 / np.asarray(diag, dtype=float).ravel()
    bnorm = np.linalg.norm(b)
    if bnorm == 0.0:
        return np.zeros(n), 0
    if x0 is None:
        x = np.zeros(n)
        r = b.copy()
    else:
        x = np.array(x0, dtype=float).ravel()
        r = b - matvec(x)
    target = tol * bnorm
    if np.linalg.norm(r) <= target:
        return x, 0
    z = dinv * r
    p = z.copy()
    rz = r @ z
    for it in range(1, maxiter + 1):
        q = matvec(p)
        pq = p @ q
        if not pq > 0:
            raise SolverError(
                f"CG breakdown (p.Ap = {pq:.3e}): operator not SPD or tolerance "
                "below the rounding level"
            )
        step = rz / pq
        x += step * p
        r -= step * q
        if np.linalg.norm(r) <= target:
            return x, it
        z = dinv * r
        rz_new = r @ z
        p *= rz_new / rz
        p += z
        rz = rz_new
    raise SolverError(f"CG did not reach tol={tol:g} within {maxiter} iterations")


def spd_solve_array(op, a: float, b: float, rhs: np.ndarray, tol: float = 1e-12, x0=None):
    """Solve ``(a I + b op) y = rhs`` by PCG; returns ``(y, iterations)``."""
    shape = op.grid.shape
    if a < 0 or b < 0:
        raise ValueError(f"need a >= 0 and b >= 0, got a={a}, b={b}")

    def matvec(v):
        V = v.reshape(shape)
        return (a * V + b * op.apply_array(V)).ravel()

    diag = a + b * op.diagonal_array()
    x, its = pcg(matvec, diag.ravel(), rhs, tol, x0=None if x0 is None else np.ravel(x0))
    return x.reshape(shape), its


def spd_solve(op, rhs: GridFunction, a: float, b: float = 1.0, tol: float = 1e-12) -> GridFunction:
    """Solve ``(a I + b op) y = rhs`` for a self-adjoint ``op``.

    ``op`` is a :class:`~fracell.operators.FullOperator` (or a single
    :class:`~fracell.operators.SplitOperator`). The iteration count is fixed
    for fixed inputs; failure to converge within ``10 M`` iterations raises
    :class:`SolverError`.
    """
    if rhs.grid != op.grid:
        raise ValueError("right-hand side lives on a different grid")
    y, _ = spd_solve_array(op, a, b, rhs.as_array(), tol)
    return GridFunction(rhs.grid, y.ravel())
