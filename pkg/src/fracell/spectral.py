"""Spectral oracle: eigenpairs of the discrete operator and ``A^s`` applied
mode by mode.

Two bases are provided. :func:`analytic_laplacian_basis` uses the closed-form
sine eigenvectors of the constant-coefficient Laplacian and stores them
separably (two 1-D matrices), so it scales to fine grids. :func:`dense_basis`
diagonalizes any assembled operator and is meant for small grids only.
"""

from __future__ import annotations

import math

import numpy as np

from .grid import Grid2D, GridFunction

DENSE_LIMIT = 4096


class EigenBasis:
    """Eigenvalues (ascending) and grid-orthonormal eigenvectors.

    Subclasses implement :meth:`coefficients` (``y -> (y, phi_m)``) and
    :meth:`synthesize` (the inverse map).
    """

    provenance = "abstract"

    def __init__(self, grid: Grid2D, eigenvalues: np.ndarray):
        self.grid = grid
        self.eigenvalues = np.asarray(eigenvalues, dtype=float)
        self.eigenvalues.flags.writeable = False

    def __len__(self):
        return self.eigenvalues.size

    def coefficients(self, y: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def synthesize(self, coeffs: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def eigenvector(self, m: int) -> GridFunction:
        """The ``m``-th eigenvector (0-based, ascending eigenvalue order)."""
        e = np.zeros(len(self))
        e[m] = 1.0
        return GridFunction(self.grid, self.synthesize(e).ravel())

    def apply_function(self, fn, y: GridFunction) -> GridFunction:
        """``sum_m (y, phi_m) fn(lambda_m) phi_m``."""
        if y.grid != self.grid:
            raise ValueError("grid mismatch between basis and grid function")
        c = self.coefficients(y.as_array())
        return GridFunction(self.grid, self.synthesize(fn(self.eigenvalues) * c).ravel())


class SeparableBasis(EigenBasis):
    """Tensor-product sine basis of the Dirichlet Laplacian."""

    provenance = "analytic"

    def __init__(self, grid: Grid2D):
        lam1, self._v1 = _sine_basis_1d(grid.n1, grid.l1)
        lam2, self._v2 = _sine_basis_1d(grid.n2, grid.l2)
        self.lambda1 = lam1
        self.lambda2 = lam2
        table = lam2[:, None] + lam1[None, :]  # shape (m2, m1), same as grid arrays
        self._order = np.argsort(table.ravel(), kind="stable")
        m2, m1 = np.unravel_index(self._order, table.shape)
        # 1-based mode numbers (m1, m2) in ascending eigenvalue order
        self.modes = np.column_stack([m1 + 1, m2 + 1])
        # eigenvalues of the direction-1 and direction-2 parts for each mode
        self.part_eigenvalues = np.column_stack([lam1[m1], lam2[m2]])
        super().__init__(grid, table.ravel()[self._order])

    def coefficients(self, y):
        Y = np.asarray(y).reshape(self.grid.shape)
        C = self._v2.T @ Y @ self._v1 * self.grid.cell_area
        return C.ravel()[self._order]

    def synthesize(self, coeffs):
        flat = np.empty(len(self))
        flat[self._order] = coeffs
        C = flat.reshape(self.grid.shape)
        return self._v2 @ C @ self._v1.T

    def mode_index(self, m1: int, m2: int) -> int:
        """Position of mode ``(m1, m2)`` in ascending order."""
        hits = np.flatnonzero((self.modes[:, 0] == m1) & (self.modes[:, 1] == m2))
        if hits.size == 0:
            raise ValueError(f"mode ({m1}, {m2}) not on this grid")
        return int(hits[0])


class DenseBasis(EigenBasis):
    """Full symmetric eigendecomposition of an assembled operator."""

    provenance = "dense-numeric"

    def __init__(self, grid: Grid2D, eigenvalues, vectors):
        super().__init__(grid, eigenvalues)
        self._vectors = vectors

    def coefficients(self, y):
        return self._vectors.T @ np.asarray(y).ravel() * self.grid.cell_area

    def synthesize(self, coeffs):
        return (self._vectors @ coeffs).reshape(self.grid.shape)


def _sine_basis_1d(n: int, length: float):
    h = length / n
    m = np.arange(1, n)
    lam = 4.0 / h**2 * np.sin(np.pi * m / (2 * n)) ** 2
    i = np.arange(1, n)
    # columns are modes; sum_i v^2 h = 1
    v = math.sqrt(2.0 / length) * np.sin(np.pi * np.outer(i, m) / n)
    return lam, v


def analytic_laplacian_basis(grid: Grid2D) -> SeparableBasis:
    """Closed-form eigenpairs of the discrete Laplacian (``k = 1``, ``c = 0``).

    ``phi(i1, i2) ~ sin(pi m1 i1 / N1) sin(pi m2 i2 / N2)`` with eigenvalue
    ``sum_k (4 / h_k^2) sin^2(pi m_k / (2 N_k))``.
    """
    return SeparableBasis(grid)


def dense_basis(op) -> DenseBasis:
    """Numerical eigendecomposition of ``op`` (``M <= 4096``)."""
    grid = op.grid
    if grid.size > DENSE_LIMIT:
        raise ValueError(f"dense basis limited to M <= {DENSE_LIMIT}, got M = {grid.size}")
    mat = op.to_sparse().toarray()
    mat = 0.5 * (mat + mat.T)
    lam, vec = np.linalg.eigh(mat)
    return DenseBasis(grid, lam, vec / math.sqrt(grid.cell_area))


def _power(basis: EigenBasis, s: float, y: GridFunction) -> GridFunction:
    if basis.eigenvalues[0] <= 0:
        raise ValueError("fractional powers need a positive definite operator")
    return basis.apply_function(lambda lam: np.exp(s * np.log(lam)), y)


def apply_fractional_power(basis: EigenBasis, alpha: float, y: GridFunction) -> GridFunction:
    """``A^alpha y`` for ``0 < alpha <= 1``."""
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    return _power(basis, alpha, y)


def reference_solve(basis: EigenBasis, alpha: float, f: GridFunction) -> GridFunction:
    """Exact discrete solution ``w = A^(-alpha) f``."""
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    return _power(basis, -alpha, f)


# Continuous eigenvalues of the two modes in the model right-hand side.
MODEL_MODES = ((1, 1), (3, 2))


def model_mode_eigenvalues() -> tuple[float, float]:
    """``pi^2 (m1^2 + m2^2)`` for the modes of the model problem."""
    return tuple(math.pi**2 * (m1 * m1 + m2 * m2) for m1, m2 in MODEL_MODES)


def exact_continuous_solution(grid: Grid2D, alpha: float) -> GridFunction:
    """Exact solution of the unit-square model problem at the interior nodes.

    For ``f = sin(pi x1) sin(pi x2) + sin(3 pi x1) sin(2 pi x2)`` the solution
    is ``nu1^-alpha sin(pi x1) sin(pi x2) + nu2^-alpha sin(3 pi x1) sin(2 pi x2)``
    with ``nu1 = 2 pi^2`` and ``nu2 = 13 pi^2``.
    """
    if grid.l1 != 1.0 or grid.l2 != 1.0:
        raise ValueError("the model problem is posed on the unit square")
    nu = model_mode_eigenvalues()

    def u(x1, x2):
        total = 0.0
        for (m1, m2), nu_k in zip(MODEL_MODES, nu):
            total = total + nu_k ** (-alpha) * np.sin(m1 * np.pi * x1) * np.sin(m2 * np.pi * x2)
        return total

    return grid.sample(u)
