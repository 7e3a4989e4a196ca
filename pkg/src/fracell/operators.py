"""Direction-wise second-difference operators with Dirichlet conditions.

``A = A1 + A2`` where ``A_k`` is the three-point flux-form approximation of
``-d/dx_k (k d/dx_k)`` plus half of the reaction term ``c``. Each ``A_k`` is
stored as one tridiagonal matrix per grid line in direction ``k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
import scipy.sparse as sp

from .grid import Grid2D, GridFunction, _check_direction

DELTA_RULES = ("certified", "reduced_index")


@dataclass(frozen=True, eq=False)
class CoefficientField:
    """Samples of ``k`` at edge midpoints and ``c`` at interior nodes.

    Attributes
    ----------
    k_mid1 : ndarray, shape (N2 - 1, N1)
        ``k((i1 - 1/2) h1, i2 h2)`` for ``i1 = 1..N1``.
    k_mid2 : ndarray, shape (N2, N1 - 1)
        ``k(i1 h1, (i2 - 1/2) h2)`` for ``i2 = 1..N2``.
    c_node : ndarray, shape (N2 - 1, N1 - 1)
    k_lower : float
        Lower bound ``k1`` of the diffusion coefficient.
    """

    grid: Grid2D
    k_mid1: np.ndarray
    k_mid2: np.ndarray
    c_node: np.ndarray
    k_lower: float

    def __post_init__(self):
        g = self.grid
        for name, shape in (
            ("k_mid1", (g.n2 - 1, g.n1)),
            ("k_mid2", (g.n2, g.n1 - 1)),
            ("c_node", g.shape),
        ):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape != shape:
                raise ValueError(f"{name} has shape {arr.shape}, expected {shape}")
            object.__setattr__(self, name, arr)
        if not self.k_lower > 0:
            raise ValueError("k_lower must be positive")
        if self.k_mid1.min() < self.k_lower or self.k_mid2.min() < self.k_lower:
            raise ValueError("k samples fall below k_lower")
        if self.c_node.min() < 0:
            raise ValueError("c must be nonnegative")

    @classmethod
    def from_functions(cls, grid: Grid2D, k, c=None, k_lower: float | None = None):
        """Sample vectorized callables ``k(x1, x2)`` and ``c(x1, x2)``.

        Without ``k_lower`` the smallest sampled value of ``k`` is used, which
        is only a bound for the sampled operator, not for the continuous one.
        """
        h1, h2 = grid.h1, grid.h2
        x1m = (np.arange(1, grid.n1 + 1) - 0.5) * h1
        x2n = np.arange(1, grid.n2) * h2
        x1n = np.arange(1, grid.n1) * h1
        x2m = (np.arange(1, grid.n2 + 1) - 0.5) * h2

        def sample(fn, xa, xb):
            B, A = np.meshgrid(xb, xa, indexing="ij")
            return np.broadcast_to(np.asarray(fn(A, B), dtype=float), B.shape).copy()

        k_mid1 = sample(k, x1m, x2n)
        k_mid2 = sample(k, x1n, x2m)
        c_node = np.zeros(grid.shape) if c is None else sample(c, x1n, x2n)
        if k_lower is None:
            k_lower = float(min(k_mid1.min(), k_mid2.min()))
        return cls(grid, k_mid1, k_mid2, c_node, float(k_lower))

    @classmethod
    def constant(cls, grid: Grid2D, k: float = 1.0, c: float = 0.0):
        return cls(
            grid,
            np.full((grid.n2 - 1, grid.n1), float(k)),
            np.full((grid.n2, grid.n1 - 1), float(k)),
            np.full(grid.shape, float(c)),
            float(k),
        )


@dataclass(frozen=True, eq=False)
class SplitOperator:
    """One-directional operator ``A_k - shift * I`` stored line by line.

    ``sub``, ``diag`` and ``sup`` have shape ``(n_lines, n)``: row ``j`` of a
    line reads ``sub[j] y[j-1] + diag[j] y[j] + sup[j] y[j+1]``. ``sub[:, 0]``
    and ``sup[:, -1]`` are zero. The stored diagonal excludes the shift.
    """

    grid: Grid2D
    direction: int
    sub: np.ndarray
    diag: np.ndarray
    sup: np.ndarray
    shift: float = 0.0

    def to_lines(self, array: np.ndarray) -> np.ndarray:
        """View a grid-shaped array as ``(n_lines, n)`` along this direction."""
        return array if self.direction == 1 else array.T

    def from_lines(self, lines: np.ndarray) -> np.ndarray:
        return lines if self.direction == 1 else lines.T

    def apply_array(self, y: np.ndarray) -> np.ndarray:
        Y = self.to_lines(np.asarray(y).reshape(self.grid.shape))
        Z = (self.diag - self.shift) * Y
        Z[:, 1:] += self.sub[:, 1:] * Y[:, :-1]
        Z[:, :-1] += self.sup[:, :-1] * Y[:, 1:]
        return self.from_lines(Z)

    def diagonal_array(self) -> np.ndarray:
        return self.from_lines(self.diag - self.shift)

    def spectral_radius_bound(self) -> float:
        """Gershgorin bound on ``|lambda|``."""
        return float(np.max(np.abs(self.diag - self.shift) + np.abs(self.sub) + np.abs(self.sup)))

    def to_sparse(self) -> sp.csr_matrix:
        """Assembled ``M x M`` matrix in the lexicographic node ordering."""
        g = self.grid
        idx = self.to_lines(np.arange(g.size).reshape(g.shape))
        rows = [idx.ravel(), idx[:, 1:].ravel(), idx[:, :-1].ravel()]
        cols = [idx.ravel(), idx[:, :-1].ravel(), idx[:, 1:].ravel()]
        vals = [
            (self.diag - self.shift).ravel(),
            self.sub[:, 1:].ravel(),
            self.sup[:, :-1].ravel(),
        ]
        return sp.csr_matrix(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
            shape=(g.size, g.size),
        )


@dataclass(frozen=True, eq=False)
class FullOperator:
    """``A1 + A2 - shift * I`` applied as a whole."""

    a1: SplitOperator
    a2: SplitOperator
    shift: float = 0.0

    def __post_init__(self):
        if self.a1.grid != self.a2.grid:
            raise ValueError("direction operators live on different grids")
        if (self.a1.direction, self.a2.direction) != (1, 2):
            raise ValueError("expected direction-1 and direction-2 operators")

    @property
    def grid(self) -> Grid2D:
        return self.a1.grid

    @property
    def parts(self) -> tuple[SplitOperator, SplitOperator]:
        return (self.a1, self.a2)

    def apply_array(self, y: np.ndarray) -> np.ndarray:
        Y = np.asarray(y).reshape(self.grid.shape)
        Z = self.a1.apply_array(Y) + self.a2.apply_array(Y)
        if self.shift:
            Z -= self.shift * Y
        return Z

    def diagonal_array(self) -> np.ndarray:
        return self.a1.diagonal_array() + self.a2.diagonal_array() - self.shift

    def spectral_radius_bound(self) -> float:
        return self.a1.spectral_radius_bound() + self.a2.spectral_radius_bound() + abs(self.shift)

    def to_sparse(self) -> sp.csr_matrix:
        M = self.a1.to_sparse() + self.a2.to_sparse()
        if self.shift:
            M = M - self.shift * sp.identity(self.grid.size, format="csr")
        return M.tocsr()

    def shifted(self, shift: float) -> "FullOperator":
        """Same operator with ``shift`` added to the current shift."""
        return replace(self, shift=self.shift + shift)


def assemble_direction_operator(
    grid: Grid2D, coeff: CoefficientField, direction: int
) -> SplitOperator:
    """Flux-form three-point operator in one direction.

    Boundary-adjacent rows drop the neighbour outside the domain but keep its
    flux coefficient on the diagonal. Each direction carries ``c / 2`` so that
    ``A1 + A2`` contains ``c`` exactly once.
    """
    _check_direction(direction)
    if coeff.grid != grid:
        raise ValueError("coefficient field belongs to a different grid")
    h2inv = 1.0 / grid.h(direction) ** 2
    if direction == 1:
        k_edges = coeff.k_mid1  # (lines, n + 1)
        c_lines = coeff.c_node
    else:
        k_edges = coeff.k_mid2.T
        c_lines = coeff.c_node.T
    k_left = k_edges[:, :-1]
    k_right = k_edges[:, 1:]
    diag = (k_left + k_right) * h2inv + 0.5 * c_lines
    sub = -k_left * h2inv
    sup = -k_right * h2inv
    sub[:, 0] = 0.0
    sup[:, -1] = 0.0
    return SplitOperator(grid, direction, sub, diag, sup)


def assemble_operator(grid: Grid2D, coeff: CoefficientField) -> FullOperator:
    """``A = A1 + A2`` for the given coefficients."""
    return FullOperator(
        assemble_direction_operator(grid, coeff, 1),
        assemble_direction_operator(grid, coeff, 2),
    )


def spectral_lower_bound(
    grid: Grid2D, coeff: CoefficientField, direction: int, rule: str = "certified"
) -> float:
    """Lower spectral bound ``delta_k`` of the direction-``k`` operator.

    ``rule="certified"`` gives ``k1 (4/h^2) sin^2(pi / (2 N))``, the smallest
    eigenvalue of the 1-D Dirichlet Laplacian scaled by the lower bound of
    ``k``. ``rule="reduced_index"`` uses ``N - 1`` in place of ``N``; it
    slightly overestimates the smallest eigenvalue (by a factor close to
    ``1 + 2/N``) and is kept because the reference error tables were produced
    with it.
    """
    _check_direction(direction)
    n = grid.subdivisions(direction)
    h = grid.h(direction)
    if rule == "certified":
        m = n
    elif rule == "reduced_index":
        if n < 3:
            raise ValueError("reduced_index rule needs at least 3 subdivisions")
        m = n - 1
    else:
        raise ValueError(f"unknown delta rule {rule!r}; expected one of {DELTA_RULES}")
    return coeff.k_lower * 4.0 / h**2 * math.sin(math.pi / (2 * m)) ** 2


def total_lower_bound(grid: Grid2D, coeff: CoefficientField, rule: str = "certified") -> float:
    """``delta = delta_1 + delta_2``."""
    return sum(spectral_lower_bound(grid, coeff, d, rule) for d in (1, 2))


def make_shifted(op: SplitOperator, chi: float) -> SplitOperator:
    """``op - chi * I`` (shifts accumulate)."""
    return replace(op, shift=op.shift + float(chi))


def apply(op, y: GridFunction) -> GridFunction:
    """Apply a :class:`SplitOperator` or :class:`FullOperator` to ``y``."""
    if op.grid != y.grid:
        raise ValueError(f"grid mismatch: {op.grid} vs {y.grid}")
    return GridFunction(y.grid, op.apply_array(y.as_array()).ravel())
