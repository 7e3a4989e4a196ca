"""Uniform rectangular grid, grid functions and the discrete inner product.

Grid functions live on the interior nodes ``x = (i1*h1, i2*h2)`` with
``1 <= i_k <= N_k - 1``; values outside the interior are identically zero and
never stored. Values are kept in lexicographic order with ``i1`` fastest, so a
grid function reshapes to an array of shape ``(N2 - 1, N1 - 1)`` whose rows
are the grid lines in direction 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class Grid2D:
    """Uniform grid on ``(0, l1) x (0, l2)`` with ``N1 x N2`` cells."""

    n1: int
    n2: int
    l1: float = 1.0
    l2: float = 1.0

    def __post_init__(self):
        if int(self.n1) != self.n1 or int(self.n2) != self.n2:
            raise ValueError("subdivision counts must be integers")
        if self.n1 < 2 or self.n2 < 2:
            raise ValueError(f"need N1, N2 >= 2, got ({self.n1}, {self.n2})")
        if not (self.l1 > 0 and self.l2 > 0):
            raise ValueError("domain edge lengths must be positive")

    @property
    def h1(self) -> float:
        return self.l1 / self.n1

    @property
    def h2(self) -> float:
        return self.l2 / self.n2

    def h(self, direction: int) -> float:
        return (self.h1, self.h2)[_check_direction(direction) - 1]

    def subdivisions(self, direction: int) -> int:
        return (self.n1, self.n2)[_check_direction(direction) - 1]

    @property
    def shape(self) -> tuple[int, int]:
        """Array shape of a grid function: ``(N2 - 1, N1 - 1)``."""
        return (self.n2 - 1, self.n1 - 1)

    @property
    def size(self) -> int:
        """Number of interior nodes ``M = (N1 - 1)(N2 - 1)``."""
        return (self.n1 - 1) * (self.n2 - 1)

    @property
    def cell_area(self) -> float:
        return self.h1 * self.h2

    def coordinates(self) -> tuple[np.ndarray, np.ndarray]:
        """Interior node coordinates as two arrays of shape :attr:`shape`."""
        x1 = np.arange(1, self.n1) * self.h1
        x2 = np.arange(1, self.n2) * self.h2
        X2, X1 = np.meshgrid(x2, x1, indexing="ij")
        return X1, X2

    def sample(self, fn) -> "GridFunction":
        """Evaluate ``fn(x1, x2)`` (vectorized) at the interior nodes."""
        X1, X2 = self.coordinates()
        values = np.broadcast_to(np.asarray(fn(X1, X2), dtype=float), self.shape)
        return GridFunction(self, values.ravel())

    def zeros(self) -> "GridFunction":
        return GridFunction(self, np.zeros(self.size))

    def ones(self) -> "GridFunction":
        return GridFunction(self, np.ones(self.size))

    def random(self, rng: np.random.Generator) -> "GridFunction":
        return GridFunction(self, rng.standard_normal(self.size))


def _check_direction(direction: int) -> int:
    if direction not in (1, 2):
        raise ValueError(f"direction must be 1 or 2, got {direction!r}")
    return direction


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Real values on the interior nodes of a grid (read-only).

    Supports ``+``, ``-``, unary minus and multiplication by scalars so that
    small manipulations in tests and scripts stay readable.
    """

    grid: Grid2D
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.array(self.values, dtype=float).ravel()
        if values.size != self.grid.size:
            raise ValueError(
                f"expected {self.grid.size} values for {self.grid}, got {values.size}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("grid function values must be finite")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @classmethod
    def from_array(cls, grid: Grid2D, array: np.ndarray) -> "GridFunction":
        return cls(grid, np.asarray(array).ravel())

    def as_array(self) -> np.ndarray:
        """Read-only view of shape ``grid.shape`` (rows are direction-1 lines)."""
        return self.values.reshape(self.grid.shape)

    def _coerce(self, other) -> np.ndarray:
        if isinstance(other, GridFunction):
            _check_same_grid(self, other)
            return other.values
        return NotImplemented

    def __add__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return GridFunction(self.grid, self.values + v)

    def __sub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return GridFunction(self.grid, self.values - v)

    def __mul__(self, scalar):
        if isinstance(scalar, GridFunction):
            return NotImplemented
        return GridFunction(self.grid, float(scalar) * self.values)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return GridFunction(self.grid, self.values / float(scalar))

    def __neg__(self):
        return GridFunction(self.grid, -self.values)


def _check_same_grid(y: GridFunction, w: GridFunction) -> None:
    if y.grid != w.grid:
        raise ValueError(f"grid mismatch: {y.grid} vs {w.grid}")


def weighted_dot(grid: Grid2D, y: np.ndarray, w: np.ndarray) -> float:
    """``sum(y * w) * h1 * h2`` on raw value arrays.

    ``np.sum`` over a contiguous float array uses pairwise summation, which
    keeps the reduction order fixed for a given length.
    """
    return float(np.sum(np.multiply(y, w).ravel())) * grid.cell_area


def inner_product(y: GridFunction, w: GridFunction) -> float:
    """Grid inner product ``(y, w) = sum_x y(x) w(x) h1 h2``."""
    _check_same_grid(y, w)
    return weighted_dot(y.grid, y.values, w.values)


def norm_H(y: GridFunction) -> float:
    """Grid norm ``||y|| = (y, y)^(1/2)``."""
    return math.sqrt(inner_product(y, y))


def norm_energy(y: GridFunction, op) -> float:
    """Energy norm ``||y||_A = (A y, y)^(1/2)`` for a self-adjoint operator.

    Raises
    ------
    ValueError
        If the quadratic form is negative beyond rounding, which means the
        operator is not positive semi-definite on ``y``.
    """
    q = energy_form(y, op)
    if q < 0.0:
        slack = 64 * np.finfo(float).eps * op.spectral_radius_bound() * inner_product(y, y)
        if q < -slack:
            raise ValueError(f"negative quadratic form (A y, y) = {q:.3e}")
        q = 0.0
    return math.sqrt(q)


def energy_form(y: GridFunction, op) -> float:
    """Quadratic form ``(A y, y)`` without the positivity check."""
    if op.grid != y.grid:
        raise ValueError(f"grid mismatch: {op.grid} vs {y.grid}")
    return weighted_dot(y.grid, op.apply_array(y.as_array()), y.as_array())
