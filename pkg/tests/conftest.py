import numpy as np
import pytest

from fracell.grid import Grid2D
from fracell.operators import CoefficientField, assemble_operator


@pytest.fixture
def rng():
    return np.random.default_rng(20161016)


def laplacian(n1, n2=None, l1=1.0, l2=1.0):
    grid = Grid2D(n1, n1 if n2 is None else n2, l1, l2)
    coeff = CoefficientField.constant(grid)
    return grid, coeff, assemble_operator(grid, coeff)


def variable_problem(n1, n2=None):
    """Smooth variable k in [1, 2] and c in [0, 3]."""
    grid = Grid2D(n1, n1 if n2 is None else n2)
    coeff = CoefficientField.from_functions(
        grid,
        lambda x, y: 1.5 + 0.5 * np.sin(2 * np.pi * x) * np.cos(np.pi * y),
        lambda x, y: 3.0 * x * y,
        k_lower=1.0,
    )
    return grid, coeff, assemble_operator(grid, coeff)


# one line per acceptance criterion, shown in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
