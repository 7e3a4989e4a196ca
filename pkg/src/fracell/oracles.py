"""Mode-by-mode recurrences that reproduce the time-stepping schemes exactly.

When ``A`` is the constant-coefficient Laplacian, the sine eigenvectors are
shared by ``A``, ``A_1`` and ``A_2``, so both schemes act on each spectral
coefficient independently. These recurrences use no operator application
and no linear solve, which makes them an independent check of the
grid-level implementations.
"""

from __future__ import annotations

import math

import numpy as np

from .grid import GridFunction
from .spectral import SeparableBasis


def two_level_factors(lam: np.ndarray, n: int, alpha, theta, sigma, steps, delta) -> np.ndarray:
    """Amplification factors ``y^(n+1) = r_n y^n`` of the two-level scheme."""
    tau = 1.0 / steps
    td = theta * delta
    lam_d = lam - td
    t_sigma = (n + sigma) * tau
    return (td + (t_sigma - alpha * tau * (1 - sigma)) * lam_d) / (
        td + (t_sigma + alpha * tau * sigma) * lam_d
    )


def modal_two_level(basis, f: GridFunction, alpha, theta, sigma, steps, delta) -> GridFunction:
    """Two-level scheme evaluated in the eigenbasis of ``A``."""
    c = basis.coefficients(f.as_array()) * math.exp(-alpha * math.log(theta * delta))
    for n in range(steps):
        c = c * two_level_factors(basis.eigenvalues, n, alpha, theta, sigma, steps, delta)
    return GridFunction(f.grid, basis.synthesize(c).ravel())


def modal_splitting(
    basis: SeparableBasis,
    f: GridFunction,
    alpha,
    theta,
    deltas,
    steps,
    sigma1=1.0,
    sigma2=1.0,
    coupling="parallel",
):
    """Two-component splitting scheme evaluated mode by mode.

    Returns the final components ``(y_1^N, y_2^N)``.
    """
    if not isinstance(basis, SeparableBasis):
        raise TypeError("modal splitting needs the separable Laplacian basis")
    d1, d2 = deltas
    td = theta * (d1 + d2)
    tau = 1.0 / steps
    lam = [basis.part_eigenvalues[:, 0] - theta * d1, basis.part_eigenvalues[:, 1] - theta * d2]
    y0 = basis.coefficients(f.as_array()) * math.exp(-alpha * math.log(td))
    prev = [y0, y0]
    first = y0 - tau * alpha / td * (lam[0] + lam[1]) * y0
    cur = [first, first.copy()]
    for n in range(1, steps):
        t = n * tau
        new = [None, None]
        for i in (0, 1):
            j = 1 - i
            if coupling == "sequential" and j < i:
                yj, yj_old = new[j], cur[j]
            else:
                yj, yj_old = cur[j], prev[j]
            rhs = (
                td * cur[i]
                + (sigma1 * t - tau * alpha * (1 - sigma2)) * lam[i] * cur[i]
                - (1 - sigma1) * t * lam[i] * (cur[i] - prev[i])
                - t * lam[j] * (yj - yj_old)
                - tau * alpha * lam[j] * yj
            )
            new[i] = rhs / (td + (sigma1 * t + sigma2 * tau * alpha) * lam[i])
        prev, cur = cur, new
    if steps == 1:
        cur = [first, first]
    return tuple(GridFunction(f.grid, basis.synthesize(c).ravel()) for c in cur)
