"""Internal consistency of the published tables.

For any error vector e, ||e||_A >= sqrt(lambda_min) ||e||, and lambda_min of
the discrete Laplacian is close to 2 pi^2 on every grid used. Published
(eps, eps_A) pairs that break this bound cannot both be correct.
"""

import math

import published as P

# loose lower bound on sqrt(lambda_min) valid for all grids in the tables
SQRT_LAMBDA_MIN = 4.4


def inconsistent_cells():
    found = set()
    tables = {1: (P.TABLE_1, P.STEPS), 2: (P.TABLE_2, P.STEPS), 3: (P.TABLE_3, P.GRIDS),
              4: (P.TABLE_4, P.ALPHAS)}
    for tid, (table, cols) in tables.items():
        for (group, q), values in table.items():
            if q != "eps":
                continue
            for col, eps, eps_a in zip(cols, values, table[(group, "eps_A")]):
                if eps_a < SQRT_LAMBDA_MIN * eps:
                    found.add((tid, group, col))
    for tid, table in ((5, P.TABLE_5), (6, P.TABLE_6)):
        for comp in (1, 2):
            for col, eps, eps_a in zip(P.STEPS, table[("eps", comp)], table[("eps_A", comp)]):
                if eps_a < SQRT_LAMBDA_MIN * eps:
                    found.add((tid, comp, col))
    return found


def test_bound_constant_is_safe():
    # smallest lambda_min among the grids used (N1 = 25)
    lam = 2 * 4 * 25**2 * math.sin(math.pi / 50) ** 2
    assert math.sqrt(lam) > SQRT_LAMBDA_MIN


def test_only_two_published_pairs_are_inconsistent():
    assert inconsistent_cells() == {(3, 0.5, 400), (4, 0.5, 0.1)}


def test_duplicate_configuration_disagrees_across_tables():
    # sigma = 0.5, theta = 1, N = 80, 100 x 100, alpha = 0.5 appears three times
    t2 = P.TABLE_2[(1.0, "eps")][4]
    t3 = P.TABLE_3[(0.5, "eps")][2]
    t4 = P.TABLE_4[(0.5, "eps")][2]
    assert t3 == t4 == 0.0000172
    assert t2 == 0.0000296
