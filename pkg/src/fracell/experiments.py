"""Model problem, error reports, table reproduction and convergence sweeps."""

from __future__ import annotations

import functools
import math
import time
import warnings
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .evolution import SchemeConfig, SemidefiniteShiftWarning, run_two_level
from .grid import Grid2D, GridFunction, norm_energy, norm_H
from .operators import (
    DELTA_RULES,
    CoefficientField,
    FullOperator,
    assemble_operator,
    spectral_lower_bound,
)
from .oracles import modal_splitting, modal_two_level
from .spectral import (
    MODEL_MODES,
    analytic_laplacian_basis,
    apply_fractional_power,
    exact_continuous_solution,
    reference_solve,
)
from .splitting import COUPLINGS, SplittingSetup, run_splitting

PRESETS = ("model",)
SCHEMES = ("two_level", "splitting")
CSV_COLUMNS = (
    "scheme", "alpha", "theta", "sigma1", "sigma2", "n1", "n2", "steps",
    "component", "eps", "eps_A", "eps_ref", "wall_ms",
)
VERIFY_COLUMNS = ("oracle_dev", "roundtrip")

# oracle cross-check limits used by --verify
ORACLE_TOL = 1e-8
ROUNDTRIP_TOL = 1e-9


def preset_paper_problem(n1: int, n2: int, l1: float = 1.0, l2: float = 1.0):
    """Laplacian coefficients and the two-mode right-hand side.

    ``k = 1``, ``c = 0`` and
    ``f = sin(pi x1) sin(pi x2) + sin(3 pi x1) sin(2 pi x2)`` on the unit square.
    """
    grid = Grid2D(n1, n2, l1, l2)
    coeff = CoefficientField.constant(grid, k=1.0, c=0.0)

    def rhs(x1, x2):
        return sum(np.sin(m1 * np.pi * x1) * np.sin(m2 * np.pi * x2) for m1, m2 in MODEL_MODES)

    return coeff, grid.sample(rhs)


@dataclass(frozen=True, eq=False)
class ModelProblem:
    grid: Grid2D
    coeff: CoefficientField
    f: GridFunction
    A: FullOperator

    @functools.cached_property
    def basis(self):
        return analytic_laplacian_basis(self.grid)

    def deltas(self, rule: str = "certified") -> tuple[float, float]:
        return tuple(spectral_lower_bound(self.grid, self.coeff, d, rule) for d in (1, 2))

    @functools.lru_cache(maxsize=None)
    def exact(self, alpha: float) -> GridFunction:
        return exact_continuous_solution(self.grid, alpha)

    @functools.lru_cache(maxsize=None)
    def reference(self, alpha: float) -> GridFunction:
        return reference_solve(self.basis, alpha, self.f)


@functools.lru_cache(maxsize=8)
def model_problem(n1: int, n2: int | None = None) -> ModelProblem:
    n2 = n1 if n2 is None else n2
    coeff, f = preset_paper_problem(n1, n2)
    return ModelProblem(coeff.grid, coeff, f, assemble_operator(coeff.grid, coeff))


@dataclass
class ErrorReport:
    """One output row: errors of one solution component."""

    scheme: str
    alpha: float
    theta: float
    sigma1: float
    sigma2: float
    n1: int
    n2: int
    steps: int
    component: int
    eps: float
    eps_A: float
    eps_ref: float
    wall_ms: float
    oracle_dev: float | None = None
    roundtrip: float | None = None

    def __post_init__(self):
        for name in ("eps", "eps_A", "eps_ref"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise ValueError(f"{name} must be finite and nonnegative, got {v}")

    def as_row(self, verify: bool = False) -> dict:
        cols = CSV_COLUMNS + (VERIFY_COLUMNS if verify else ())
        return {k: getattr(self, k) for k in cols}


@dataclass(frozen=True)
class ComponentErrors:
    component: int
    eps: float
    eps_A: float
    eps_ref: float


def compute_errors(y, problem: ModelProblem, alpha: float) -> list[ComponentErrors]:
    """``eps = ||y - u||``, ``eps_A = ||y - u||_A`` and ``eps_ref = ||y - w||``.

    ``u`` is the exact continuous solution at the nodes and ``w`` the exact
    discrete solution. ``y`` is a grid function (component 0) or a sequence of
    splitting components (numbered from 1).
    """
    u = problem.exact(alpha)
    w = problem.reference(alpha)
    if isinstance(y, GridFunction):
        items = [(0, y)]
    else:
        components = getattr(y, "current", y)
        items = list(enumerate(components, start=1))
    out = []
    for k, yk in items:
        e = yk - u
        out.append(ComponentErrors(k, norm_H(e), norm_energy(e, problem.A), norm_H(yk - w)))
    return out


def run_case(
    problem: ModelProblem,
    scheme: str,
    alpha: float,
    theta: float,
    steps: int,
    sigma: float = 1.0,
    sigma1: float = 1.0,
    sigma2: float = 1.0,
    delta_rule: str = "certified",
    coupling: str = "parallel",
    tol: float = 1e-12,
    verify: bool = False,
) -> list[ErrorReport]:
    """Run one scheme on the model problem and report its errors."""
    if scheme not in SCHEMES:
        raise ValueError(f"scheme must be one of {SCHEMES}, got {scheme!r}")
    deltas = problem.deltas(delta_rule)
    delta = math.fsum(deltas)
    g = problem.grid
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SemidefiniteShiftWarning)
        start = time.perf_counter()
        if scheme == "two_level":
            cfg = SchemeConfig(alpha, theta, sigma, steps, tol)
            solutions = [run_two_level(problem.f, cfg, problem.A, delta).solution]
            sigma1 = sigma2 = sigma
        else:
            setup = SplittingSetup.build(
                problem.A.parts, deltas, alpha, theta, steps, sigma1, sigma2, coupling
            )
            solutions = list(run_splitting(problem.f, setup, record_energy=False).components)
        wall_ms = 1e3 * (time.perf_counter() - start)
    errors = compute_errors(solutions[0] if scheme == "two_level" else solutions, problem, alpha)

    checks = [(None, None)] * len(solutions)
    if verify:
        if scheme == "two_level":
            modal = [modal_two_level(problem.basis, problem.f, alpha, theta, sigma, steps, delta)]
        else:
            modal = modal_splitting(
                problem.basis, problem.f, alpha, theta, deltas, steps, sigma1, sigma2, coupling
            )
        w = problem.reference(alpha)
        back = apply_fractional_power(problem.basis, alpha, w)
        roundtrip = norm_H(back - problem.f) / norm_H(problem.f)
        checks = [(norm_H(y - m) / norm_H(m), roundtrip) for y, m in zip(solutions, modal)]

    return [
        ErrorReport(
            scheme, alpha, theta, sigma1, sigma2, g.n1, g.n2, steps, e.component,
            e.eps, e.eps_A, e.eps_ref, wall_ms, *chk,
        )
        for e, chk in zip(errors, checks)
    ]


def verification_failures(rows: list[ErrorReport]) -> list[str]:
    """Rows whose oracle cross-checks exceed the verification limits."""
    bad = []
    for r in rows:
        if r.oracle_dev is not None and not r.oracle_dev <= ORACLE_TOL:
            bad.append(f"{r.scheme} steps={r.steps} component={r.component}: "
                       f"oracle deviation {r.oracle_dev:.2e} > {ORACLE_TOL:g}")
        if r.roundtrip is not None and not r.roundtrip <= ROUNDTRIP_TOL:
            bad.append(f"{r.scheme} alpha={r.alpha}: round trip {r.roundtrip:.2e} > {ROUNDTRIP_TOL:g}")
    return bad


# -- tables -----------------------------------------------------------------

STEP_COUNTS = (5, 10, 20, 40, 80)


@dataclass(frozen=True)
class TableSpec:
    """Parameter grid of one error table.

    ``column`` names the parameter that varies across columns; ``row_groups``
    lists the parameter set of each group of rows (one group yields an ``eps``
    and an ``eps_A`` row per component).
    """

    table_id: int
    title: str
    scheme: str
    column: str
    column_values: tuple
    row_groups: tuple
    base: dict = field(default_factory=dict)


TABLES = {
    1: TableSpec(1, "two-level scheme, sigma = 1", "two_level", "steps", STEP_COUNTS,
                 ({"theta": 1.0}, {"theta": 0.5}), {"sigma": 1.0, "n": 100, "alpha": 0.5}),
    2: TableSpec(2, "two-level scheme, sigma = 0.5", "two_level", "steps", STEP_COUNTS,
                 ({"theta": 1.0}, {"theta": 0.5}), {"sigma": 0.5, "n": 100, "alpha": 0.5}),
    3: TableSpec(3, "error for various grids in space (theta = 1, N = 80)", "two_level", "n",
                 (25, 50, 100, 200, 400), ({"sigma": 1.0}, {"sigma": 0.5}),
                 {"theta": 1.0, "steps": 80, "alpha": 0.5}),
    4: TableSpec(4, "error for various alpha (theta = 1, N = 80)", "two_level", "alpha",
                 (0.1, 0.3, 0.5, 0.7, 0.9), ({"sigma": 1.0}, {"sigma": 0.5}),
                 {"theta": 1.0, "steps": 80, "n": 100}),
    5: TableSpec(5, "splitting scheme, theta = 1", "splitting", "steps", STEP_COUNTS,
                 ({"theta": 1.0},), {"n": 100, "alpha": 0.5}),
    6: TableSpec(6, "splitting scheme, theta = 0.5", "splitting", "steps", STEP_COUNTS,
                 ({"theta": 0.5},), {"n": 100, "alpha": 0.5}),
}

# conventions under which the reference tables are reproduced
TABLE_DELTA_RULE = "reduced_index"
TABLE_COUPLING = "sequential"


@dataclass
class TableResult:
    spec: TableSpec
    rows: list

    def cell(self, group: int, column_value, quantity: str = "eps", component: int | None = None):
        """Value of ``quantity`` for row group ``group`` at ``column_value``."""
        params = {**self.spec.base, **self.spec.row_groups[group], self.spec.column: column_value}
        for r in self.rows:
            if _matches(r, params, self.spec.scheme) and (component is None or r.component == component):
                return getattr(r, quantity)
        raise KeyError(params)

    def format(self) -> str:
        """Text layout with one column per varied parameter value."""
        spec = self.spec
        label_w = 28
        head = f"{spec.column:<{label_w}}" + "".join(f"{v:>12}" for v in spec.column_values)
        lines = [f"Table {spec.table_id}: {spec.title}", head, "-" * len(head)]
        comps = sorted({r.component for r in self.rows})
        for gi, group in enumerate(spec.row_groups):
            tag = ", ".join(f"{k} = {v:g}" for k, v in group.items())
            for comp in comps:
                for q in ("eps", "eps_A"):
                    name = q if comp == 0 else f"{q}({comp})"
                    label = f"{name} ({tag})" if len(spec.row_groups) > 1 else name
                    vals = "".join(f"{self.cell(gi, v, q, comp):>12.7f}" for v in spec.column_values)
                    lines.append(f"{label:<{label_w}}{vals}")
        return "\n".join(lines)


def _matches(row: ErrorReport, params: dict, scheme: str) -> bool:
    for k, v in params.items():
        if k == "n":
            if row.n1 != v:
                return False
        elif k == "sigma":
            if scheme == "two_level" and row.sigma1 != v:
                return False
        elif getattr(row, k) != v:
            return False
    return True


def reproduce_table(
    table_id: int,
    delta_rule: str = TABLE_DELTA_RULE,
    coupling: str = TABLE_COUPLING,
    verify: bool = False,
) -> TableResult:
    """Run the full parameter grid of error table ``table_id`` (1..6)."""
    if table_id not in TABLES:
        raise ValueError(f"table id must be one of {sorted(TABLES)}, got {table_id!r}")
    spec = TABLES[table_id]
    rows = []
    for group in spec.row_groups:
        for value in spec.column_values:
            params = {**spec.base, **group, spec.column: value}
            problem = model_problem(params.pop("n"))
            rows += run_case(
                problem, spec.scheme, delta_rule=delta_rule, coupling=coupling,
                verify=verify, **params,
            )
    return TableResult(spec, rows)


# -- sweeps -----------------------------------------------------------------


@dataclass
class ExperimentSpec:
    """A set of runs: every combination of the list-valued fields."""

    preset: str = "model"
    n1: tuple = (100,)
    n2: tuple | None = None
    l1: float = 1.0
    l2: float = 1.0
    scheme: str = "two_level"
    alpha: tuple = (0.5,)
    theta: tuple = (1.0,)
    sigma: tuple = (1.0,)
    sigma1: float = 1.0
    sigma2: float = 1.0
    steps: tuple = (20,)
    tol: float = 1e-12
    delta_rule: str = "certified"
    coupling: str = "parallel"

    def __post_init__(self):
        for name in ("n1", "alpha", "theta", "sigma", "steps"):
            val = getattr(self, name)
            val = tuple(val) if isinstance(val, (list, tuple)) else (val,)
            if not val:
                raise ValueError(f"sweep list {name!r} is empty")
            setattr(self, name, val)
        if self.n2 is not None:
            n2 = tuple(self.n2) if isinstance(self.n2, (list, tuple)) else (self.n2,)
            if len(n2) != len(self.n1):
                raise ValueError("grid.n2 must pair with grid.n1")
            self.n2 = n2
        if self.preset not in PRESETS:
            raise ValueError(f"unknown preset {self.preset!r}; available: {PRESETS}")
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}")
        if self.delta_rule not in DELTA_RULES:
            raise ValueError(f"delta rule must be one of {DELTA_RULES}")
        if self.coupling not in COUPLINGS:
            raise ValueError(f"coupling must be one of {COUPLINGS}")
        if (self.l1, self.l2) != (1.0, 1.0):
            raise ValueError("the model preset is posed on the unit square")
        for a in self.alpha:
            if not 0 < a <= 1:
                raise ValueError(f"alpha must lie in (0, 1], got {a}")
        for t in self.theta:
            if not 0 < t <= 1:
                raise ValueError(f"theta must lie in (0, 1], got {t}")
        for n in self.steps:
            if int(n) != n or n < 1:
                raise ValueError(f"steps must be positive integers, got {n}")

    def grids(self):
        n2 = self.n2 if self.n2 is not None else self.n1
        return list(zip(self.n1, n2))

    def cases(self):
        """Parameter tuples in deterministic order."""
        sigmas = self.sigma if self.scheme == "two_level" else (None,)
        for n1, n2 in self.grids():
            for alpha in self.alpha:
                for theta in self.theta:
                    for sigma in sigmas:
                        for steps in self.steps:
                            yield (n1, n2), alpha, theta, sigma, steps


def run_experiment(spec: ExperimentSpec, verify: bool = False) -> list[ErrorReport]:
    rows = []
    for (n1, n2), alpha, theta, sigma, steps in spec.cases():
        rows += run_case(
            model_problem(n1, n2), spec.scheme, alpha, theta, steps,
            sigma=1.0 if sigma is None else sigma, sigma1=spec.sigma1, sigma2=spec.sigma2,
            delta_rule=spec.delta_rule, coupling=spec.coupling, tol=spec.tol, verify=verify,
        )
    return rows


@dataclass
class ObservedOrder:
    scheme: str
    n1: int
    n2: int
    alpha: float
    theta: float
    sigma1: float
    sigma2: float
    component: int
    steps: tuple
    errors: tuple
    order: float
    monotone: bool


def observed_order(steps, errors) -> float:
    """Least-squares slope of ``log(error)`` against ``log(tau)``."""
    tau = 1.0 / np.asarray(steps, dtype=float)
    slope, _ = np.polyfit(np.log(tau), np.log(np.asarray(errors, dtype=float)), 1)
    return float(slope)


def convergence_sweep(spec: ExperimentSpec, rows: list[ErrorReport] | None = None):
    """Observed order in ``tau`` of ``eps_ref`` for every non-step parameter set.

    Needs at least three step counts in geometric progression. A non-monotone
    error sequence is flagged in the result, not raised.
    """
    steps = sorted(spec.steps)
    if len(steps) < 3:
        raise ValueError("a convergence sweep needs at least 3 step counts")
    ratios = {steps[i + 1] / steps[i] for i in range(len(steps) - 1)}
    if max(ratios) - min(ratios) > 1e-12:
        raise ValueError("step counts must form a geometric progression")
    rows = run_experiment(spec) if rows is None else rows
    groups: dict = {}
    for r in rows:
        key = (r.scheme, r.n1, r.n2, r.alpha, r.theta, r.sigma1, r.sigma2, r.component)
        groups.setdefault(key, {})[r.steps] = r.eps_ref
    out = []
    for key, by_steps in groups.items():
        errs = tuple(by_steps[n] for n in steps)
        monotone = all(b < a for a, b in zip(errs, errs[1:]))
        out.append(ObservedOrder(*key, tuple(steps), errs, observed_order(steps, errs), monotone))
    return out


def rows_to_dicts(rows, verify=False):
    return [r.as_row(verify) for r in rows]


def order_to_dict(order: ObservedOrder) -> dict:
    return asdict(order)


def experiment_fields() -> tuple:
    return tuple(f.name for f in fields(ExperimentSpec))
