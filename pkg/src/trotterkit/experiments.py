"""Deterministic reproductions of the product-formula validation runs.

Every procedure returns a :class:`Table`; :func:`write_csv` serialises it with
17 significant digits and LF line endings so that repeated runs are
byte-identical.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from . import formulas
from .formulas import EvolutionMode
from .hamiltonian import TermList, tau as term_tau
from .linalg import expm, spectral_norm

#: 2x2 test matrix; its upper/lower triangular split gives a non-commuting pair.
REFERENCE_A = np.array([[2.2, 6.9], [4.20, 6.66]])

TIME_ORDERS = (2, 4, 6)
TIME_LO, TIME_HI, TIME_POINTS = 1e-2, 1e-1, 10

COST_M_SETTINGS = {2: 100000, 4: 1700, 6: 120, 8: 20}
COST_POINTS = 20

BOUND_ORDER = 4
EPS_LO, EPS_HI, EPS_POINTS = 1e-6, 1e-3, 10
EMPIRICAL_M_LIMIT = 1000  # search runs over m = 1 .. limit - 1

ISING_N = range(2, 51)
ISING_EPS = 1e-3

# below this every error is rounding noise and a log-log fit is meaningless
NOISE_FLOOR = 1e-13

NOT_REACHED = "not reached"


def split_matrices(a=REFERENCE_A) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(A, B, C)`` with ``B = triu(A, 1) + D/2`` and ``C = tril(A, -1) + D/2``."""
    a = np.asarray(a, dtype=float)
    half_diag = 0.5 * np.diag(np.diag(a))
    return a, np.triu(a, k=1) + half_diag, np.tril(a, k=-1) + half_diag


def reference_terms() -> tuple[TermList, np.ndarray]:
    a, b, c = split_matrices()
    return TermList((b, c)), a.astype(np.complex128)


@dataclass(frozen=True)
class ExperimentGrid:
    values: tuple[float, ...]
    lo: float
    hi: float

    @property
    def count(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)


def log_grid(lo: float, hi: float, count: int) -> ExperimentGrid:
    """``count`` points with evenly spaced logarithms; endpoints are exact."""
    if not 0 < lo < hi:
        raise ValueError(f"need 0 < lo < hi, got {lo}, {hi}")
    if count < 2:
        raise ValueError("a grid needs at least two points")
    values = np.logspace(math.log10(lo), math.log10(hi), count)
    values[0], values[-1] = lo, hi
    return ExperimentGrid(tuple(float(v) for v in values), lo, hi)


def m_values(max_m: int, num_points: int = COST_POINTS) -> list[int]:
    """Log-spaced integers in ``[1, max_m]``, rounded and deduplicated."""
    ms = np.logspace(0, np.log10(max_m), num=num_points)
    return [int(m) for m in np.unique(np.round(ms).astype(int))]


@dataclass(frozen=True)
class RegressionResult:
    slope: float
    intercept: float
    r_squared: float


def loglog_regress(xs: Sequence[float], ys: Sequence[float]) -> RegressionResult:
    """Least-squares line through ``(ln x, ln y)``."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("xs and ys must be 1-D and of equal length")
    if len(x) < 3:
        raise ValueError("need at least three points")
    if np.any(x <= 0) or np.any(y <= 0):
        raise ValueError("log-log regression needs strictly positive data")
    lx, ly = np.log(x), np.log(y)
    dx, dy = lx - lx.mean(), ly - ly.mean()
    sxx = float(dx @ dx)
    if sxx == 0:
        raise ValueError("xs are all equal")
    slope = float(dx @ dy) / sxx
    intercept = float(ly.mean() - slope * lx.mean())
    ss_tot = float(dy @ dy)
    resid = dy - slope * dx
    r2 = 1.0 if ss_tot == 0 else 1.0 - float(resid @ resid) / ss_tot
    return RegressionResult(slope, intercept, min(1.0, max(0.0, r2)))


@dataclass
class Table:
    header: tuple[str, ...]
    rows: list[tuple] = field(default_factory=list)

    def column(self, name: str) -> list:
        i = self.header.index(name)
        return [r[i] for r in self.rows]


@dataclass
class TimeScaling:
    table: Table
    regressions: dict[int, RegressionResult | None]


def _fmt(v) -> str:
    if v is None:
        return NOT_REACHED
    if isinstance(v, (bool, np.bool_)):
        return str(v).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


def write_csv(table: Table, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(table.header)
        for row in table.rows:
            w.writerow([_fmt(v) for v in row])
    return path


def regression_table(regressions: Mapping[int, RegressionResult | None]) -> Table:
    t = Table(("order", "slope", "intercept", "r_squared"))
    for order, r in regressions.items():
        if r is not None:
            t.rows.append((order, r.slope, r.intercept, r.r_squared))
    return t


def _exact(generator: np.ndarray, t: float, mode: EvolutionMode) -> np.ndarray:
    return expm((mode.factor * t) * generator)


def error_vs_time(
    terms: TermList,
    exact_sum,
    orders: Sequence[int] = TIME_ORDERS,
    grid: ExperimentGrid | None = None,
    mode: EvolutionMode = EvolutionMode.REAL,
) -> TimeScaling:
    """Single-step relative error of each order against ``exp(t * exact_sum)``."""
    grid = grid or log_grid(TIME_LO, TIME_HI, TIME_POINTS)
    exact_sum = np.asarray(exact_sum, dtype=np.complex128)
    if mode is EvolutionMode.REAL and spectral_norm(exact_sum) * grid.hi > 50:
        raise ValueError("grid exceeds the stable range ||H|| * t <= 50")
    exact = {t: _exact(exact_sum, t, mode) for t in grid}
    table = Table(("order", "t", "rel_error"))
    regressions: dict[int, RegressionResult | None] = {}
    for order in orders:
        sched = formulas.suzuki(order, len(terms))
        errs = []
        for t in grid:
            ref = exact[t]
            approx = formulas.evaluate(sched, terms, t, mode)
            err = spectral_norm(approx - ref) / spectral_norm(ref)
            errs.append(err)
            table.rows.append((order, t, err))
        if len(errs) < 3 or min(errs) <= 0 or max(errs) < NOISE_FLOOR:
            regressions[order] = None
        else:
            regressions[order] = loglog_regress(grid.values, errs)
    return TimeScaling(table, regressions)


def error_vs_cost(
    terms: TermList,
    orders: Sequence[int] | None = None,
    per_order_max_m: Mapping[int, int] = COST_M_SETTINGS,
    t: float = 1.0,
    mode: EvolutionMode = EvolutionMode.REAL,
    num_points: int = COST_POINTS,
) -> Table:
    """Relative error after ``m`` steps against the exponential count ``m * N``."""
    orders = list(per_order_max_m) if orders is None else list(orders)
    exact = _exact(terms.total(), t, mode)
    exact_norm = spectral_norm(exact)
    table = Table(("order", "m", "cost", "rel_error"))
    for order in orders:
        sched = formulas.suzuki(order, len(terms))
        per_step = formulas.exp_count(order, len(terms))
        for m in m_values(per_order_max_m[order], num_points):
            approx = formulas.repeat_evaluate(sched, terms, t, m, mode)
            table.rows.append((order, m, m * per_step, spectral_norm(approx - exact) / exact_norm))
    return table


def cost_to_reach(table: Table, order: int, level: float) -> int | None:
    """Cheapest cost at which ``order`` reaches relative error ``level``."""
    costs = [c for o, _, c, e in table.rows if o == order and e <= level]
    return min(costs) if costs else None


def crossover_level(table: Table, low: int, high: int, levels: Sequence[float] | None = None):
    """Largest error level below which ``high`` is always strictly cheaper than ``low``.

    Only levels both orders reach are compared.  Returns ``None`` when no such
    level exists.
    """
    if levels is None:
        levels = np.logspace(0, -14, 141)
    best = None
    for level in sorted(levels):
        a, b = cost_to_reach(table, low, level), cost_to_reach(table, high, level)
        if a is None or b is None:
            continue
        if b >= a:
            break
        best = level
    return best


def theory_vs_empirical(
    terms: TermList,
    order: int = BOUND_ORDER,
    eps_grid: ExperimentGrid | None = None,
    mode: EvolutionMode = EvolutionMode.REAL,
    t: float = 1.0,
    m_limit: int = EMPIRICAL_M_LIMIT,
) -> Table:
    """Theoretical step count next to the smallest ``m`` meeting each tolerance.

    The empirical search uses absolute spectral-norm error and scans
    ``m = 1, 2, ...`` below ``m_limit``; unreached rows hold ``None``.
    """
    eps_grid = eps_grid or log_grid(EPS_LO, EPS_HI, EPS_POINTS)
    k = order // 2
    L = len(terms)
    scale = term_tau(terms, t)
    exact = _exact(terms.total(), t, mode)
    sched = formulas.suzuki(order, L)
    errors: list[float] = []

    def error_at(m: int) -> float:
        while len(errors) < m:
            mm = len(errors) + 1
            approx = formulas.repeat_evaluate(sched, terms, t, mm, mode)
            errors.append(spectral_norm(approx - exact))
        return errors[m - 1]

    table = Table(("epsilon", "m_theory", "m_empirical"))
    for eps in eps_grid:
        mt = formulas.m_theory(k, L, scale, eps)
        found = next((m for m in range(1, m_limit) if error_at(m) <= eps), None)
        table.rows.append((eps, mt, found))
    return table


def ising_bound_curve(n_range=ISING_N, eps: float = ISING_EPS) -> Table:
    """k-free exponential-count bound for the Ising chain simulated for time ``t = n``."""
    table = Table(("n", "L", "tau", "bound"))
    for n in n_range:
        if n < 2:
            raise ValueError(f"Ising chain needs n >= 2, got {n}")
        L = 2 * n - 1
        table.rows.append((n, L, float(n), formulas.nexp_bound_k_free(L, float(n), eps)))
    return table
