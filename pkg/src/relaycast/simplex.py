"""Dense two-phase primal simplex with Bland's rule.

Two variants share one standardization path: :func:`solve` runs float64
tableaus through the active pivot kernel, and :func:`solve_exact` runs the
same algorithm over exact rationals as a testing oracle.  Bland's rule is
always on because the routing problems solved here are highly degenerate
(many symmetric optimal vertices).

Problems are given in inequality form with per-variable bounds.  Internally
variables are shifted to zero lower bounds, upper bounds become rows, rows
with negative right-hand sides are flipped, and slack/surplus/artificial
columns are appended (artificials last, barred from re-entering).

Tolerances are fixed (pivot 1e-10, feasibility 1e-9 absolute), so rows
mixing coefficient magnitudes more than ~6 orders apart are outside the
supported range; the float solver re-checks its answer and raises rather
than returning a silently wrong one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from relaycast import kernels
from relaycast.errors import MalformedProblemError, NumericalError

PIVOT_TOL = 1e-10
FEAS_TOL = 1e-9
GAP_TOL = 1e-8

_RELATIONS = ("<=", ">=", "=")


@dataclass
class LpProblem:
    """minimize objective . x subject to rows and per-variable bounds.

    constraints: (coefficients, relation, rhs) with relation one of <=, >=, =.
    bounds: (lower, upper) per variable; upper None means unbounded above.
    Defaults to x >= 0 when bounds is None.
    """

    objective: Sequence[float]
    constraints: list[tuple[Sequence[float], str, float]]
    bounds: list[tuple[float, float | None]] | None = None

    @property
    def num_variables(self) -> int:
        return len(self.objective)

    def effective_bounds(self) -> list[tuple[float, float | None]]:
        if self.bounds is None:
            return [(0.0, None)] * self.num_variables
        return list(self.bounds)

    def validate(self) -> None:
        n = self.num_variables
        for v in self.objective:
            if not math.isfinite(float(v)):
                raise MalformedProblemError("non-finite objective coefficient")
        for i, (coefs, rel, rhs) in enumerate(self.constraints):
            if len(coefs) != n:
                raise MalformedProblemError(
                    f"constraint {i} has {len(coefs)} coefficients, expected {n}"
                )
            if rel not in _RELATIONS:
                raise MalformedProblemError(f"constraint {i} relation {rel!r}")
            if not math.isfinite(float(rhs)):
                raise MalformedProblemError(f"constraint {i} rhs not finite")
            for v in coefs:
                if not math.isfinite(float(v)):
                    raise MalformedProblemError(f"constraint {i} coefficient not finite")
        bounds = self.effective_bounds()
        if len(bounds) != n:
            raise MalformedProblemError(
                f"{len(bounds)} bounds for {n} variables"
            )
        for j, (lo, hi) in enumerate(bounds):
            if lo is None or not math.isfinite(float(lo)):
                raise MalformedProblemError(f"variable {j} needs a finite lower bound")
            if hi is not None and not math.isfinite(float(hi)):
                raise MalformedProblemError(f"variable {j} upper bound not finite")


@dataclass
class LpSolution:
    """Solver output; primal/dual data present only when status is optimal."""

    status: str  # "optimal" | "infeasible" | "unbounded"
    x: list | None = None
    objective: object | None = None
    duals: list | None = None
    dual_objective: object | None = None
    iterations: int = 0


@dataclass
class _Standardized:
    nstruct: int
    ncols: int
    art_start: int
    a_rows: list
    b: list
    basis: list
    flips: list
    num_orig: int
    lowers: list
    obj_const: object
    c_struct: list
    bound_infeasible: bool = False


def _standardize(problem: LpProblem, conv) -> _Standardized:
    """Shift lower bounds to zero, fold upper bounds into rows, append
    slack/surplus/artificial columns.  ``conv`` fixes the number type."""
    zero = conv(0)
    one = conv(1)
    n = problem.num_variables
    bounds = problem.effective_bounds()
    lowers = [conv(lo) for lo, _ in bounds]
    c = [conv(v) for v in problem.objective]
    obj_const = sum((ci * li for ci, li in zip(c, lowers)), zero)

    rows: list[tuple[list, str, object]] = []
    for coefs, rel, rhs in problem.constraints:
        coefs = [conv(v) for v in coefs]
        shift = sum((a * l for a, l in zip(coefs, lowers)), zero)
        rows.append((coefs, rel, conv(rhs) - shift))
    bound_infeasible = False
    for j, (lo, hi) in enumerate(bounds):
        if hi is None:
            continue
        ub = conv(hi) - lowers[j]
        if ub < zero:
            bound_infeasible = True
        coefs = [zero] * n
        coefs[j] = one
        rows.append((coefs, "<=", ub))

    flips = []
    fixed = []
    for coefs, rel, rhs in rows:
        if rhs < zero:
            coefs = [-v for v in coefs]
            rhs = -rhs
            rel = {"<=": ">=", ">=": "<=", "=": "="}[rel]
            flips.append(-1)
        else:
            flips.append(1)
        fixed.append((coefs, rel, rhs))

    n_slack = sum(1 for _, rel, _ in fixed if rel in ("<=", ">="))
    n_art = sum(1 for _, rel, _ in fixed if rel in (">=", "="))
    art_start = n + n_slack
    ncols = art_start + n_art

    a_rows = []
    b = []
    basis = []
    slack_at = n
    art_at = art_start
    for coefs, rel, rhs in fixed:
        row = list(coefs) + [zero] * (ncols - n)
        if rel == "<=":
            row[slack_at] = one
            basis.append(slack_at)
            slack_at += 1
        elif rel == ">=":
            row[slack_at] = -one
            slack_at += 1
            row[art_at] = one
            basis.append(art_at)
            art_at += 1
        else:
            row[art_at] = one
            basis.append(art_at)
            art_at += 1
        a_rows.append(row)
        b.append(rhs)

    return _Standardized(
        nstruct=n,
        ncols=ncols,
        art_start=art_start,
        a_rows=a_rows,
        b=b,
        basis=basis,
        flips=flips,
        num_orig=len(problem.constraints),
        lowers=lowers,
        obj_const=obj_const,
        c_struct=c,
        bound_infeasible=bound_infeasible,
    )


def _max_iterations(m: int, ncols: int) -> int:
    return 100000 + 200 * (m + ncols)


def solve(problem: LpProblem) -> LpSolution:
    """Solve in float64 via the active kernel backend; deterministic output."""
    problem.validate()
    std = _standardize(problem, float)
    if std.bound_infeasible:
        return LpSolution(status="infeasible")

    m = len(std.a_rows)
    ncols = std.ncols
    a0 = np.array(std.a_rows, dtype=np.float64).reshape(m, ncols)
    b0 = np.array(std.b, dtype=np.float64)
    tableau = np.concatenate([a0, b0[:, None]], axis=1).copy() if m else np.zeros((0, ncols + 1))
    basis = np.array(std.basis, dtype=np.int64)
    max_iter = _max_iterations(m, ncols)
    iterations = 0

    n_art = ncols - std.art_start
    if n_art:
        obj1 = np.zeros(ncols + 1)
        obj1[std.art_start:ncols] = 1.0
        for r in range(m):
            if basis[r] >= std.art_start:
                obj1 -= tableau[r]
        status, it = kernels.simplex_phase(
            tableau, obj1, basis, std.art_start, PIVOT_TOL, max_iter
        )
        iterations += it
        if status != 0:
            raise NumericalError(f"phase-1 simplex returned status {status}")
        scale = 1.0 + (float(np.abs(b0).max()) if m else 0.0)
        if -obj1[-1] > FEAS_TOL * scale:
            return LpSolution(status="infeasible", iterations=iterations)
        _drive_out_artificials(tableau, basis, std.art_start, PIVOT_TOL)

    c_ext = np.zeros(ncols + 1)
    c_ext[: std.nstruct] = std.c_struct
    obj2 = c_ext.copy()
    for r in range(m):
        cb = c_ext[basis[r]]
        if cb != 0.0:
            obj2 -= cb * tableau[r]
    status, it = kernels.simplex_phase(
        tableau, obj2, basis, std.art_start, PIVOT_TOL, max_iter
    )
    iterations += it
    if status == 2:
        raise NumericalError("phase-2 simplex hit the iteration limit")
    if status == 1:
        return LpSolution(status="unbounded", iterations=iterations)

    u = np.zeros(ncols)
    if m:
        u[basis] = tableau[:, -1]
    x = [float(std.lowers[j] + u[j]) for j in range(std.nstruct)]
    objective = float(np.dot(np.asarray(problem.objective, dtype=np.float64), x))

    duals, dual_objective = _duals_float(std, a0, b0, basis, c_ext[:ncols])
    _check_float_solution(problem, x, objective, dual_objective)
    return LpSolution(
        status="optimal",
        x=x,
        objective=objective,
        duals=duals,
        dual_objective=dual_objective,
        iterations=iterations,
    )


def _drive_out_artificials(tableau, basis, art_start, tol):
    """Pivot basic artificials onto any usable non-artificial column.

    A row whose non-artificial entries are all below tolerance is redundant;
    its artificial stays basic at zero and never re-enters the objective."""
    m = tableau.shape[0]
    for r in range(m):
        if basis[r] < art_start:
            continue
        in_basis = set(int(v) for v in basis)
        for j in range(art_start):
            if j not in in_basis and abs(tableau[r, j]) > tol:
                _pivot_plain(tableau, basis, r, j)
                break


def _pivot_plain(tableau, basis, row, col):
    piv = tableau[row, col]
    tableau[row, :] /= piv
    factors = tableau[:, col].copy()
    factors[row] = 0.0
    tableau -= np.outer(factors, tableau[row])
    tableau[:, col] = 0.0
    tableau[row, col] = 1.0
    basis[row] = col


def _duals_float(std, a0, b0, basis, costs):
    m = a0.shape[0]
    if m == 0:
        return [], float(std.obj_const)
    bmat = a0[:, basis]
    cb = costs[basis]
    try:
        y = np.linalg.solve(bmat.T, cb)
    except np.linalg.LinAlgError:
        y = np.linalg.lstsq(bmat.T, cb, rcond=None)[0]
    dual_objective = float(y @ b0 + std.obj_const)
    duals = [float(y[i] * std.flips[i]) for i in range(std.num_orig)]
    return duals, dual_objective


def _check_float_solution(problem, x, objective, dual_objective):
    """Re-check the primal against the original rows and the duality gap."""
    for i, (coefs, rel, rhs) in enumerate(problem.constraints):
        lhs = float(np.dot(np.asarray(coefs, dtype=np.float64), x))
        slack = FEAS_TOL * (1.0 + abs(float(rhs)))
        if rel == "<=" and lhs > rhs + slack:
            raise NumericalError(f"constraint {i} violated by {lhs - rhs:.3e}")
        if rel == ">=" and lhs < rhs - slack:
            raise NumericalError(f"constraint {i} violated by {rhs - lhs:.3e}")
        if rel == "=" and abs(lhs - rhs) > slack:
            raise NumericalError(f"constraint {i} violated by {abs(lhs - rhs):.3e}")
    for j, (lo, hi) in enumerate(problem.effective_bounds()):
        if x[j] < float(lo) - FEAS_TOL:
            raise NumericalError(f"variable {j} below lower bound")
        if hi is not None and x[j] > float(hi) + FEAS_TOL:
            raise NumericalError(f"variable {j} above upper bound")
    if abs(objective - dual_objective) > GAP_TOL * (1.0 + abs(objective)):
        raise NumericalError(
            f"duality gap {abs(objective - dual_objective):.3e} too large"
        )


def solve_exact(problem: LpProblem) -> LpSolution:
    """Same two-phase algorithm over exact rationals (testing oracle)."""
    problem.validate()
    std = _standardize(problem, Fraction)
    if std.bound_infeasible:
        return LpSolution(status="infeasible")

    m = len(std.a_rows)
    ncols = std.ncols
    zero = Fraction(0)
    tableau = [list(row) + [rhs] for row, rhs in zip(std.a_rows, std.b)]
    a0 = [list(row) for row in std.a_rows]
    basis = list(std.basis)
    max_iter = _max_iterations(m, ncols)
    iterations = 0

    n_art = ncols - std.art_start
    if n_art:
        obj1 = [zero] * (ncols + 1)
        for j in range(std.art_start, ncols):
            obj1[j] = Fraction(1)
        for r in range(m):
            if basis[r] >= std.art_start:
                obj1 = [a - b for a, b in zip(obj1, tableau[r])]
        status, it = _phase_exact(tableau, obj1, basis, std.art_start, max_iter)
        iterations += it
        if status != 0:
            raise NumericalError(f"exact phase-1 returned status {status}")
        if -obj1[-1] > 0:
            return LpSolution(status="infeasible", iterations=iterations)
        _drive_out_exact(tableau, basis, std.art_start)

    c_ext = list(std.c_struct) + [zero] * (ncols - std.nstruct)
    obj2 = list(c_ext) + [zero]
    for r in range(m):
        cb = c_ext[basis[r]]
        if cb:
            obj2 = [a - cb * b for a, b in zip(obj2, tableau[r])]
    status, it = _phase_exact(tableau, obj2, basis, std.art_start, max_iter)
    iterations += it
    if status == 2:
        raise NumericalError("exact phase-2 hit the iteration limit")
    if status == 1:
        return LpSolution(status="unbounded", iterations=iterations)

    u = [zero] * ncols
    for r in range(m):
        u[basis[r]] = tableau[r][-1]
    x = [std.lowers[j] + u[j] for j in range(std.nstruct)]
    objective = sum(
        (Fraction(v) * xi for v, xi in zip(problem.objective, x)), zero
    )

    duals, dual_objective = _duals_exact(std, a0, basis, c_ext)
    return LpSolution(
        status="optimal",
        x=x,
        objective=objective,
        duals=duals,
        dual_objective=dual_objective,
        iterations=iterations,
    )


def _phase_exact(tableau, obj, basis, entering_limit, max_iter):
    """Bland-rule pivot loop over Fractions; mirrors the float kernel."""
    m = len(tableau)
    rhs = len(obj) - 1
    for it in range(max_iter):
        col = -1
        for j in range(entering_limit):
            if obj[j] < 0:
                col = j
                break
        if col < 0:
            return 0, it
        row = -1
        best_ratio = None
        best_basis = None
        for r in range(m):
            cv = tableau[r][col]
            if cv > 0:
                ratio = tableau[r][rhs] / cv
                if row < 0 or ratio < best_ratio or (
                    ratio == best_ratio and basis[r] < best_basis
                ):
                    row, best_ratio, best_basis = r, ratio, basis[r]
        if row < 0:
            return 1, it
        _pivot_exact(tableau, obj, basis, row, col)
    return 2, max_iter


def _pivot_exact(tableau, obj, basis, row, col):
    piv = tableau[row][col]
    tableau[row] = [v / piv for v in tableau[row]]
    prow = tableau[row]
    m = len(tableau)
    for r in range(m):
        if r == row:
            continue
        f = tableau[r][col]
        if f:
            tableau[r] = [a - f * b for a, b in zip(tableau[r], prow)]
    f = obj[col]
    if f:
        obj[:] = [a - f * b for a, b in zip(obj, prow)]
    basis[row] = col


def _drive_out_exact(tableau, basis, art_start):
    m = len(tableau)
    for r in range(m):
        if basis[r] < art_start:
            continue
        in_basis = set(basis)
        for j in range(art_start):
            if j not in in_basis and tableau[r][j] != 0:
                _pivot_exact(tableau, [Fraction(0)] * len(tableau[r]), basis, r, j)
                break


def _duals_exact(std, a0, basis, c_ext):
    m = len(a0)
    if m == 0:
        return [], std.obj_const
    bt = [[a0[r][basis[i]] for r in range(m)] for i in range(m)]
    cb = [c_ext[basis[i]] for i in range(m)]
    y = _solve_linear_exact(bt, cb)
    dual_objective = sum((yi * bi for yi, bi in zip(y, std.b)), Fraction(0))
    dual_objective += std.obj_const
    duals = [y[i] * std.flips[i] for i in range(std.num_orig)]
    return duals, dual_objective


def _solve_linear_exact(mat, rhs):
    """Gaussian elimination over Fractions; the matrix is a simplex basis
    transpose and therefore nonsingular."""
    n = len(mat)
    a = [list(row) + [r] for row, r in zip(mat, rhs)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise NumericalError("singular basis in exact dual solve")
        a[col], a[pivot] = a[pivot], a[col]
        pv = a[col][col]
        a[col] = [v / pv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[r][n] for r in range(n)]
