"""
Copyright (C) 2026 hermit contributors.

This module provides a self-contained linear program solver for problems in
inequality form:

    minimize    c @ x
    subject to  A @ x <= b
                lower <= x <= upper

The default method is a homogeneous self-dual primal-dual interior-point
method with Mehrotra's predictor-corrector (Andersen & Andersen, "The MOSEK
interior point optimizer for linear programming: an implementation of the
homogeneous algorithm", 2000). A dense revised simplex method with Bland's
rule is available for cross-checking small problems.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
"""

from dataclasses import dataclass, field
from enum import Enum
import logging
from typing import *
import warnings

import numpy as np
import scipy.linalg
import scipy.sparse as sps
from scipy.linalg import LinAlgError, LinAlgWarning

from hermit.utils.errors import ValidationError

module_logger = logging.getLogger("hermit.lp")

METHODS = ("interior-point", "simplex")


class LpStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    ITER_LIMIT = "iter_limit"


@dataclass(frozen=True)
class LpSettings:
    """
    Solver settings.

    Args:
        method:             "interior-point" (default) or "simplex".
        max_iters:          Iteration limit. The simplex method uses
                            max(max_iters, 20 * (rows + columns)).
        feas_tol:           Largest accepted absolute constraint violation.
        opt_tol:            Largest accepted relative duality/KKT residual.
        step_scale:         Fraction of the step to the boundary taken by the
                            interior-point method.
        simplex_fallback:   Re-solve with the simplex method when the
                            interior-point method stops at its iteration
                            limit or on numerical difficulties.
    """

    method: str = "interior-point"
    max_iters: int = 200
    feas_tol: float = 1e-8
    opt_tol: float = 1e-8
    step_scale: float = 0.99995
    simplex_fallback: bool = True

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValidationError(
                f"Unknown LP method '{self.method}', expected one of {', '.join(METHODS)}"
            )
        if self.max_iters < 1:
            raise ValidationError("max_iters must be at least 1")
        if not (self.feas_tol > 0 and self.opt_tol > 0):
            raise ValidationError("feas_tol and opt_tol must be positive")
        if not 0 < self.step_scale <= 1:
            raise ValidationError("step_scale must be in (0, 1]")


@dataclass
class StandardFormLp:
    """
    A linear program  min c @ x  s.t.  A @ x <= b,  lower <= x <= upper.

    Missing lower bounds default to 0 and missing upper bounds to +inf.
    Use -np.inf / np.inf for unbounded sides. A is stored as CSR with no
    explicit zeros.
    """

    c: np.ndarray
    A: sps.csr_matrix
    b: np.ndarray
    lower: Optional[np.ndarray] = None
    upper: Optional[np.ndarray] = None

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=float).ravel()
        self.b = np.asarray(self.b, dtype=float).ravel()

        A = sps.csr_matrix(self.A, dtype=float)
        A.eliminate_zeros()
        A.sort_indices()
        self.A = A

        v = self.c.shape[0]
        m = self.b.shape[0]
        if v == 0:
            raise ValidationError("LP has no variables")
        if A.shape != (m, v):
            raise ValidationError(
                f"Constraint matrix has shape {A.shape}, expected ({m}, {v})"
            )

        self.lower = (
            np.zeros(v) if self.lower is None else np.asarray(self.lower, dtype=float).ravel()
        )
        self.upper = (
            np.full(v, np.inf) if self.upper is None else np.asarray(self.upper, dtype=float).ravel()
        )
        if self.lower.shape != (v,) or self.upper.shape != (v,):
            raise ValidationError("Bounds must have one entry per variable")

        if not (np.all(np.isfinite(self.c)) and np.all(np.isfinite(self.b))):
            raise ValidationError("Objective and right-hand side must be finite")
        if A.nnz and not np.all(np.isfinite(A.data)):
            raise ValidationError("Constraint matrix must be finite")
        if np.any(np.isnan(self.lower)) or np.any(np.isnan(self.upper)):
            raise ValidationError("Bounds must not be NaN")
        if np.any(self.lower == np.inf) or np.any(self.upper == -np.inf):
            raise ValidationError("Lower bounds cannot be +inf, upper bounds cannot be -inf")
        if np.any(self.lower > self.upper):
            raise ValidationError("A lower bound exceeds its upper bound")

    @property
    def num_variables(self) -> int:
        return self.c.shape[0]

    @property
    def num_constraints(self) -> int:
        return self.b.shape[0]

    def violation(self, x: np.ndarray) -> float:
        """
        Largest absolute violation of the constraints and bounds at x.
        """
        worst = 0.0
        if self.num_constraints:
            worst = max(worst, float(np.max(self.A @ x - self.b)))
        worst = max(worst, float(np.max(self.lower - x)), float(np.max(x - self.upper)))
        return max(worst, 0.0)


@dataclass
class LpSolution:
    x: np.ndarray
    objective_value: float
    status: LpStatus
    iterations: int
    max_violation: float
    kkt_residual: float = float("nan")
    message: str = ""

    @property
    def success(self) -> bool:
        return self.status == LpStatus.OPTIMAL


#
# Presolve: map the inequality form onto  min c @ w  s.t.  A @ w == b, w >= 0
#
@dataclass
class _EqualityForm:
    A: sps.csr_matrix
    b: np.ndarray
    c: np.ndarray
    c0: float
    transform: sps.csr_matrix  # x = shift + transform @ (column_scale * w[:num_structural])
    shift: np.ndarray
    num_structural: int
    column_scale: np.ndarray
    free_pairs: np.ndarray  # (k, 2) columns of w holding x_j = w+ - w-
    status: Optional[LpStatus] = None
    unbounded_column: bool = False
    message: str = ""


def _equilibrate(A: sps.csr_matrix, passes: int = 8) -> Tuple[sps.csr_matrix, np.ndarray, np.ndarray]:
    """
    Ruiz scaling: alternately divide rows and columns by the square root of
    their largest magnitude. Returns (R A S, diag(R), diag(S)).
    """
    m, n = A.shape
    row_scale = np.ones(m)
    col_scale = np.ones(n)
    if m == 0 or n == 0 or A.nnz == 0:
        return A, row_scale, col_scale

    A = A.tocsr(copy=True)
    for _ in range(passes):
        r = np.asarray(abs(A).max(axis=1).todense()).ravel()
        r = np.where(r > 0, 1.0 / np.sqrt(r), 1.0)
        A = (sps.diags(r) @ A).tocsr()
        s = np.asarray(abs(A).max(axis=0).todense()).ravel()
        s = np.where(s > 0, 1.0 / np.sqrt(s), 1.0)
        A = (A @ sps.diags(s)).tocsr()
        row_scale *= r
        col_scale *= s
    return A, row_scale, col_scale


def _presolve(problem: StandardFormLp, feas_tol: float) -> _EqualityForm:
    """
    Remove empty rows, empty columns, and fixed variables, shift and split
    variables so every remaining variable is non-negative, equilibrate, and
    add a slack for every inequality row.
    """
    A = problem.A
    c = problem.c
    lower = problem.lower.copy()
    upper = problem.upper.copy()
    v = problem.num_variables

    result_status = None
    unbounded_column = False
    message = ""

    # Empty columns: choose the bound that minimizes the objective term.
    column_counts = np.diff(A.tocsc().indptr)
    for j in np.flatnonzero(column_counts == 0):
        if lower[j] == upper[j]:
            continue
        if c[j] > 0:
            if np.isfinite(lower[j]):
                value = lower[j]
            else:
                unbounded_column, value = True, (upper[j] if np.isfinite(upper[j]) else 0.0)
        elif c[j] < 0:
            if np.isfinite(upper[j]):
                value = upper[j]
            else:
                unbounded_column, value = True, (lower[j] if np.isfinite(lower[j]) else 0.0)
        else:
            value = lower[j] if np.isfinite(lower[j]) else (upper[j] if np.isfinite(upper[j]) else 0.0)
        lower[j] = upper[j] = value

    # Empty rows.
    row_counts = np.diff(A.indptr)
    empty_rows = row_counts == 0
    if np.any(problem.b[empty_rows] < -feas_tol):
        result_status = LpStatus.INFEASIBLE
        message = "An empty constraint row has a negative right-hand side."
    keep_rows = np.flatnonzero(~empty_rows)
    A = A[keep_rows]
    b = problem.b[keep_rows]

    # Variable substitution x = shift + T w.
    shift = np.zeros(v)
    t_rows: List[int] = []
    t_cols: List[int] = []
    t_vals: List[float] = []
    ub_cols: List[int] = []
    ub_vals: List[float] = []
    free_pairs: List[Tuple[int, int]] = []
    col = 0
    for j in range(v):
        lo, hi = lower[j], upper[j]
        if lo == hi:
            shift[j] = lo
        elif np.isfinite(lo):
            shift[j] = lo
            t_rows.append(j), t_cols.append(col), t_vals.append(1.0)
            if np.isfinite(hi):
                ub_cols.append(col)
                ub_vals.append(hi - lo)
            col += 1
        elif np.isfinite(hi):
            shift[j] = hi
            t_rows.append(j), t_cols.append(col), t_vals.append(-1.0)
            col += 1
        else:
            t_rows += [j, j]
            t_cols += [col, col + 1]
            t_vals += [1.0, -1.0]
            free_pairs.append((col, col + 1))
            col += 2
    num_structural = col

    T = sps.csr_matrix((t_vals, (t_rows, t_cols)), shape=(v, num_structural))

    A_w = (A @ T).tocsr()
    b_w = b - A @ shift
    if ub_cols:
        U = sps.csr_matrix(
            (np.ones(len(ub_cols)), (np.arange(len(ub_cols)), ub_cols)),
            shape=(len(ub_cols), num_structural),
        )
        A_w = sps.vstack([A_w, U]).tocsr()
        b_w = np.concatenate([b_w, ub_vals])

    # Both halves of a free pair get the same column scale.
    A_w, row_scale, column_scale = _equilibrate(A_w)
    b_w = row_scale * b_w

    rows = A_w.shape[0]
    A_eq = sps.hstack([A_w, sps.identity(rows, format="csr")]).tocsr()
    c_eq = np.concatenate([column_scale * (T.T @ c), np.zeros(rows)])

    return _EqualityForm(
        A=A_eq,
        b=np.asarray(b_w, dtype=float),
        c=np.asarray(c_eq, dtype=float),
        c0=float(c @ shift),
        transform=T,
        shift=shift,
        num_structural=num_structural,
        column_scale=column_scale,
        free_pairs=np.array(free_pairs, dtype=int).reshape(-1, 2),
        status=result_status,
        unbounded_column=unbounded_column,
        message=message,
    )


def _postsolve(eq: _EqualityForm, w: np.ndarray) -> np.ndarray:
    return eq.shift + eq.transform @ (eq.column_scale * w[: eq.num_structural])


#
# Homogeneous self-dual interior-point method
#
def _get_solver(M: np.ndarray, level: int):
    """
    Return a function solving M @ v = r. Higher levels are more robust and
    slower: 0 Cholesky, 1 Cholesky of M + delta * I, 2 general solve,
    3 least squares.
    """
    if level == 0:
        factor = scipy.linalg.cho_factor(M, check_finite=False)
        return lambda r: scipy.linalg.cho_solve(factor, r, check_finite=False)
    if level == 1:
        delta = 1e-12 * max(float(np.max(np.diag(M), initial=0.0)), 1.0)
        factor = scipy.linalg.cho_factor(M + delta * np.eye(M.shape[0]), check_finite=False)
        return lambda r: scipy.linalg.cho_solve(factor, r, check_finite=False)
    if level == 2:
        return lambda r: scipy.linalg.solve(M, r, check_finite=False)
    return lambda r: scipy.linalg.lstsq(M, r, check_finite=False)[0]


def _sym_solve(Dinv, A, r1, r2, solve):
    r = r2 + A @ (Dinv * r1)
    v = solve(r)
    u = Dinv * (A.T @ v - r1)
    return u, v


def _get_step(x, d_x, z, d_z, tau, d_tau, kappa, d_kappa, alpha0):
    """
    Largest step in [0, 1] keeping x, z, tau, kappa positive, scaled by alpha0.
    """
    i_x = d_x < 0
    i_z = d_z < 0
    alpha_x = alpha0 * np.min(x[i_x] / -d_x[i_x]) if np.any(i_x) else 1.0
    alpha_tau = alpha0 * tau / -d_tau if d_tau < 0 else 1.0
    alpha_z = alpha0 * np.min(z[i_z] / -d_z[i_z]) if np.any(i_z) else 1.0
    alpha_kappa = alpha0 * kappa / -d_kappa if d_kappa < 0 else 1.0
    return min(1.0, alpha_x, alpha_tau, alpha_z, alpha_kappa)


class _HomogeneousIpm:
    """
    One solve of  min c @ x  s.t.  A @ x == b, x >= 0  by the homogeneous
    self-dual embedding. Residuals are measured relative to the blind start
    x = z = 1, y = 0, tau = kappa = 1.
    """

    def __init__(self, A: sps.csr_matrix, b: np.ndarray, c: np.ndarray, settings: LpSettings):
        self.A = A
        self.b = b
        self.c = c
        self.settings = settings
        self.solver_level = 0

        m, n = A.shape
        self.n = n
        self.r_p0 = max(1.0, float(np.linalg.norm(b - A @ np.ones(n))))
        self.r_d0 = max(1.0, float(np.linalg.norm(c - np.ones(n))))
        self.r_g0 = max(1.0, abs(float(c.sum()) + 1.0))

    def indicators(self, x, y, z, tau, kappa):
        A, b, c = self.A, self.b, self.c
        rho_p = np.linalg.norm(b * tau - A @ x) / self.r_p0
        rho_d = np.linalg.norm(c * tau - A.T @ y - z) / self.r_d0
        rho_g = abs(kappa + c @ x - b @ y) / self.r_g0
        rho_A = abs(c @ x - b @ y) / (tau + abs(b @ y))
        rho_mu = (x @ z + tau * kappa) / (self.n + 1)
        return rho_p, rho_d, rho_A, rho_g, rho_mu

    def delta(self, x, y, z, tau, kappa):
        A, b, c = self.A, self.b, self.c

        r_P = b * tau - A @ x
        r_D = c * tau - A.T @ y - z
        r_G = c @ x - b @ y + kappa
        mu = (x @ z + tau * kappa) / (self.n + 1)

        Dinv = x / z
        M = (A @ sps.diags(Dinv) @ A.T).toarray()

        # Predictor (gamma = 0) then Mehrotra corrector.
        gamma = 0.0
        d_x = d_z = np.zeros_like(x)
        d_tau = d_kappa = 0.0
        solve = None
        for correction in range(2):
            eta = 1 - gamma
            rhatp = eta * r_P
            rhatd = eta * r_D
            rhatg = eta * r_G

            rhatxs = gamma * mu - x * z
            rhattk = gamma * mu - tau * kappa
            if correction == 1:
                rhatxs = rhatxs - d_x * d_z
                rhattk = rhattk - d_tau * d_kappa

            while True:
                try:
                    # An ill-conditioned solve moves to the next level too.
                    with warnings.catch_warnings():
                        warnings.simplefilter("error", LinAlgWarning)
                        if solve is None:
                            solve = _get_solver(M, self.solver_level)
                        p, q = _sym_solve(Dinv, A, c, b, solve)
                        u, v = _sym_solve(Dinv, A, rhatd - (1 / x) * rhatxs, rhatp, solve)
                    if np.any(np.isnan(p)) or np.any(np.isnan(u)):
                        raise LinAlgError("NaN in search direction")
                    break
                except (LinAlgError, LinAlgWarning, ValueError) as exc:
                    # Normal equations degrade near the solution; fall back
                    # to a more robust factorization.
                    if self.solver_level >= 3:
                        raise
                    self.solver_level += 1
                    solve = None
                    module_logger.debug(
                        f"Normal equations failed ({exc}), switching to solver level {self.solver_level}"
                    )

            d_tau = (rhatg + rhattk / tau - (-c @ u + b @ v)) / (kappa / tau + (-c @ p + b @ q))
            d_x = u + p * d_tau
            d_y = v + q * d_tau
            d_z = (rhatxs - z * d_x) / x
            d_kappa = (rhattk - kappa * d_tau) / tau

            alpha = _get_step(x, d_x, z, d_z, tau, d_tau, kappa, d_kappa, 1.0)
            gamma = (1 - alpha) ** 2 * min(0.1, 1 - alpha)

        return d_x, d_y, d_z, d_tau, d_kappa


def _solve_interior_point(problem: StandardFormLp, eq: _EqualityForm, settings: LpSettings):
    """
    Returns (w, status, iterations, kkt_residual, message) for the equality form.
    """
    A, b, c = eq.A, eq.b, eq.c
    m, n = A.shape
    tol = min(settings.feas_tol, settings.opt_tol)

    ipm = _HomogeneousIpm(A, b, c, settings)

    x = np.ones(n)
    y = np.zeros(m)
    z = np.ones(n)
    tau = 1.0
    kappa = 1.0

    def converged(rho_p, rho_d, rho_A) -> bool:
        if rho_p > tol or rho_d > tol or rho_A > tol:
            return False
        # The relative residuals are met; also require absolute feasibility
        # of the original problem.
        return problem.violation(_postsolve(eq, x / tau)) <= settings.feas_tol

    rho_p, rho_d, rho_A, rho_g, rho_mu = ipm.indicators(x, y, z, tau, kappa)
    if converged(rho_p, rho_d, rho_A):
        return x / tau, LpStatus.OPTIMAL, 0, max(rho_p, rho_d, rho_A), ""

    iteration = 0
    while iteration < settings.max_iters:
        iteration += 1
        try:
            with np.errstate(divide="raise", invalid="raise", over="raise"):
                d_x, d_y, d_z, d_tau, d_kappa = ipm.delta(x, y, z, tau, kappa)
                alpha = _get_step(x, d_x, z, d_z, tau, d_tau, kappa, d_kappa, settings.step_scale)
        except (LinAlgError, LinAlgWarning, FloatingPointError, ValueError, ZeroDivisionError) as exc:
            message = f"Numerical difficulties encountered: {exc}"
            return x / tau, LpStatus.ITER_LIMIT, iteration, max(rho_p, rho_d, rho_A), message

        x = x + alpha * d_x
        y = y + alpha * d_y
        z = z + alpha * d_z
        tau = tau + alpha * d_tau
        kappa = kappa + alpha * d_kappa

        if eq.free_pairs.size:
            # Both halves of a split free variable drift upwards together,
            # which leaves x / tau inaccurate. Shifting both by the same
            # amount changes neither A @ x nor c @ x.
            plus, minus = eq.free_pairs[:, 0], eq.free_pairs[:, 1]
            floor = np.maximum(np.abs(x[plus] - x[minus]), tau)
            excess = np.maximum(np.minimum(x[plus], x[minus]) - floor, 0.0)
            x[plus] -= excess
            x[minus] -= excess

        rho_p, rho_d, rho_A, rho_g, rho_mu = ipm.indicators(x, y, z, tau, kappa)
        kkt = max(rho_p, rho_d, rho_A)

        if converged(rho_p, rho_d, rho_A):
            return x / tau, LpStatus.OPTIMAL, iteration, kkt, ""

        infeasible_certificate = (
            rho_p < tol and rho_d < tol and rho_g < tol and tau < tol * max(1.0, kappa)
        ) or (rho_mu < tol and tau < tol * min(1.0, kappa))
        if infeasible_certificate:
            if b @ y > tol:
                return x / tau, LpStatus.INFEASIBLE, iteration, kkt, "The problem is infeasible."
            return x / tau, LpStatus.UNBOUNDED, iteration, kkt, "The problem is unbounded."

    return (
        x / tau,
        LpStatus.ITER_LIMIT,
        iteration,
        max(rho_p, rho_d, rho_A),
        f"Iteration limit ({settings.max_iters}) reached.",
    )


#
# Revised simplex method (dense, Bland's rule)
#
def _simplex_phase(A, b, c, basis, allowed, max_iters, tol):
    """
    Run simplex pivots from a feasible basis. Returns (status, basis, iterations).
    """
    iterations = 0
    while iterations < max_iters:
        B = A[:, basis]
        x_B = np.linalg.solve(B, b)
        y = np.linalg.solve(B.T, c[basis])
        reduced = c - A.T @ y
        reduced[basis] = 0.0
        reduced[~allowed] = 0.0

        entering = np.flatnonzero(reduced < -tol)
        if entering.size == 0:
            return LpStatus.OPTIMAL, basis, iterations
        q = int(entering[0])

        d = np.linalg.solve(B, A[:, q])
        positive = np.flatnonzero(d > tol)
        if positive.size == 0:
            return LpStatus.UNBOUNDED, basis, iterations

        ratios = np.maximum(x_B[positive], 0.0) / d[positive]
        best = ratios.min()
        ties = positive[ratios <= best + tol]
        leave = min(ties, key=lambda r: basis[r])

        basis[leave] = q
        iterations += 1

    return LpStatus.ITER_LIMIT, basis, iterations


def _solve_simplex(problem: StandardFormLp, eq: _EqualityForm, settings: LpSettings):
    A = eq.A.toarray()
    b = eq.b.copy()
    c = eq.c
    m, n = A.shape
    tol = min(settings.feas_tol, settings.opt_tol)
    max_iters = max(settings.max_iters, 20 * (m + n))

    negative = b < 0
    A[negative] *= -1
    b[negative] *= -1

    # Phase 1: artificial basis.
    A1 = np.hstack([A, np.eye(m)])
    c1 = np.concatenate([np.zeros(n), np.ones(m)])
    allowed = np.ones(n + m, dtype=bool)
    basis = list(range(n, n + m))

    status, basis, it1 = _simplex_phase(A1, b, c1, basis, allowed, max_iters, tol)
    if status != LpStatus.OPTIMAL:
        return np.zeros(n), LpStatus.ITER_LIMIT, it1, float("nan"), "Phase 1 did not terminate."

    x_B = np.linalg.solve(A1[:, basis], b)
    if c1[basis] @ x_B > settings.feas_tol * (1.0 + np.abs(b).max(initial=0.0)):
        return np.zeros(n), LpStatus.INFEASIBLE, it1, float("nan"), "The problem is infeasible."

    # Pivot zero-level artificials out of the basis where possible. The ones
    # that remain belong to redundant rows and stay at zero.
    for r in range(m):
        if basis[r] < n:
            continue
        B = A1[:, basis]
        row = np.linalg.solve(B.T, np.eye(m)[r]) @ A1[:, :n]
        candidates = [k for k in np.flatnonzero(np.abs(row) > tol) if k not in basis]
        if candidates:
            basis[r] = int(candidates[0])

    # Phase 2 over the original columns.
    c2 = np.concatenate([c, np.zeros(m)])
    allowed = np.concatenate([np.ones(n, dtype=bool), np.zeros(m, dtype=bool)])
    status, basis, it2 = _simplex_phase(A1, b, c2, basis, allowed, max_iters - it1, tol)

    w = np.zeros(n + m)
    w[basis] = np.linalg.solve(A1[:, basis], b)
    w = np.maximum(w[:n], 0.0)

    messages = {
        LpStatus.OPTIMAL: "",
        LpStatus.UNBOUNDED: "The problem is unbounded.",
        LpStatus.ITER_LIMIT: "Iteration limit reached.",
    }
    return w, status, it1 + it2, 0.0 if status == LpStatus.OPTIMAL else float("nan"), messages[status]


def solve_lp(problem: StandardFormLp, settings: LpSettings = LpSettings()) -> LpSolution:
    """
    Solve a linear program.

    Infeasible, unbounded and iteration-limited outcomes are reported through
    LpSolution.status rather than raised. The result is a deterministic
    function of the problem and settings.
    """
    eq = _presolve(problem, settings.feas_tol)

    if eq.status is not None:
        x = _postsolve(eq, np.zeros(eq.A.shape[1]))
        return LpSolution(
            x=x,
            objective_value=float(problem.c @ x),
            status=eq.status,
            iterations=0,
            max_violation=problem.violation(x),
            message=eq.message,
        )

    if eq.A.shape[0] == 0:
        # Only non-negativity remains.
        if np.any(eq.c < -settings.opt_tol):
            status, message = LpStatus.UNBOUNDED, "The problem is unbounded."
        else:
            status, message = LpStatus.OPTIMAL, ""
        w = np.zeros(eq.A.shape[1])
        iterations, kkt = 0, 0.0
    elif settings.method == "simplex":
        w, status, iterations, kkt, message = _solve_simplex(problem, eq, settings)
    else:
        w, status, iterations, kkt, message = _solve_interior_point(problem, eq, settings)
        if status == LpStatus.ITER_LIMIT and settings.simplex_fallback:
            module_logger.debug(f"Interior point stopped early ({message}), falling back to simplex")
            w_s, status_s, iterations_s, kkt_s, message_s = _solve_simplex(problem, eq, settings)
            iterations += iterations_s
            if status_s == LpStatus.OPTIMAL:
                w, status, kkt = w_s, status_s, kkt_s
                message = f"Solved by simplex after the interior-point method stopped: {message}"
            elif status_s != LpStatus.ITER_LIMIT:
                w, status, kkt, message = w_s, status_s, kkt_s, message_s

    x = _postsolve(eq, w)

    if status == LpStatus.OPTIMAL and eq.unbounded_column:
        status, message = LpStatus.UNBOUNDED, "An unconstrained variable makes the objective unbounded."

    solution = LpSolution(
        x=x,
        objective_value=float(problem.c @ x),
        status=status,
        iterations=iterations,
        max_violation=problem.violation(x),
        kkt_residual=kkt,
        message=message,
    )
    module_logger.debug(
        f"LP {problem.num_constraints}x{problem.num_variables} ({settings.method}): "
        f"{solution.status.value} after {solution.iterations} iterations, "
        f"objective {solution.objective_value:.10g}, violation {solution.max_violation:.2e}"
    )
    return solution


def _format_terms(coefficients: Iterable[Tuple[int, float]]) -> str:
    terms = [f"{value!r} x{index}" for index, value in coefficients]
    if not terms:
        return "0"
    return " + ".join(terms).replace("+ -", "- ")


def dump_lp(problem: StandardFormLp, stream: TextIO) -> None:
    """
    Write a problem in the plain-text grammar of docs/formats.md, one
    constraint per line.
    """
    stream.write("# hermit linear program\n")
    stream.write(f"variables {problem.num_variables}\n")
    stream.write(f"constraints {problem.num_constraints}\n")

    nonzero = np.flatnonzero(problem.c)
    stream.write(f"minimize: {_format_terms((j, float(problem.c[j])) for j in nonzero)}\n")

    A = problem.A
    for i in range(problem.num_constraints):
        start, end = A.indptr[i], A.indptr[i + 1]
        terms = _format_terms(zip(A.indices[start:end], (float(a) for a in A.data[start:end])))
        stream.write(f"r{i}: {terms} <= {float(problem.b[i])!r}\n")

    for j in range(problem.num_variables):
        stream.write(
            f"bound x{j}: {float(problem.lower[j])!r} <= x{j} <= {float(problem.upper[j])!r}\n"
        )
