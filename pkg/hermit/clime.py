"""
Copyright (C) 2026 hermit contributors.

This module estimates a sparse complex precision matrix P = P^R + jP^I from
an empirical covariance C = C^R + jC^I with a complex generalization of
CLIME. Each column p_i solves

    min  1'pbar^R + 1'pbar^I
    s.t. pbar^R >= +-p^R,  pbar^I >= +-p^I
         sbar^R >= +-(C^R p^R - C^I p^I - e_i)
         sbar^I >= +-(C^R p^I + C^I p^R)
         sbar^R + sbar^I <= rho

independently, and the assembled estimate is symmetrized so that P^R is
symmetric and P^I anti-symmetric.

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

from dataclasses import dataclass, field, replace
import json
import logging
import os
from typing import *

import numpy as np
import scipy.sparse as sps

from hermit.complex_core import TOLERANCE, CovarianceMatrix
from hermit.lp import LpSettings, LpSolution, LpStatus, StandardFormLp, dump_lp, solve_lp
from hermit.utils.errors import DataFormatError, ValidationError
from hermit.utils.parallel import parallel_map

module_logger = logging.getLogger("hermit.clime")

# Slack allowed on the Manhattan l-inf constraint when checking a column.
FEASIBILITY_SLACK = 1e-7

# Variable blocks of the column LP, in order.
BLOCKS = ("p_real", "p_imag", "pbar_real", "pbar_imag", "sbar_real", "sbar_imag")


@dataclass(frozen=True)
class ClimeConfig:
    """
    Args:
        rho:                l-inf slack of the column constraints.
        sparsity_epsilon:   Entries with both |p^R| and |p^I| below
                            sparsity_epsilon * max_n(|p^R_n| + |p^I_n|) are
                            snapped to zero. 0 disables snapping.
        column_parallelism: Number of columns solved at the same time.
        lp:                 LP solver settings.
        retry_failed:       Retry a column that did not reach an optimal
                            solution once with 2 * rho.
        nonnegative_aux:    Give the pbar and sbar variables a lower bound of 0.
    """

    rho: float = 0.2
    sparsity_epsilon: float = 1e-6
    column_parallelism: int = 1
    lp: LpSettings = field(default_factory=LpSettings)
    retry_failed: bool = True
    nonnegative_aux: bool = True

    def __post_init__(self):
        if not (np.isfinite(self.rho) and self.rho > 0):
            raise ValidationError(f"rho must be positive, got {self.rho}")
        if not (np.isfinite(self.sparsity_epsilon) and self.sparsity_epsilon >= 0):
            raise ValidationError(
                f"sparsity_epsilon must be non-negative, got {self.sparsity_epsilon}"
            )
        if self.column_parallelism < 1:
            raise ValidationError("column_parallelism must be at least 1")


@dataclass(frozen=True)
class ColumnLpProblem:
    """
    The LP for column `index`. Variables are laid out as the six length-n
    blocks of BLOCKS; rows are the nine length-n groups
    pbar^R >= p^R, pbar^R >= -p^R, pbar^I >= p^I, pbar^I >= -p^I,
    the two sbar^R pairs, the two sbar^I pairs and the rho cap.
    """

    index: int
    n: int
    rho: float
    lp: StandardFormLp
    covariance: CovarianceMatrix

    def block(self, x: np.ndarray, name: str) -> np.ndarray:
        k = BLOCKS.index(name)
        return x[k * self.n : (k + 1) * self.n]


class ColumnSolution(NamedTuple):
    p_real: np.ndarray
    p_imag: np.ndarray
    solution: LpSolution
    rho: float
    raw_violation: float
    snapped_violation: float
    # "" for an optimal column, otherwise FALLBACK_LEAST_VIOLATING or FALLBACK_DIAGONAL.
    fallback: str = ""


FALLBACK_LEAST_VIOLATING = "least_violating"
FALLBACK_DIAGONAL = "diagonal"


def build_column_lp(C: CovarianceMatrix, i: int, cfg: ClimeConfig, rho: Optional[float] = None) -> ColumnLpProblem:
    """
    Assemble the LP for column i with 6N variables and 9N inequality rows.
    """
    n = C.n
    if not 0 <= i < n:
        raise ValidationError(f"Column index {i} out of range for a {n} x {n} covariance")
    rho = cfg.rho if rho is None else rho

    I = sps.identity(n, format="csr")
    CR = sps.csr_matrix(C.real)
    CI = sps.csr_matrix(C.imag)

    # fmt: off
    A = sps.bmat([
        [ I,   None, -I,   None, None, None],
        [-I,   None, -I,   None, None, None],
        [None,  I,   None, -I,   None, None],
        [None, -I,   None, -I,   None, None],
        [ CR,  -CI,  None, None, -I,   None],
        [-CR,   CI,  None, None, -I,   None],
        [ CI,   CR,  None, None, None, -I  ],
        [-CI,  -CR,  None, None, None, -I  ],
        [None, None, None, None,  I,    I  ],
    ], format="csr")
    # fmt: on

    e_i = np.zeros(n)
    e_i[i] = 1.0
    zeros = np.zeros(n)
    b = np.concatenate([zeros, zeros, zeros, zeros, e_i, -e_i, zeros, zeros, np.full(n, rho)])

    c = np.concatenate([zeros, zeros, np.ones(n), np.ones(n), zeros, zeros])

    aux_lower = 0.0 if cfg.nonnegative_aux else -np.inf
    lower = np.concatenate([np.full(2 * n, -np.inf), np.full(4 * n, aux_lower)])
    upper = np.full(6 * n, np.inf)

    lp = StandardFormLp(c=c, A=A, b=b, lower=lower, upper=upper)
    return ColumnLpProblem(index=i, n=n, rho=rho, lp=lp, covariance=C)


def manhattan_violation(C: CovarianceMatrix, i: int, p_real: np.ndarray, p_imag: np.ndarray) -> float:
    """
    ||C p_i - e_i||_inf under the complex Manhattan norm max_n |Re v_n| + |Im v_n|.
    """
    r = C.matrix @ (p_real + 1j * p_imag)
    r[i] -= 1.0
    return float(np.max(np.abs(r.real) + np.abs(r.imag)))


def snap(p_real: np.ndarray, p_imag: np.ndarray, epsilon: float) -> Tuple[np.ndarray, np.ndarray]:
    if epsilon == 0:
        return p_real, p_imag
    threshold = epsilon * float(np.max(np.abs(p_real) + np.abs(p_imag)))
    small = (np.abs(p_real) < threshold) & (np.abs(p_imag) < threshold)
    return np.where(small, 0.0, p_real), np.where(small, 0.0, p_imag)


def _solve_at(C: CovarianceMatrix, i: int, cfg: ClimeConfig, rho: float, dump_dir: Optional[str]) -> ColumnSolution:
    problem = build_column_lp(C, i, cfg, rho)

    if dump_dir:
        with open(os.path.join(dump_dir, f"column_{i}.lp"), "w") as stream:
            dump_lp(problem.lp, stream)

    solution = solve_lp(problem.lp, cfg.lp)

    p_real = problem.block(solution.x, "p_real").copy()
    p_imag = problem.block(solution.x, "p_imag").copy()
    if C.is_real:
        # Every optimum has p^I = 0 here: dropping it lowers the objective
        # and only loosens the constraints.
        p_imag[:] = 0.0
    raw_violation = manhattan_violation(C, i, p_real, p_imag)

    snapped_real, snapped_imag = snap(p_real, p_imag, cfg.sparsity_epsilon)
    snapped_violation = manhattan_violation(C, i, snapped_real, snapped_imag)

    if snapped_violation <= rho + FEASIBILITY_SLACK:
        p_real, p_imag = snapped_real, snapped_imag
    elif solution.status == LpStatus.OPTIMAL:
        module_logger.debug(
            f"Column {i}: snapping broke feasibility ({snapped_violation:.3e} > {rho}), keeping raw column"
        )

    return ColumnSolution(p_real, p_imag, solution, rho, raw_violation, snapped_violation)


def solve_column(C: CovarianceMatrix, i: int, cfg: ClimeConfig, dump_dir: Optional[str] = None) -> ColumnSolution:
    """
    Solve the LP for column i and return the (snapped) column.

    A column without an optimal solution is retried once with rho doubled
    when cfg.retry_failed is set. The raw (pre-snap) violation is reported;
    the snapped column is only kept if it is still feasible.

    A column that still fails is never assembled as solved. The attempt
    with the smallest violation is kept if it satisfies its own rho cap;
    otherwise the column is replaced by e_i / C[i][i], the estimate for an
    isolated node. The choice is recorded in ColumnSolution.fallback and
    the LP status stays non-optimal, so the column still counts as degraded.
    """
    attempts = [_solve_at(C, i, cfg, cfg.rho, dump_dir)]

    if not attempts[0].solution.success and cfg.retry_failed:
        module_logger.warning(
            f"Column {i}: {attempts[0].solution.status.value} at rho={cfg.rho} "
            f"(violation {attempts[0].raw_violation:.3e}), retrying with rho={2 * cfg.rho}"
        )
        attempts.append(_solve_at(C, i, cfg, 2 * cfg.rho, dump_dir))

    if attempts[-1].solution.success:
        return attempts[-1]
    return _fallback_column(C, i, attempts)


def _fallback_column(C: CovarianceMatrix, i: int, attempts: List[ColumnSolution]) -> ColumnSolution:
    best = min(attempts, key=lambda attempt: attempt.raw_violation - attempt.rho)
    if best.raw_violation <= best.rho + FEASIBILITY_SLACK:
        module_logger.warning(
            f"Column {i}: no optimal solution, keeping the feasible attempt at rho={best.rho}"
        )
        return best._replace(fallback=FALLBACK_LEAST_VIOLATING)

    p_real = np.zeros(C.n)
    p_imag = np.zeros(C.n)
    c_ii = float(C.matrix[i, i].real)
    if c_ii > TOLERANCE.absolute:
        p_real[i] = 1.0 / c_ii
    module_logger.warning(
        f"Column {i}: no feasible solution (violation {best.raw_violation:.3e} > rho={best.rho}), "
        f"using the diagonal column"
    )
    return best._replace(
        p_real=p_real,
        p_imag=p_imag,
        snapped_violation=manhattan_violation(C, i, p_real, p_imag),
        fallback=FALLBACK_DIAGONAL,
    )


@dataclass(frozen=True)
class PrecisionEstimate:
    """
    Column-wise CLIME estimate P = P^R + jP^I.

    `raw_real` / `raw_imag` keep the assembled columns before symmetrization;
    `p_real` / `p_imag` hold the current values.
    """

    p_real: np.ndarray
    p_imag: np.ndarray
    rho_used: float
    statuses: Tuple[LpStatus, ...]
    column_rho: Tuple[float, ...] = ()
    column_fallbacks: Tuple[str, ...] = ()
    symmetrized: bool = False
    raw_real: Optional[np.ndarray] = None
    raw_imag: Optional[np.ndarray] = None

    @property
    def n(self) -> int:
        return self.p_real.shape[0]

    @property
    def degraded(self) -> bool:
        return any(status != LpStatus.OPTIMAL for status in self.statuses)

    @property
    def degraded_columns(self) -> List[int]:
        return [i for i, status in enumerate(self.statuses) if status != LpStatus.OPTIMAL]

    @property
    def fallbacks(self) -> Dict[int, str]:
        return {i: choice for i, choice in enumerate(self.column_fallbacks) if choice}

    @property
    def matrix(self) -> np.ndarray:
        return self.p_real + 1j * self.p_imag

    def nonzero_count(self) -> int:
        return int(np.count_nonzero((self.p_real != 0) | (self.p_imag != 0)))

    def to_json(self) -> dict:
        def coo(M):
            rows, cols = np.nonzero(M)
            return [[int(r), int(c), float(M[r, c])] for r, c in zip(rows, cols)]

        return {
            "n": self.n,
            "rho": self.rho_used,
            "format": "coo",
            "real": coo(self.p_real),
            "imag": coo(self.p_imag),
            "statuses": [status.value for status in self.statuses],
            "fallbacks": {str(i): choice for i, choice in self.fallbacks.items()},
            "symmetrized": self.symmetrized,
        }

    @classmethod
    def from_json(cls, document: dict, path: str = "") -> "PrecisionEstimate":
        try:
            n = int(document["n"])
            p_real = np.zeros((n, n))
            p_imag = np.zeros((n, n))
            for target, key in ((p_real, "real"), (p_imag, "imag")):
                for r, c, v in document[key]:
                    target[int(r), int(c)] = float(v)
            statuses = tuple(LpStatus(s) for s in document["statuses"])
            fallbacks = {int(k): str(v) for k, v in document.get("fallbacks", {}).items()}
            rho = float(document["rho"])
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise DataFormatError(f"Invalid precision estimate document: {exc}", path)

        if document.get("format") != "coo":
            raise DataFormatError("Precision estimate format must be 'coo'", path)

        return cls(
            p_real=p_real,
            p_imag=p_imag,
            rho_used=rho,
            statuses=statuses,
            column_fallbacks=tuple(fallbacks.get(i, "") for i in range(n)),
            symmetrized=bool(document.get("symmetrized", False)),
        )

    def save(self, path: str) -> None:
        with open(path, "w") as stream:
            json.dump(self.to_json(), stream, indent=4)

    @classmethod
    def load(cls, path: str) -> "PrecisionEstimate":
        with open(path, "r") as stream:
            try:
                document = json.load(stream)
            except json.JSONDecodeError as exc:
                raise DataFormatError(str(exc), path, exc.lineno)
        return cls.from_json(document, path)


def estimate_precision(
    C: CovarianceMatrix, cfg: ClimeConfig = ClimeConfig(), dump_dir: Optional[str] = None
) -> PrecisionEstimate:
    """
    Solve every column LP and assemble the raw (unsymmetrized) estimate.

    Columns are solved cfg.column_parallelism at a time; the result does not
    depend on that width. Non-optimal columns mark the estimate degraded.
    """
    n = C.n

    if dump_dir:
        os.makedirs(dump_dir, exist_ok=True)

    columns = parallel_map(
        lambda i: solve_column(C, i, cfg, dump_dir), range(n), cfg.column_parallelism
    )

    p_real = np.zeros((n, n))
    p_imag = np.zeros((n, n))
    for i, column in enumerate(columns):
        p_real[:, i] = column.p_real
        p_imag[:, i] = column.p_imag
        module_logger.info(
            f"column {i}: {column.solution.status.value}, {column.solution.iterations} iterations, "
            f"violation {column.raw_violation:.3e} (rho {column.rho})"
        )

    estimate = PrecisionEstimate(
        p_real=p_real,
        p_imag=p_imag,
        rho_used=cfg.rho,
        statuses=tuple(column.solution.status for column in columns),
        column_rho=tuple(column.rho for column in columns),
        column_fallbacks=tuple(column.fallback for column in columns),
        raw_real=p_real.copy(),
        raw_imag=p_imag.copy(),
    )
    if estimate.degraded:
        module_logger.warning(
            f"{len(estimate.degraded_columns)} of {n} columns did not reach an optimal solution: "
            f"{estimate.degraded_columns}"
        )
    if estimate.fallbacks:
        module_logger.warning(f"Column fallbacks: {estimate.fallbacks}")
    return estimate


def symmetrize(est: PrecisionEstimate) -> PrecisionEstimate:
    """
    P^R <- (P^R + P^R') / 2 and P^I <- (P^I - P^I') / 2.

    The imaginary diagonal is set to exactly zero. Applying this twice gives
    the same result bit for bit.
    """
    p_real = (est.p_real + est.p_real.T) / 2
    p_imag = (est.p_imag - est.p_imag.T) / 2
    np.fill_diagonal(p_imag, 0.0)

    raw_real = est.raw_real if est.raw_real is not None else est.p_real
    raw_imag = est.raw_imag if est.raw_imag is not None else est.p_imag

    return replace(
        est,
        p_real=p_real,
        p_imag=p_imag,
        symmetrized=True,
        raw_real=raw_real,
        raw_imag=raw_imag,
    )
