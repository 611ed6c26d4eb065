"""
Copyright (C) 2026 hermit contributors.

This module recovers a full complex state vector x from M observed entries
y = Bx by minimizing

    ||y - Bx||^2 + mu * x^H L x

whose minimizer solves (B'B + mu L) x = B'y. The system is Hermitian
positive definite when L is, and is solved by conjugate gradient with the
inner product <u, v> = v^H u.

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

from dataclasses import dataclass
import logging
from typing import *

import numpy as np

from hermit.complex_core import as_complex_matrix, as_complex_vector, hermitian_quadratic_form
from hermit.laplacian import HermitianLaplacian
from hermit.utils.errors import NotPositiveDefiniteError, ValidationError
from hermit.utils.parallel import parallel_map

module_logger = logging.getLogger("hermit.interpolate")


@dataclass(frozen=True)
class SamplingPattern:
    """
    The 0/1 selection operator B picking the `observed` entries (strictly
    increasing) out of an n-vector.
    """

    n: int
    observed: Tuple[int, ...]

    def __post_init__(self):
        observed = tuple(int(i) for i in self.observed)
        object.__setattr__(self, "observed", observed)

        if self.n < 1:
            raise ValidationError(f"Sampling pattern needs at least one node, got n={self.n}")
        if not 0 < len(observed) <= self.n:
            raise ValidationError(f"Number of observed nodes must be in [1, {self.n}], got {len(observed)}")
        if any(b <= a for a, b in zip(observed, observed[1:])):
            raise ValidationError("Observed indices must be strictly increasing")
        if observed[0] < 0 or observed[-1] >= self.n:
            raise ValidationError(f"Observed indices must lie in [0, {self.n})")

    @classmethod
    def from_indices(cls, n: int, indices: Iterable[int]) -> "SamplingPattern":
        """
        Build from indices in any order. Duplicates are an error.
        """
        indices = [int(i) for i in indices]
        if len(set(indices)) != len(indices):
            raise ValidationError("Observed indices contain duplicates")
        return cls(n, tuple(sorted(indices)))

    @classmethod
    def random(cls, n: int, m: int, rng: np.random.Generator) -> "SamplingPattern":
        if not 0 < m <= n:
            raise ValidationError(f"Cannot observe {m} of {n} nodes")
        return cls(n, tuple(sorted(int(i) for i in rng.choice(n, size=m, replace=False))))

    @property
    def m(self) -> int:
        return len(self.observed)

    @property
    def mask(self) -> np.ndarray:
        """
        Diagonal of B'B.
        """
        mask = np.zeros(self.n)
        mask[list(self.observed)] = 1.0
        return mask

    @property
    def unobserved(self) -> np.ndarray:
        return np.flatnonzero(self.mask == 0)

    def to_dense(self) -> np.ndarray:
        B = np.zeros((self.m, self.n))
        B[np.arange(self.m), list(self.observed)] = 1.0
        return B

    def adjoint(self, y) -> np.ndarray:
        """
        B'y: scatter the observed values into a zero n-vector.
        """
        y = as_complex_vector(y, "y")
        if y.shape[0] != self.m:
            raise ValidationError(f"Expected {self.m} observed values, got {y.shape[0]}")
        x = np.zeros(self.n, dtype=np.complex128)
        x[list(self.observed)] = y
        return x


def apply_sampling(B: SamplingPattern, x) -> np.ndarray:
    """
    Bx: the observed entries of x, in pattern order.
    """
    x = as_complex_vector(x)
    if x.shape[0] != B.n:
        raise ValidationError(f"Sampling pattern expects length {B.n}, got {x.shape[0]}")
    return x[list(B.observed)]


@dataclass(frozen=True)
class InterpolateConfig:
    """
    Args:
        mu:             Weight of the graph Laplacian regularizer.
        cg_tol:         Target relative residual ||Ax - B'y|| / ||B'y||.
        cg_max_iters:   Iteration limit, 10 * N when None.
        pd_floor:       Floor handed to ensure_pd() before interpolating a
                        learned graph, 1e-8 * lambda_max when None.
        jacobi:         Use the diagonal of B'B + mu L as a preconditioner.
    """

    mu: float = 0.1
    cg_tol: float = 1e-8
    cg_max_iters: Optional[int] = None
    pd_floor: Optional[float] = None
    jacobi: bool = False

    def __post_init__(self):
        if not (np.isfinite(self.mu) and self.mu > 0):
            raise ValidationError(f"mu must be positive, got {self.mu}")
        if not (np.isfinite(self.cg_tol) and self.cg_tol > 0):
            raise ValidationError(f"cg_tol must be positive, got {self.cg_tol}")
        if self.cg_max_iters is not None and self.cg_max_iters < 1:
            raise ValidationError("cg_max_iters must be at least 1")
        if self.pd_floor is not None and not self.pd_floor > 0:
            raise ValidationError("pd_floor must be positive")


@dataclass(frozen=True)
class CgResult:
    x: np.ndarray
    iterations: int
    relative_residual: float
    converged: bool
    residual_history: Tuple[float, ...]


def conjugate_gradient(
    apply_A: Callable[[np.ndarray], np.ndarray],
    b: np.ndarray,
    tol: float = 1e-8,
    max_iters: Optional[int] = None,
    x0: Optional[np.ndarray] = None,
    inverse_diagonal: Optional[np.ndarray] = None,
) -> CgResult:
    """
    Conjugate gradient for a Hermitian positive definite operator.

    Args:
        apply_A:            x -> A x.
        b:                  Right-hand side.
        tol:                Stop once ||b - A x|| <= tol * ||b||.
        max_iters:          Iteration limit, 10 * len(b) when None.
        x0:                 Starting point, zero when None.
        inverse_diagonal:   Jacobi preconditioner M^-1 as a vector.

    Returns:    CgResult. When the limit is reached the iterate with the
                smallest residual is returned with converged=False.

    Raises:     NotPositiveDefiniteError when p^H A p <= 0 for a search
                direction p.
    """
    b = np.asarray(b, dtype=np.complex128)
    n = b.shape[0]
    max_iters = 10 * n if max_iters is None else max_iters

    b_norm = float(np.linalg.norm(b))
    if b_norm == 0:
        return CgResult(np.zeros(n, dtype=np.complex128), 0, 0.0, True, (0.0,))

    x = np.zeros(n, dtype=np.complex128) if x0 is None else np.array(x0, dtype=np.complex128)
    r = b - apply_A(x) if x0 is not None else b.copy()

    def precondition(v):
        return v if inverse_diagonal is None else inverse_diagonal * v

    z = precondition(r)
    p = z.copy()
    rz = np.vdot(r, z).real

    relative = float(np.linalg.norm(r)) / b_norm
    history = [relative]
    best_x, best_relative = x.copy(), relative
    if relative <= tol:
        return CgResult(x, 0, relative, True, tuple(history))

    for iteration in range(1, max_iters + 1):
        Ap = apply_A(p)
        curvature = np.vdot(p, Ap).real
        if curvature <= 0:
            raise NotPositiveDefiniteError(
                f"Non-positive curvature p^H A p = {curvature:.3e} at iteration {iteration}; "
                "the Laplacian must be repaired with ensure_pd() first."
            )

        alpha = rz / curvature
        x = x + alpha * p
        r = r - alpha * Ap

        relative = float(np.linalg.norm(r)) / b_norm
        history.append(relative)
        if relative < best_relative:
            best_x, best_relative = x.copy(), relative
        if relative <= tol:
            return CgResult(x, iteration, relative, True, tuple(history))

        z = precondition(r)
        rz_next = np.vdot(r, z).real
        beta = rz_next / rz
        rz = rz_next
        p = z + beta * p

    return CgResult(best_x, max_iters, best_relative, False, tuple(history))


@dataclass(frozen=True)
class InterpolationResult:
    x_star: np.ndarray
    cg_iterations: int
    final_relative_residual: float
    objective_value: float
    converged: bool
    residual_history: Tuple[float, ...] = ()


def objective_value(x, y, B: SamplingPattern, L, mu: float) -> float:
    """
    ||y - Bx||^2 + mu * x^H L x. Raises GlrResidualError when x^H L x has a
    significant imaginary part.
    """
    fidelity = apply_sampling(B, x) - as_complex_vector(y, "y")
    return float(np.vdot(fidelity, fidelity).real) + mu * hermitian_quadratic_form(L, x)


def interpolate(
    y, B: SamplingPattern, L: HermitianLaplacian, cfg: InterpolateConfig = InterpolateConfig()
) -> InterpolationResult:
    """
    Solve (B'B + mu L) x = B'y by conjugate gradient.

    L should have been passed through ensure_pd(); a non positive definite
    system raises NotPositiveDefiniteError. Hitting the iteration limit is
    not an error, the result is flagged converged=False.
    """
    if L.n != B.n:
        raise ValidationError(f"Laplacian has {L.n} nodes, sampling pattern {B.n}")

    rhs = B.adjoint(y)
    mask = B.mask
    mu = cfg.mu

    def apply_A(v):
        return mask * v + mu * L.matvec(v)

    inverse_diagonal = None
    if cfg.jacobi:
        diagonal = mask + mu * L.diagonal
        if np.any(diagonal <= 0):
            raise NotPositiveDefiniteError("B'B + mu L has a non-positive diagonal entry")
        inverse_diagonal = 1.0 / diagonal

    cg = conjugate_gradient(
        apply_A, rhs, tol=cfg.cg_tol, max_iters=cfg.cg_max_iters, inverse_diagonal=inverse_diagonal
    )
    if not cg.converged:
        module_logger.warning(
            f"CG stopped after {cg.iterations} iterations at relative residual {cg.relative_residual:.3e}"
        )

    return InterpolationResult(
        x_star=cg.x,
        cg_iterations=cg.iterations,
        final_relative_residual=cg.relative_residual,
        objective_value=objective_value(cg.x, y, B, L, mu),
        converged=cg.converged,
        residual_history=cg.residual_history,
    )


def interpolate_many(
    Y, B: SamplingPattern, L: HermitianLaplacian, cfg: InterpolateConfig = InterpolateConfig(), workers: int = 1
) -> List[InterpolationResult]:
    """
    Interpolate every column of the M x T matrix Y. Results are in column
    order whatever the number of workers.
    """
    Y = as_complex_matrix(Y, "Y")
    if Y.shape[0] != B.m:
        raise ValidationError(f"Expected {B.m} observed rows, got {Y.shape[0]}")
    return parallel_map(lambda t: interpolate(Y[:, t], B, L, cfg), range(Y.shape[1]), workers)
