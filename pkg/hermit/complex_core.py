"""
Copyright (C) 2026 hermit contributors.

This module provides the complex linear-algebra primitives shared by the rest
of hermit: input validation for complex vectors and matrices, column
centering, the empirical covariance estimate, and the Hermitian quadratic
form (graph Laplacian regularizer) x^H L x.

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
from enum import Enum
import logging

import numpy as np
import scipy.sparse as sps

from hermit.utils.errors import GlrResidualError, ValidationError

module_logger = logging.getLogger("hermit.complex_core")


@dataclass(frozen=True)
class Tolerance:
    """
    Tolerances used by every invariant check in hermit.
    """

    absolute: float = 1e-12
    relative: float = 1e-10


TOLERANCE = Tolerance()


class Normalizer(Enum):
    """
    Divisor used by the empirical covariance.

    BY_NODES divides X X^H by the number of nodes N, BY_SAMPLES by the number
    of observations K.
    """

    BY_NODES = "nodes"
    BY_SAMPLES = "samples"


def as_complex_vector(x, name: str = "x") -> np.ndarray:
    """
    Validate and convert `x` to a finite, non-empty complex128 vector.
    """
    arr = np.asarray(x, dtype=np.complex128)
    if arr.ndim != 1:
        raise ValidationError(f"{name} must be a vector, got shape {arr.shape}")
    if arr.size == 0:
        raise ValidationError(f"{name} must not be empty")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains NaN or Inf entries")
    return arr


def as_complex_matrix(X, name: str = "X") -> np.ndarray:
    """
    Validate and convert `X` to a finite complex128 matrix with at least one
    row and one column.
    """
    arr = np.asarray(X, dtype=np.complex128)
    if arr.ndim != 2:
        raise ValidationError(f"{name} must be a matrix, got shape {arr.shape}")
    if arr.shape[0] == 0 or arr.shape[1] == 0:
        raise ValidationError(f"{name} has a zero dimension: {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains NaN or Inf entries")
    return arr


def max_abs(a) -> float:
    if sps.issparse(a):
        return float(abs(a).max()) if a.nnz else 0.0
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def hermitian_residual(M) -> float:
    """
    max |M[i][j] - conj(M[j][i])| for a dense or sparse square matrix.
    """
    if sps.issparse(M):
        diff = (M - M.conj().T).tocsr()
        return max_abs(diff)
    M = np.asarray(M)
    return max_abs(M - M.conj().T)


@dataclass(frozen=True)
class CovarianceMatrix:
    """
    Empirical covariance C of a set of zero-mean complex observations.

    The matrix is exactly Hermitian (it is averaged with its conjugate
    transpose after the product) and its diagonal is real.
    """

    matrix: np.ndarray
    sample_count: int
    normalizer: Normalizer

    def __post_init__(self):
        C = self.matrix
        if C.ndim != 2 or C.shape[0] != C.shape[1]:
            raise ValidationError(f"Covariance must be square, got shape {C.shape}")

        scale = max(max_abs(C), TOLERANCE.absolute)
        if hermitian_residual(C) > TOLERANCE.absolute * scale:
            raise ValidationError("Covariance is not Hermitian within tolerance")

        diag = np.diag(C)
        if np.max(np.abs(diag.imag)) > TOLERANCE.absolute * scale:
            raise ValidationError("Covariance diagonal is not real")
        if np.min(diag.real) < -TOLERANCE.absolute * scale:
            raise ValidationError("Covariance diagonal has negative entries")

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def real(self) -> np.ndarray:
        """C^R"""
        return np.ascontiguousarray(self.matrix.real)

    @property
    def imag(self) -> np.ndarray:
        """C^I"""
        return np.ascontiguousarray(self.matrix.imag)

    @property
    def is_real(self) -> bool:
        return not np.any(self.matrix.imag)


def center_columns(X) -> np.ndarray:
    """
    Remove the per-node mean (the mean of each row across the observation
    columns) so every row of the result has zero mean.
    """
    X = as_complex_matrix(X)
    return X - X.mean(axis=1, keepdims=True)


def empirical_covariance(
    X, normalizer: Normalizer = Normalizer.BY_NODES
) -> CovarianceMatrix:
    """
    Compute C = (1/d) X X^H.

    Args:
        X:          N x K matrix of zero-mean observations, one per column.
                    Centering is the caller's job, see center_columns().
        normalizer: d = N for BY_NODES, d = K for BY_SAMPLES.

    Returns:    CovarianceMatrix, exactly Hermitian.
    """
    X = as_complex_matrix(X)
    n, k = X.shape

    divisor = n if normalizer == Normalizer.BY_NODES else k

    C = (X @ X.conj().T) / divisor
    C = (C + C.conj().T) / 2

    return CovarianceMatrix(matrix=C, sample_count=k, normalizer=normalizer)


def _operator_parts(L, n: int):
    """
    Return (L @ x callable, infinity norm) for dense, sparse, or Laplacian
    style operators exposing matvec() and norm_inf().
    """
    if hasattr(L, "matvec") and hasattr(L, "norm_inf"):
        if L.n != n:
            raise ValidationError(f"Operator is {L.n} x {L.n}, vector has length {n}")
        return L.matvec, L.norm_inf()

    if sps.issparse(L):
        L = L.tocsr()
        norm = float(abs(L).sum(axis=1).max()) if L.nnz else 0.0
    else:
        L = np.asarray(L)
        norm = float(np.max(np.sum(np.abs(L), axis=1))) if L.size else 0.0

    if L.shape != (n, n):
        raise ValidationError(f"Operator has shape {L.shape}, vector has length {n}")

    return (lambda v: L @ v), norm


def hermitian_quadratic_form(L, x, tolerance: Tolerance = TOLERANCE) -> float:
    """
    Evaluate the graph Laplacian regularizer x^H L x for Hermitian L.

    The result is real for Hermitian L. The imaginary residual is checked
    against tolerance.relative * ||L||_inf * ||x||_2^2, and a GlrResidualError
    is raised when it is exceeded, since that means L is not Hermitian.

    Returns:    Re(x^H L x)
    """
    x = as_complex_vector(x)
    matvec, norm_inf = _operator_parts(L, x.shape[0])

    value = np.vdot(x, matvec(x))

    bound = tolerance.relative * norm_inf * float(np.vdot(x, x).real)
    bound = max(bound, tolerance.absolute * tolerance.relative)
    if abs(value.imag) > bound:
        raise GlrResidualError(
            f"Imaginary residual {abs(value.imag):.3e} of x^H L x exceeds {bound:.3e}; "
            "the operator is not Hermitian."
        )

    return float(value.real)
