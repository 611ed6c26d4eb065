"""
Copyright (C) 2026 hermit contributors.

This module wraps a symmetrized precision estimate P* = P^R* + jP^I* as a
Hermitian graph Laplacian. Only the real diagonal and the strict upper
triangle are stored, so L[j][i] = conj(L[i][j]) holds by construction.

It also provides the adjacency/degree view of the generalized Laplacian
L = D - W + diag(D) + diag(r), extreme-eigenvalue estimates by shifted
power iteration, and diagonal loading when L is not positive definite.

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
import json
import logging
from typing import *

import numpy as np
import scipy.sparse as sps

from hermit.clime import PrecisionEstimate
from hermit.complex_core import TOLERANCE, as_complex_vector, hermitian_quadratic_form, max_abs
from hermit.utils.errors import DataFormatError, ValidationError

module_logger = logging.getLogger("hermit.laplacian")


class HermitianLaplacian:
    """
    Hermitian N x N operator stored as a real diagonal plus a strict upper
    triangle. Instances are immutable.

    pd_floor is the total amount of diagonal loading applied by ensure_pd().
    """

    def __init__(self, diagonal, upper, pd_floor: float = 0.0):
        diagonal = np.asarray(diagonal)
        if np.iscomplexobj(diagonal):
            if np.any(diagonal.imag != 0):
                raise ValidationError("Laplacian diagonal must be real")
            diagonal = diagonal.real
        diagonal = np.array(diagonal, dtype=float)
        n = diagonal.shape[0]
        if diagonal.ndim != 1 or n == 0:
            raise ValidationError("Laplacian diagonal must be a non-empty vector")
        if not np.all(np.isfinite(diagonal)):
            raise ValidationError("Laplacian diagonal contains NaN or Inf entries")

        upper = sps.triu(sps.csr_matrix(upper, dtype=np.complex128), k=1, format="csr")
        if upper.shape != (n, n):
            raise ValidationError(f"Upper triangle has shape {upper.shape}, expected ({n}, {n})")
        upper.eliminate_zeros()
        upper.sort_indices()
        if upper.nnz and not np.all(np.isfinite(upper.data)):
            raise ValidationError("Laplacian entries contain NaN or Inf")

        self._n = n
        self._diagonal = diagonal
        self._diagonal.setflags(write=False)
        self._upper = upper
        self._lower = upper.conj().T.tocsr()
        self._pd_floor = float(pd_floor)
        self._norm_inf = None

    @property
    def n(self) -> int:
        return self._n

    @property
    def diagonal(self) -> np.ndarray:
        return self._diagonal

    @property
    def upper(self) -> sps.csr_matrix:
        return self._upper.copy()

    @property
    def pd_floor(self) -> float:
        return self._pd_floor

    @property
    def edge_count(self) -> int:
        return self._upper.nnz

    @classmethod
    def from_dense(cls, M, pd_floor: float = 0.0) -> "HermitianLaplacian":
        """
        Build from a dense Hermitian matrix. The lower triangle must be the
        conjugate of the upper triangle within TOLERANCE; the diagonal must
        be exactly real.
        """
        M = np.asarray(M, dtype=np.complex128)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise ValidationError(f"Laplacian must be square, got shape {M.shape}")
        scale = max(max_abs(M), 1.0)
        lower = np.tril(M, -1)
        if max_abs(lower - np.triu(M, 1).conj().T) > TOLERANCE.absolute * scale:
            raise ValidationError("Matrix is not Hermitian")
        return cls(np.diag(M), np.triu(M, 1), pd_floor)

    def to_sparse(self) -> sps.csr_matrix:
        return (sps.diags(self._diagonal.astype(np.complex128)) + self._upper + self._lower).tocsr()

    def to_dense(self) -> np.ndarray:
        return self.to_sparse().toarray()

    def matvec(self, x) -> np.ndarray:
        return self._diagonal * x + self._upper @ x + self._lower @ x

    def norm_inf(self) -> float:
        if self._norm_inf is None:
            row_sums = np.abs(self._diagonal) + np.asarray(abs(self._upper).sum(axis=1)).ravel()
            row_sums += np.asarray(abs(self._lower).sum(axis=1)).ravel()
            self._norm_inf = float(row_sums.max())
        return self._norm_inf

    def shift(self, delta: float) -> "HermitianLaplacian":
        """
        Return L + delta * I, adding delta to the recorded pd_floor.
        """
        return HermitianLaplacian(self._diagonal + delta, self._upper, self._pd_floor + delta)

    def glr(self, x) -> float:
        """
        Graph Laplacian regularizer x^H L x.
        """
        return hermitian_quadratic_form(self, x)

    def to_json(self) -> dict:
        """
        COO document with both triangles, in the same layout as a precision
        estimate.
        """
        coo = self.to_sparse().tocoo()
        order = np.lexsort((coo.col, coo.row))
        rows, cols, vals = coo.row[order], coo.col[order], coo.data[order]
        return {
            "n": self.n,
            "format": "coo",
            "real": [[int(r), int(c), float(v.real)] for r, c, v in zip(rows, cols, vals) if v.real != 0],
            "imag": [[int(r), int(c), float(v.imag)] for r, c, v in zip(rows, cols, vals) if v.imag != 0],
            "pd_floor": self.pd_floor,
        }

    @classmethod
    def from_json(cls, document: dict, path: str = "") -> "HermitianLaplacian":
        try:
            if document.get("format") != "coo":
                raise ValueError("format must be 'coo'")
            n = int(document["n"])
            if n < 1:
                raise ValueError(f"n must be positive, got {n}")
            M = np.zeros((n, n), dtype=np.complex128)
            for r, c, v in document["real"]:
                M[int(r), int(c)] += float(v)
            for r, c, v in document["imag"]:
                M[int(r), int(c)] += 1j * float(v)
            pd_floor = float(document.get("pd_floor", 0.0))
        except (KeyError, TypeError, ValueError, IndexError, AttributeError) as exc:
            raise DataFormatError(f"Invalid Laplacian document: {exc}", path)

        try:
            return cls.from_dense(M, pd_floor)
        except ValidationError as exc:
            raise DataFormatError(str(exc), path)

    def save(self, path: str, **extra) -> None:
        document = self.to_json()
        document.update(extra)
        with open(path, "w") as stream:
            json.dump(document, stream, indent=4)

    @classmethod
    def load(cls, path: str) -> "HermitianLaplacian":
        with open(path, "r") as stream:
            try:
                document = json.load(stream)
            except json.JSONDecodeError as exc:
                raise DataFormatError(str(exc), path, exc.lineno)
        return cls.from_json(document, path)

    def write_edge_list(self, stream: TextIO) -> None:
        """
        Write one line `i j amp phase` per edge of the adjacency view
        (w_ij = -L_ij = amp * exp(j * phase)), for i < j.
        """
        coo = self._upper.tocoo()
        order = np.lexsort((coo.col, coo.row))
        for r, c, v in zip(coo.row[order], coo.col[order], coo.data[order]):
            w = -v
            stream.write(f"{r} {c} {float(abs(w))!r} {float(np.angle(w))!r}\n")

    def __repr__(self) -> str:
        return f"HermitianLaplacian(n={self.n}, edges={self.edge_count}, pd_floor={self.pd_floor:g})"


def from_precision(est: PrecisionEstimate) -> HermitianLaplacian:
    """
    Interpret a symmetrized precision estimate as a Hermitian Laplacian.
    """
    if not est.symmetrized:
        raise ValidationError("Precision estimate must be symmetrized before building a Laplacian")
    if np.any(np.diag(est.p_imag) != 0):
        raise ValidationError("Precision estimate has a non-real diagonal")
    if np.any(est.p_real != est.p_real.T) or np.any(est.p_imag != -est.p_imag.T):
        raise ValidationError("Precision estimate is not exactly Hermitian")

    return HermitianLaplacian(np.diag(est.p_real), np.triu(est.p_real + 1j * est.p_imag, 1))


class AdjacencyView(NamedTuple):
    W: sps.csr_matrix
    degree: np.ndarray
    self_loops: np.ndarray


def _correct_residual(diagonal: np.ndarray, twice_degree: np.ndarray) -> np.ndarray:
    """
    Find r with twice_degree + r == diagonal in floating point.
    """
    r = diagonal - twice_degree
    for _ in range(4):
        error = diagonal - (twice_degree + r)
        if not np.any(error):
            return r
        r = r + error
    for i in np.flatnonzero(twice_degree + r != diagonal):
        direction = np.inf if twice_degree[i] + r[i] < diagonal[i] else -np.inf
        for _ in range(64):
            r[i] = np.nextafter(r[i], direction)
            if twice_degree[i] + r[i] == diagonal[i]:
                break
    return r


def adjacency_and_degree(L: HermitianLaplacian) -> AdjacencyView:
    """
    Split L into the generalized-Laplacian view L = D - W + diag(D) + diag(r).

    W[i][j] = -L[i][j] off the diagonal, D[i][i] = sum_j Re(W[i][j]) and r is
    the self-loop residual. Negative degrees are returned as they are.
    """
    upper = L.upper
    W = (-(upper + upper.conj().T)).tocsr()
    W.eliminate_zeros()
    degree = np.asarray(W.real.sum(axis=1)).ravel()
    self_loops = _correct_residual(L.diagonal, 2 * degree)
    return AdjacencyView(W=W, degree=degree, self_loops=self_loops)


def reassemble(view: AdjacencyView) -> HermitianLaplacian:
    """
    Inverse of adjacency_and_degree().
    """
    diagonal = 2 * view.degree + view.self_loops
    return HermitianLaplacian(diagonal, sps.triu(-view.W, k=1))


@dataclass(frozen=True)
class SpectralSummary:
    lambda_min_estimate: float
    lambda_max_estimate: float
    iterations: int
    residual_min: float
    residual_max: float
    converged: bool


def _power_iteration(L: HermitianLaplacian, sign: float, sigma: float, v, max_iters: int, tol: float):
    """
    Power iteration on sign * L + sigma * I, returning the Rayleigh quotient
    of L at the final iterate.
    """
    scale = max(sigma, TOLERANCE.absolute)
    v = v / np.linalg.norm(v)
    theta = hermitian_quadratic_form(L, v)
    residual = float(np.linalg.norm(L.matvec(v) - theta * v))

    for iteration in range(1, max_iters + 1):
        w = sign * L.matvec(v) + sigma * v
        norm = np.linalg.norm(w)
        if norm == 0:
            # v spans the eigenspace of eigenvalue -sign * sigma.
            return -sign * sigma, 0.0, iteration, True
        v = w / norm
        theta = hermitian_quadratic_form(L, v)
        residual = float(np.linalg.norm(L.matvec(v) - theta * v))
        if residual <= tol * scale:
            return theta, residual, iteration, True

    return theta, residual, max_iters, False


def spectral_summary(L: HermitianLaplacian, max_iters: int = 10000, tol: float = 1e-10, seed: int = 0) -> SpectralSummary:
    """
    Estimate the extreme eigenvalues of L.

    lambda_max comes from power iteration on L + sigma*I and lambda_min from
    sigma*I - L, with sigma = ||L||_inf bounding the spectral radius. Both
    estimates are Rayleigh quotients of L and therefore real. Iteration stops
    when ||L v - theta v|| <= tol * sigma; if max_iters is reached the
    best estimates are returned with converged=False.
    """
    sigma = L.norm_inf()
    if sigma == 0:
        return SpectralSummary(0.0, 0.0, 0, 0.0, 0.0, True)

    rng = np.random.default_rng(seed)
    start = as_complex_vector(rng.standard_normal(L.n) + 1j * rng.standard_normal(L.n))

    lam_max, res_max, it_max, ok_max = _power_iteration(L, 1.0, sigma, start, max_iters, tol)
    lam_min, res_min, it_min, ok_min = _power_iteration(L, -1.0, sigma, start, max_iters, tol)

    summary = SpectralSummary(
        lambda_min_estimate=float(lam_min),
        lambda_max_estimate=float(lam_max),
        iterations=it_max + it_min,
        residual_min=res_min,
        residual_max=res_max,
        converged=ok_max and ok_min,
    )
    if not summary.converged:
        module_logger.warning(
            f"Power iteration hit the iteration limit ({max_iters}); "
            f"residuals {res_min:.2e} (min) and {res_max:.2e} (max)"
        )
    return summary


def ensure_pd(L: HermitianLaplacian, floor: Optional[float] = None, summary: Optional[SpectralSummary] = None) -> HermitianLaplacian:
    """
    Diagonally load L so its smallest eigenvalue is at least `floor`.

    floor defaults to 1e-8 * lambda_max. L is returned unchanged when the
    lambda_min estimate already reaches the floor.
    """
    if summary is None:
        summary = spectral_summary(L)

    lam_min = summary.lambda_min_estimate
    if not summary.converged:
        # Widen the estimate by the residual norm.
        lam_min -= summary.residual_min

    if floor is None:
        floor = 1e-8 * max(summary.lambda_max_estimate, L.norm_inf(), TOLERANCE.absolute)

    if lam_min >= floor:
        return L

    delta = floor - lam_min
    module_logger.warning(
        f"Laplacian is not positive definite (lambda_min ~ {lam_min:.3e}); "
        f"loading the diagonal by {delta:.3e}"
    )
    return L.shift(delta)
