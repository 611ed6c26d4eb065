"""
Copyright (C) 2026 hermit contributors.

Tests for laplacian.py

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

import io
import os
import tempfile
import unittest

import numpy as np
import pytest
import scipy.linalg

from hermit.clime import PrecisionEstimate, symmetrize
from hermit.data import random_hermitian_laplacian
from hermit.laplacian import *
from hermit.lp import LpStatus
from hermit.utils.errors import DataFormatError, GlrResidualError, ValidationError


def random_hermitian(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    M = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    H = (M + M.conj().T) / 2
    np.fill_diagonal(H, np.diag(H).real)
    return H


class TestClass(unittest.TestCase):
    def test_from_precision(self):
        estimate = symmetrize(
            PrecisionEstimate(
                p_real=np.array([[2.0, -1.0], [-0.5, 3.0]]),
                p_imag=np.array([[0.0, 0.5], [-0.5, 0.0]]),
                rho_used=0.2,
                statuses=(LpStatus.OPTIMAL,) * 2,
            )
        )
        L = from_precision(estimate)

        assert L.n == 2
        assert np.array_equal(L.diagonal, [2.0, 3.0])
        assert np.array_equal(L.to_dense(), [[2.0, -0.75 + 0.5j], [-0.75 - 0.5j, 3.0]])
        assert L.edge_count == 1

    def test_from_precision_requires_symmetrized(self):
        estimate = PrecisionEstimate(
            p_real=np.eye(2), p_imag=np.zeros((2, 2)), rho_used=0.2, statuses=(LpStatus.OPTIMAL,) * 2
        )
        with pytest.raises(ValidationError):
            from_precision(estimate)

    def test_from_dense_rejects_non_hermitian(self):
        with pytest.raises(ValidationError):
            HermitianLaplacian.from_dense([[1, 1j], [1j, 1]])
        with pytest.raises(ValidationError):
            HermitianLaplacian.from_dense([[1j, 0], [0, 1]])

    def test_matvec_matches_dense(self):
        H = random_hermitian(7, 1)
        L = HermitianLaplacian.from_dense(H)
        x = np.arange(7) - 2j
        assert np.allclose(L.matvec(x), H @ x, rtol=1e-12, atol=1e-12)
        assert np.array_equal(L.to_dense(), H)

    def test_adjacency_chain(self):
        view = adjacency_and_degree(HermitianLaplacian.from_dense([[2, -1], [-1, 2]]))
        assert np.array_equal(view.W.toarray(), [[0, 1], [1, 0]])
        assert np.array_equal(view.degree, [1.0, 1.0])
        assert np.array_equal(view.self_loops, [0.0, 0.0])

    def test_adjacency_diagonal(self):
        view = adjacency_and_degree(HermitianLaplacian.from_dense(np.diag([3.0, 4.0])))
        assert view.W.nnz == 0
        assert np.array_equal(view.degree, [0.0, 0.0])
        assert np.array_equal(view.self_loops, [3.0, 4.0])

    def test_adjacency_reassembles_exactly(self):
        for seed in range(5):
            L = HermitianLaplacian.from_dense(random_hermitian(9, seed))
            assert np.array_equal(reassemble(adjacency_and_degree(L)).to_dense(), L.to_dense())

    def test_spectral_summary_diagonal(self):
        summary = spectral_summary(HermitianLaplacian.from_dense(np.diag([1.0, 2.0, 5.0])))
        assert summary.converged
        assert summary.lambda_min_estimate == pytest.approx(1.0, abs=1e-8)
        assert summary.lambda_max_estimate == pytest.approx(5.0, abs=1e-8)

    def test_spectral_summary_complex(self):
        summary = spectral_summary(HermitianLaplacian.from_dense([[1, -1j], [1j, 1]]))
        assert summary.lambda_min_estimate == pytest.approx(0.0, abs=1e-8)
        assert summary.lambda_max_estimate == pytest.approx(2.0, abs=1e-8)

    def test_spectral_summary_matches_eigensolver(self):
        H = random_hermitian(12, 4)
        eigenvalues = scipy.linalg.eigvalsh(H)
        summary = spectral_summary(HermitianLaplacian.from_dense(H), max_iters=100000)
        assert summary.lambda_min_estimate == pytest.approx(eigenvalues[0], abs=1e-6)
        assert summary.lambda_max_estimate == pytest.approx(eigenvalues[-1], abs=1e-6)

    def test_ensure_pd_repairs(self):
        L = ensure_pd(HermitianLaplacian.from_dense(np.diag([-1.0, 1.0])))
        eigenvalues = scipy.linalg.eigvalsh(L.to_dense())
        assert eigenvalues[0] > 0
        assert eigenvalues[0] == pytest.approx(1e-8, rel=1e-3)
        assert L.pd_floor == pytest.approx(1.0, rel=1e-6)

    def test_ensure_pd_explicit_floor(self):
        L = ensure_pd(HermitianLaplacian.from_dense([[1, -1j], [1j, 1]]), floor=0.5)
        assert scipy.linalg.eigvalsh(L.to_dense())[0] == pytest.approx(0.5, abs=1e-8)

    def test_ensure_pd_keeps_pd_input(self):
        L = HermitianLaplacian.from_dense(np.diag([1.0, 2.0]))
        assert ensure_pd(L) is L

    def test_glr_is_real(self):
        L = HermitianLaplacian.from_dense(random_hermitian(8, 2))
        rng = np.random.default_rng(9)
        x = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        assert isinstance(L.glr(x), float)
        assert L.glr(x) == pytest.approx(np.vdot(x, L.to_dense() @ x).real, rel=1e-10)

    def test_glr_is_real_for_many_draws(self):
        L = random_hermitian_laplacian(20, 0.3, np.pi / 2, seed=7).laplacian
        rng = np.random.default_rng(10)
        for _ in range(1000):
            x = rng.standard_normal(20) + 1j * rng.standard_normal(20)
            energy = float(np.vdot(x, x).real)
            value = np.vdot(x, L.matvec(x))
            assert abs(value.imag) <= 1e-10 * L.norm_inf() * energy
            assert L.glr(x) == value.real
            assert L.glr(x) >= 0.1 * energy * (1 - 1e-9)

    def test_glr_rejects_non_hermitian_operator(self):
        class Skewed:
            n = 2

            def matvec(self, x):
                return np.array([x[1], 0])

            def norm_inf(self):
                return 1.0

        from hermit.complex_core import hermitian_quadratic_form

        with pytest.raises(GlrResidualError):
            hermitian_quadratic_form(Skewed(), np.array([1, 1j]))

    def test_json(self):
        L = HermitianLaplacian.from_dense(random_hermitian(5, 3)).shift(0.25)
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "laplacian.json")
            L.save(path, rho=0.2)
            loaded = HermitianLaplacian.load(path)
        assert np.array_equal(loaded.to_dense(), L.to_dense())
        assert loaded.pd_floor == 0.25

    def test_json_errors(self):
        with pytest.raises(DataFormatError):
            HermitianLaplacian.from_json({"n": 2, "format": "dense"})
        with pytest.raises(DataFormatError):
            HermitianLaplacian.from_json({"n": 2, "format": "coo", "real": [[0, 1, 1.0]], "imag": []})

    def test_edge_list(self):
        L = HermitianLaplacian.from_dense([[2, -1j, 0], [1j, 2, 0], [0, 0, 1]])
        stream = io.StringIO()
        L.write_edge_list(stream)
        fields = stream.getvalue().split()
        assert fields[:2] == ["0", "1"]
        assert float(fields[2]) == pytest.approx(1.0)
        assert float(fields[3]) == pytest.approx(np.pi / 2)


if __name__ == "__main__":
    pytest.main(args=["-v", os.path.abspath(__file__)])
