"""
Copyright (C) 2026 hermit contributors.

Tests for complex_core.py covariance and quadratic form functions

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

import os
import unittest

import numpy as np
import pytest
import scipy.sparse as sps

from hermit.complex_core import *
from hermit.utils.errors import GlrResidualError, ValidationError


class TestClass(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        rng = np.random.default_rng(3)
        cls.X = rng.standard_normal((5, 40)) + 1j * rng.standard_normal((5, 40))

    def test_covariance_single_observation(self):
        C = empirical_covariance(np.array([[1.0], [1j]]), Normalizer.BY_SAMPLES)
        assert np.array_equal(C.matrix, np.array([[1, -1j], [1j, 1]]))
        assert C.sample_count == 1
        assert hermitian_residual(C.matrix) == 0

    def test_covariance_normalizers(self):
        by_nodes = empirical_covariance(self.X, Normalizer.BY_NODES)
        by_samples = empirical_covariance(self.X, Normalizer.BY_SAMPLES)

        assert np.allclose(by_nodes.matrix, self.X @ self.X.conj().T / 5, rtol=1e-12, atol=1e-12)
        assert np.allclose(by_samples.matrix, self.X @ self.X.conj().T / 40, rtol=1e-12, atol=1e-12)

    def test_covariance_is_exactly_hermitian(self):
        C = empirical_covariance(self.X)
        assert np.array_equal(C.matrix, C.matrix.conj().T)
        assert not np.any(np.diag(C.matrix).imag)
        assert not C.is_real

    def test_covariance_of_real_data_is_real(self):
        C = empirical_covariance(self.X.real)
        assert C.is_real
        assert np.array_equal(C.imag, np.zeros((5, 5)))

    def test_center_columns(self):
        centered = center_columns(self.X + 4 - 2j)
        assert np.allclose(centered.mean(axis=1), 0, atol=1e-12)

    def test_rejects_nan(self):
        X = self.X.copy()
        X[2, 3] = np.nan
        with pytest.raises(ValidationError):
            empirical_covariance(X)

    def test_rejects_non_hermitian_covariance(self):
        with pytest.raises(ValidationError):
            CovarianceMatrix(np.array([[1, 1j], [1j, 1]]), 1, Normalizer.BY_NODES)

    def test_quadratic_form_closed_form(self):
        L = np.array([[1, -1j], [1j, 1]])
        assert hermitian_quadratic_form(L, np.array([1, 1j])) == pytest.approx(4.0)

    def test_quadratic_form_sparse_matches_dense(self):
        rng = np.random.default_rng(5)
        M = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        L = M + M.conj().T
        x = rng.standard_normal(6) + 1j * rng.standard_normal(6)

        dense = hermitian_quadratic_form(L, x)
        sparse = hermitian_quadratic_form(sps.csr_matrix(L), x)
        assert sparse == pytest.approx(dense, rel=1e-12)
        assert dense == pytest.approx(np.vdot(x, L @ x).real, rel=1e-12)

    def test_quadratic_form_rejects_non_hermitian(self):
        L = np.array([[0, 1], [0, 0]], dtype=complex)
        with pytest.raises(GlrResidualError):
            hermitian_quadratic_form(L, np.array([1, 1j]))

    def test_quadratic_form_dimension_mismatch(self):
        with pytest.raises(ValidationError):
            hermitian_quadratic_form(np.eye(3), np.ones(2))


if __name__ == "__main__":
    pytest.main(args=["-v", os.path.abspath(__file__)])
