"""
Copyright (C) 2026 hermit contributors.

Tests for data.py generation, CSV input/output and splitting

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
import tempfile
import unittest

import numpy as np
import pytest
import scipy.linalg

from hermit.data import *
from hermit.complex_core import Normalizer, empirical_covariance
from hermit.laplacian import HermitianLaplacian
from hermit.utils.errors import DataFormatError, ValidationError


class TestClass(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.tmp.cleanup()

    def write(self, name: str, text: str) -> str:
        path = os.path.join(self.tmp.name, name)
        with open(path, "w") as stream:
            stream.write(text)
        return path

    def test_ground_truth_is_pd(self):
        for seed in range(5):
            model = random_hermitian_laplacian(12, 0.3, np.pi / 4, seed)
            lam_min = scipy.linalg.eigvalsh(model.laplacian.to_dense())[0]
            assert lam_min >= GROUND_TRUTH_LAMBDA_MIN - 1e-10

    def test_ground_truth_is_deterministic(self):
        first = random_hermitian_laplacian(10, seed=4)
        second = random_hermitian_laplacian(10, seed=4)
        assert np.array_equal(first.laplacian.to_dense(), second.laplacian.to_dense())

    def test_zero_phase_spread_is_real(self):
        model = random_hermitian_laplacian(8, 0.5, 0.0, 1)
        assert not np.any(model.laplacian.to_dense().imag)

    def test_sparse_ground_truth_may_be_disconnected(self):
        # Connectivity is not enforced; six nodes need five edges to connect.
        model = random_hermitian_laplacian(6, 0.01, np.pi / 4, 0)
        assert model.laplacian.edge_count < 5
        lam_min = scipy.linalg.eigvalsh(model.laplacian.to_dense())[0]
        assert lam_min == pytest.approx(GROUND_TRUTH_LAMBDA_MIN, abs=1e-10)

    def test_complete_triangle(self):
        model = random_hermitian_laplacian(3, 1.0, np.pi / 3, 2)
        L = model.laplacian.to_dense()
        assert model.laplacian.edge_count == 3
        assert np.array_equal(L, L.conj().T)

    def test_generator_validation(self):
        with pytest.raises(ValidationError):
            random_hermitian_laplacian(1)
        with pytest.raises(ValidationError):
            random_hermitian_laplacian(5, edge_density=0)
        with pytest.raises(ValidationError):
            GroundTruthModel(HermitianLaplacian.from_dense(np.diag([1.0, -1.0])), seed=0)

    def test_identity_sample_variance(self):
        model = GroundTruthModel(HermitianLaplacian.from_dense(np.eye(3)), seed=0)
        ds = sample_gmrf(model, 10000, seed=1)
        variance = np.mean(np.abs(ds.X) ** 2, axis=1)
        assert np.allclose(variance, 1.0, rtol=0.05)

    def test_sample_covariance_converges(self):
        model = random_hermitian_laplacian(4, 0.6, np.pi / 4, 3)
        ds = sample_gmrf(model, 5000, seed=5)
        C = empirical_covariance(ds.X, Normalizer.BY_SAMPLES).matrix
        inverse = np.linalg.inv(model.laplacian.to_dense())
        assert np.max(np.abs(C - inverse)) <= 0.1 * np.max(np.abs(inverse))

    def test_sampling_is_deterministic(self):
        model = random_hermitian_laplacian(6, seed=1)
        assert np.array_equal(sample_gmrf(model, 50, 2).X, sample_gmrf(model, 50, 2).X)

    def test_csv_round_trip(self):
        model = random_hermitian_laplacian(5, seed=0)
        ds = sample_gmrf(model, 20, seed=1)
        path = os.path.join(self.tmp.name, "data.csv")
        save_csv(ds, path)

        loaded = load_csv(path)
        assert np.array_equal(loaded.X, ds.X)
        with open(path) as stream:
            assert stream.readline() == "# n=5\n"

    def test_csv_without_header(self):
        ds = load_csv(self.write("plain.csv", "1,2,3,4\n5,6,7,8\n"))
        assert ds.n == 2
        assert ds.k == 2
        assert np.array_equal(ds.X[:, 1], [5 + 6j, 7 + 8j])

    def test_csv_wrong_field_count(self):
        path = self.write("short.csv", "# n=2\n1,2,3,4\n1,2\n")
        with pytest.raises(DataFormatError) as info:
            load_csv(path)
        assert info.value.line == 3
        assert ":3:" in str(info.value)

    def test_csv_non_numeric(self):
        with pytest.raises(DataFormatError) as info:
            load_csv(self.write("text.csv", "1,2\nfoo,2\n"))
        assert info.value.line == 2

    def test_csv_header_only(self):
        with pytest.raises(DataFormatError):
            load_csv(self.write("empty.csv", "# n=3\n"))

    def test_split(self):
        ds = Dataset(X=np.arange(20).reshape(2, 10))
        first = split(ds, 7, seed=3)
        second = split(ds, 7, seed=3)

        assert first.train.shape[0] == 7
        assert first.test.shape[0] == 3
        assert not set(first.train) & set(first.test)
        assert np.array_equal(first.train, second.train)
        assert first.train_hash() == second.train_hash()

    def test_split_bounds(self):
        ds = Dataset(X=np.ones((2, 10)))
        with pytest.raises(ValidationError):
            split(ds, 10)
        with pytest.raises(ValidationError):
            split(ds, 0)

    def test_overlapping_split(self):
        with pytest.raises(ValidationError):
            Dataset(X=np.ones((2, 4)), train=[0, 1, 2], test=[2, 3])

    def test_head(self):
        ds = split(Dataset(X=np.arange(20).reshape(2, 10)), 6, seed=0)
        head = ds.head(4)
        assert head.train.shape[0] == 4
        assert np.array_equal(head.train_X, ds.train_X[:, :4])
        assert np.array_equal(head.test_X, ds.test_X)

    def test_model_json(self):
        model = random_hermitian_laplacian(6, seed=2)
        path = os.path.join(self.tmp.name, "model.json")
        model.save(path)
        loaded = GroundTruthModel.load(path)
        assert np.array_equal(loaded.laplacian.to_dense(), model.laplacian.to_dense())
        assert loaded.seed == 2


if __name__ == "__main__":
    pytest.main(args=["-v", os.path.abspath(__file__)])
