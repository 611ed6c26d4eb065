"""
Copyright (C) 2026 hermit contributors.

Tests for the pipeline.py learning and interpolation chains

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

from dataclasses import replace
import os
import unittest

import numpy as np
import pytest

from hermit.clime import ClimeConfig
from hermit.data import random_hermitian_laplacian, sample_gmrf
from hermit.interpolate import InterpolateConfig, SamplingPattern
from hermit.laplacian import HermitianLaplacian
from hermit.lp import LpSettings
from hermit.pipeline import *
from hermit.utils.errors import DegradedEstimateError


def shifted_model(seed: int, n: int = 8):
    # lambda_min = 1.1 keeps the covariance well conditioned.
    model = random_hermitian_laplacian(n, 0.3, np.pi / 4, seed=seed)
    return replace(model, laplacian=model.laplacian.shift(1.0))


class TestClass(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.model = shifted_model(11)
        cls.X = sample_gmrf(cls.model, 2000, seed=12).X

    def test_learned_mean_is_the_training_mean(self):
        learned = learn_laplacian(self.X[:, :200] + (2 - 1j))
        assert np.allclose(learned.mean, self.X[:, :200].mean(axis=1) + (2 - 1j), atol=1e-12)

    def test_uncentered(self):
        learned = learn_laplacian(self.X[:, :200], center=False)
        assert not np.any(learned.mean)

    def test_positive_definite_before_repair(self):
        # sqrt(cond(C)) * N * rho < 1 bounds every feasible estimate away
        # from singularity.
        for seed in range(5):
            X = sample_gmrf(shifted_model(seed), 2000, seed=100 + seed).X
            learned = learn_laplacian(X, ClimeConfig(rho=0.02))
            assert not learned.degraded_columns
            assert np.linalg.eigvalsh(learned.estimate.matrix)[0] > 0
            assert learned.summary.lambda_min_estimate > 0

    def test_support_recovery(self):
        X = sample_gmrf(self.model, 20000, seed=13).X
        learned = learn_laplacian(X, ClimeConfig(rho=0.01))
        estimate = np.abs(learned.estimate.matrix)
        truth = np.abs(self.model.laplacian.to_dense())

        rows, cols = np.triu_indices(8, k=1)
        edges = truth[rows, cols] > 0
        assert np.any(edges) and not np.all(edges)

        on_edges = estimate[rows, cols][edges]
        off_edges = estimate[rows, cols][~edges]
        assert np.all(on_edges > 0)
        assert on_edges.mean() > 4 * off_edges.mean()

    def test_sparsity_grows_with_rho(self):
        counts = [learn_laplacian(self.X, ClimeConfig(rho=rho)).estimate.nonzero_count() for rho in (0.01, 0.3, 0.9)]
        assert counts == sorted(counts, reverse=True)
        assert counts[-1] < counts[0]

    def test_degraded_estimate_is_refused(self):
        cfg = ClimeConfig(rho=0.1, lp=LpSettings(max_iters=1, simplex_fallback=False))
        with pytest.raises(DegradedEstimateError):
            learn_laplacian(self.X[:, :200], cfg, allow_degraded=False)

        learned = learn_laplacian(self.X[:, :200], cfg)
        assert learned.degraded_columns
        document = learned.to_json()
        assert sorted(document["column_fallbacks"]) == sorted(str(i) for i in learned.degraded_columns)

    def test_interpolation_repairs_the_laplacian(self):
        # Eigenvalues -1 and 3; pd_floor 0.5 loads the diagonal by 1.5.
        L = HermitianLaplacian.from_dense(np.array([[1.0, 2.0], [2.0, 1.0]]))
        learned = LearnedGraph(laplacian=L, mean=np.zeros(2, dtype=complex))
        pattern = SamplingPattern.from_indices(2, [0])
        cfg = InterpolateConfig(mu=1.0, pd_floor=0.5)

        result = interpolate_states(np.array([[1.0]]), pattern, learned, cfg)[0]
        # (B'B + L + 1.5 I) x = B'y
        assert np.allclose(result.x_star, [2.5 / 4.75, -2.0 / 4.75], atol=1e-6)
        assert np.array_equal(learned.laplacian.diagonal, [1.0, 1.0])


if __name__ == "__main__":
    pytest.main(args=["-v", os.path.abspath(__file__)])
