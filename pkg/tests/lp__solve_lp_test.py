"""
Copyright (C) 2026 hermit contributors.

Tests for the lp.py linear program solver

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

from itertools import combinations
import io
import os
import unittest
import warnings

import numpy as np
import pytest
from scipy.linalg import LinAlgWarning
from scipy.optimize import linprog

from hermit.clime import ClimeConfig, build_column_lp
from hermit.complex_core import Normalizer, empirical_covariance
from hermit.data import random_hermitian_laplacian, sample_gmrf
from hermit.lp import *
from hermit.utils.errors import ValidationError

METHODS = ("interior-point", "simplex")


def vertex_optimum(c, A, b, upper):
    """
    Brute-force optimum of  min c x  s.t.  A x <= b, 0 <= x <= upper  by
    enumerating every vertex of the (bounded) feasible region.
    """
    n = c.shape[0]
    G = np.vstack([A, -np.eye(n), np.eye(n)])
    h = np.concatenate([b, np.zeros(n), upper])

    best = np.inf
    for active in combinations(range(G.shape[0]), n):
        G_a = G[list(active)]
        if abs(np.linalg.det(G_a)) < 1e-12:
            continue
        x = np.linalg.solve(G_a, h[list(active)])
        if np.all(G @ x <= h + 1e-9):
            best = min(best, float(c @ x))
    return best


def highs_optimum(problem: StandardFormLp) -> float:
    bounds = [
        (None if np.isinf(lo) else lo, None if np.isinf(hi) else hi) for lo, hi in zip(problem.lower, problem.upper)
    ]
    result = linprog(problem.c, A_ub=problem.A, b_ub=problem.b, bounds=bounds, method="highs")
    assert result.status == 0
    return float(result.fun)


def gmrf_column_lp(i: int = 0) -> StandardFormLp:
    # Nodes-normalized covariance of 2000 draws has entries far above 1.
    model = random_hermitian_laplacian(10, 0.3, np.pi / 4, seed=3)
    C = empirical_covariance(sample_gmrf(model, 2000, seed=4).X, Normalizer.BY_NODES)
    return build_column_lp(C, i, ClimeConfig(rho=0.2)).lp


class TestClass(unittest.TestCase):
    def test_small_lp(self):
        # min -x - y  s.t.  x + 2y <= 4,  3x + y <= 6,  x, y >= 0
        problem = StandardFormLp(c=[-1, -1], A=[[1, 2], [3, 1]], b=[4, 6])
        for method in METHODS:
            solution = solve_lp(problem, LpSettings(method=method))
            assert solution.success
            assert solution.objective_value == pytest.approx(-2.8, abs=1e-6)
            assert np.allclose(solution.x, [1.6, 1.2], atol=1e-6)
            assert solution.max_violation <= 1e-8

    def test_matches_vertex_enumeration(self):
        rng = np.random.default_rng(11)
        for _ in range(5):
            c = rng.standard_normal(3)
            A = rng.standard_normal((4, 3))
            b = rng.uniform(0.5, 2.0, size=4)
            upper = np.ones(3)
            expected = vertex_optimum(c, A, b, upper)

            problem = StandardFormLp(c=c, A=A, b=b, upper=upper)
            for method in METHODS:
                solution = solve_lp(problem, LpSettings(method=method))
                assert solution.status == LpStatus.OPTIMAL
                assert solution.objective_value == pytest.approx(expected, abs=1e-6)

    def test_free_variables(self):
        # min |x - 3| written as  min t  s.t.  x - t <= 3,  -x - t <= -3
        problem = StandardFormLp(
            c=[0, 1],
            A=[[1, -1], [-1, -1]],
            b=[3, -3],
            lower=[-np.inf, -np.inf],
            upper=[np.inf, np.inf],
        )
        for method in METHODS:
            solution = solve_lp(problem, LpSettings(method=method))
            assert solution.success
            assert solution.x[0] == pytest.approx(3.0, abs=1e-6)
            assert solution.objective_value == pytest.approx(0.0, abs=1e-6)

    def test_weak_duality(self):
        # Any feasible point bounds the optimum from above.
        rng = np.random.default_rng(2)
        A = rng.uniform(0.1, 1.0, size=(5, 4))
        b = rng.uniform(1.0, 2.0, size=5)
        c = -rng.uniform(0.1, 1.0, size=4)
        problem = StandardFormLp(c=c, A=A, b=b)
        solution = solve_lp(problem)

        for _ in range(20):
            x = rng.uniform(0, 1, size=4)
            x *= min(1.0, float(np.min(b / (A @ x))))
            assert problem.violation(x) <= 1e-12
            assert solution.objective_value <= float(c @ x) + 1e-8

    def test_infeasible(self):
        problem = StandardFormLp(c=[1], A=[[1]], b=[-1])
        for method in METHODS:
            solution = solve_lp(problem, LpSettings(method=method))
            assert solution.status == LpStatus.INFEASIBLE
            assert not solution.success

    def test_infeasible_empty_row(self):
        problem = StandardFormLp(c=[1, 1], A=[[0, 0], [1, 1]], b=[-1, 1])
        solution = solve_lp(problem)
        assert solution.status == LpStatus.INFEASIBLE

    def test_unbounded(self):
        # min -x  s.t.  x - y <= 1,  x, y >= 0
        problem = StandardFormLp(c=[-1, 0], A=[[1, -1]], b=[1])
        assert solve_lp(problem, LpSettings(method="simplex")).status == LpStatus.UNBOUNDED
        assert not solve_lp(problem, LpSettings(method="interior-point")).success

    def test_unbounded_empty_column(self):
        # x0 appears in no constraint and decreases the objective forever.
        problem = StandardFormLp(c=[-1, 1], A=[[0, 1]], b=[1])
        assert solve_lp(problem).status == LpStatus.UNBOUNDED

    def test_iteration_limit(self):
        rng = np.random.default_rng(4)
        problem = StandardFormLp(c=-np.ones(6), A=rng.uniform(0.1, 1, size=(6, 6)), b=np.ones(6))
        solution = solve_lp(problem, LpSettings(max_iters=1, simplex_fallback=False))
        assert solution.status == LpStatus.ITER_LIMIT
        assert solution.iterations == 1

    def test_simplex_fallback_after_iteration_limit(self):
        rng = np.random.default_rng(4)
        problem = StandardFormLp(c=-np.ones(6), A=rng.uniform(0.1, 1, size=(6, 6)), b=np.ones(6))
        solution = solve_lp(problem, LpSettings(max_iters=1))
        expected = solve_lp(problem, LpSettings(method="simplex"))
        assert solution.status == LpStatus.OPTIMAL
        assert "simplex" in solution.message
        assert solution.objective_value == pytest.approx(expected.objective_value, abs=1e-8)

    def test_nodes_normalized_clime_column(self):
        for i in (0, 5):
            problem = gmrf_column_lp(i)
            solution = solve_lp(problem)
            assert solution.status == LpStatus.OPTIMAL
            assert solution.max_violation <= 1e-7
            assert solution.objective_value == pytest.approx(highs_optimum(problem), rel=1e-5, abs=1e-9)

    def test_ill_conditioned_solves_do_not_warn(self):
        problem = gmrf_column_lp(0)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            solve_lp(problem)
        assert not [w for w in caught if issubclass(w.category, LinAlgWarning)]

    def test_deterministic(self):
        rng = np.random.default_rng(8)
        problem = StandardFormLp(c=rng.standard_normal(4), A=rng.standard_normal((6, 4)), b=np.ones(6), upper=np.ones(4))
        first = solve_lp(problem)
        second = solve_lp(problem)
        assert np.array_equal(first.x, second.x)
        assert first.iterations == second.iterations

    def test_validation(self):
        with pytest.raises(ValidationError):
            StandardFormLp(c=[1, 1], A=[[1, 1, 1]], b=[1])
        with pytest.raises(ValidationError):
            StandardFormLp(c=[1], A=[[1]], b=[1], lower=[2], upper=[1])
        with pytest.raises(ValidationError):
            StandardFormLp(c=[np.nan], A=[[1]], b=[1])
        with pytest.raises(ValidationError):
            LpSettings(method="barrier")

    def test_dump_lp(self):
        problem = StandardFormLp(c=[0, 2.5], A=[[1, -1]], b=[3], upper=[np.inf, 4])
        stream = io.StringIO()
        dump_lp(problem, stream)

        assert stream.getvalue().splitlines() == [
            "# hermit linear program",
            "variables 2",
            "constraints 1",
            "minimize: 2.5 x1",
            "r0: 1.0 x0 - 1.0 x1 <= 3.0",
            "bound x0: 0.0 <= x0 <= inf",
            "bound x1: 0.0 <= x1 <= 4.0",
        ]


if __name__ == "__main__":
    pytest.main(args=["-v", os.path.abspath(__file__)])
