"""
Copyright (C) 2026 hermit contributors.

This module runs interpolation experiments on held-out observations: mean
squared error against the number of observed nodes with 95% Student-t
confidence intervals, the sensitivity to the number of observations used
for the covariance, rho and mu sweeps, and an ablation that learns separate
real-valued graphs for the real and imaginary parts of the signals.

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

import csv
from dataclasses import dataclass, field, replace
import logging
import time
from typing import *

import numpy as np
from scipy import stats

from hermit.clime import ClimeConfig
from hermit.complex_core import Normalizer
from hermit.data import Dataset
from hermit.interpolate import InterpolateConfig, SamplingPattern, apply_sampling, interpolate
from hermit.laplacian import HermitianLaplacian
from hermit.pipeline import LearnedGraph, learn_laplacian
from hermit.utils.errors import SolverError, ValidationError
from hermit.utils.parallel import parallel_map

module_logger = logging.getLogger("hermit.evaluate")

CONFIDENCE = 0.95

METRICS = ("mse_magnitude", "mse_phase", "mse_complex")


@dataclass(frozen=True)
class SweepSpec:
    """
    Args:
        sample_counts:      Numbers of observed nodes M to evaluate.
        trials:             Random sampling patterns per M.
        seed:               Seed of the per-trial generators.
        mu:                 Regularizer weight used for interpolation.
        rho:                CLIME slack used whenever a graph is learned.
        decompose:          Report magnitude and phase MSE besides complex MSE.
        max_test_vectors:   Score at most this many test observations.
        cg_tol:             CG relative residual target.
        jacobi:             Jacobi-preconditioned CG.
        workers:            Trials evaluated at the same time.
        record_timing:      Include wall-clock statistics in the report.
    """

    sample_counts: Tuple[int, ...] = (8, 12, 16)
    trials: int = 20
    seed: int = 0
    mu: float = 0.1
    rho: float = 0.2
    decompose: bool = True
    max_test_vectors: Optional[int] = None
    cg_tol: float = 1e-8
    jacobi: bool = False
    workers: int = 1
    record_timing: bool = False

    def __post_init__(self):
        object.__setattr__(self, "sample_counts", tuple(int(m) for m in self.sample_counts))
        if not self.sample_counts:
            raise ValidationError("At least one sample count is required")
        if any(m < 1 for m in self.sample_counts):
            raise ValidationError("Sample counts must be positive")
        if self.trials < 2:
            raise ValidationError(f"At least 2 trials are needed for a confidence interval, got {self.trials}")
        if self.max_test_vectors is not None and self.max_test_vectors < 1:
            raise ValidationError("max_test_vectors must be positive")
        if self.workers < 1:
            raise ValidationError("workers must be at least 1")
        # Delegate the numeric checks to the consuming configurations.
        self.interpolate_config()
        ClimeConfig(rho=self.rho)

    def interpolate_config(self) -> InterpolateConfig:
        return InterpolateConfig(mu=self.mu, cg_tol=self.cg_tol, jacobi=self.jacobi)

    def check_nodes(self, n: int) -> None:
        # Scores are taken over unobserved nodes, so at least one must remain.
        too_large = [m for m in self.sample_counts if m >= n]
        if too_large:
            raise ValidationError(f"Sample counts {too_large} must be below the node count {n}")


def _unobserved(x_hat, x_true, pattern: SamplingPattern) -> Tuple[np.ndarray, np.ndarray]:
    x_hat = np.asarray(x_hat, dtype=np.complex128)
    x_true = np.asarray(x_true, dtype=np.complex128)
    if x_hat.shape != x_true.shape or x_hat.shape[0] != pattern.n:
        raise ValidationError(f"Expected two vectors of length {pattern.n}")
    unobserved = pattern.unobserved
    if unobserved.size == 0:
        raise ValidationError("Every node is observed, there is nothing to score")
    return x_hat[unobserved], x_true[unobserved]


def wrapped_phase_difference(a, b) -> np.ndarray:
    """
    arg(a) - arg(b) wrapped to (-pi, pi].
    """
    d = np.angle(np.asarray(a) * np.conj(b))
    return np.where(d <= -np.pi, d + 2 * np.pi, d)


def mse_decomposed(x_hat, x_true, pattern: SamplingPattern) -> Tuple[float, float]:
    """
    Magnitude and wrapped-phase mean squared error over the unobserved nodes.
    """
    x_hat, x_true = _unobserved(x_hat, x_true, pattern)
    mse_magnitude = float(np.mean((np.abs(x_hat) - np.abs(x_true)) ** 2))
    mse_phase = float(np.mean(wrapped_phase_difference(x_hat, x_true) ** 2))
    return mse_magnitude, mse_phase


def mse_complex(x_hat, x_true, pattern: SamplingPattern) -> float:
    x_hat, x_true = _unobserved(x_hat, x_true, pattern)
    return float(np.mean(np.abs(x_hat - x_true) ** 2))


def confidence_interval(values: Sequence[float], confidence: float = CONFIDENCE) -> Tuple[float, float]:
    """
    (mean, Student-t half-width). The half-width is NaN for fewer than two values.
    """
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return float("nan"), float("nan")
    mean = float(values.mean())
    if values.size < 2:
        return mean, float("nan")
    sem = values.std(ddof=1) / np.sqrt(values.size)
    return mean, float(stats.t.ppf(0.5 + confidence / 2, values.size - 1) * sem)


@dataclass
class ReportRow:
    value: float
    trials: Dict[str, List[float]] = field(default_factory=lambda: {metric: [] for metric in METRICS})
    failed: int = 0
    seconds: List[float] = field(default_factory=list)
    extras: Dict[str, float] = field(default_factory=dict)

    @property
    def succeeded(self) -> int:
        return len(self.trials["mse_complex"])

    def summary(self, decompose: bool = True, record_timing: bool = False) -> dict:
        row = {"value": self.value, "trials": self.succeeded, "failed": self.failed}
        for metric in METRICS:
            if not decompose and metric != "mse_complex":
                continue
            mean, half_width = confidence_interval(self.trials[metric])
            row[metric] = mean
            row[f"{metric}_ci"] = half_width
        if record_timing and self.seconds:
            row["seconds_per_vector"] = float(np.mean(self.seconds))
        row.update(self.extras)
        return row


@dataclass
class ExperimentReport:
    """
    One row per swept value, sorted by value.
    """

    kind: str
    parameter: str
    rows: List[ReportRow]
    decompose: bool = True
    record_timing: bool = False
    config: dict = field(default_factory=dict)

    def __post_init__(self):
        self.rows = sorted(self.rows, key=lambda row: row.value)

    def values(self) -> List[float]:
        return [row.value for row in self.rows]

    def means(self, metric: str = "mse_complex") -> List[float]:
        return [confidence_interval(row.trials[metric])[0] for row in self.rows]

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "parameter": self.parameter,
            "confidence": CONFIDENCE,
            "rows": [row.summary(self.decompose, self.record_timing) for row in self.rows],
            "config": self.config,
        }

    def to_text(self) -> str:
        metrics = METRICS if self.decompose else ("mse_complex",)
        header = [self.parameter] + [f"{metric} (95% CI)" for metric in metrics] + ["trials"]
        lines = []
        for row in self.rows:
            summary = row.summary(self.decompose)
            cells = [f"{row.value:g}"]
            for metric in metrics:
                cells.append(f"{summary[metric]:.4g} ± {summary[metric + '_ci']:.2g}")
            cells.append(f"{row.succeeded}" + (f" ({row.failed} failed)" if row.failed else ""))
            lines.append(cells)

        widths = [max(len(cells[i]) for cells in [header] + lines) for i in range(len(header))]
        output = ["  ".join(cell.ljust(width) for cell, width in zip(header, widths)).rstrip()]
        output.append("  ".join("-" * width for width in widths))
        for cells in lines:
            output.append("  ".join(cell.ljust(width) for cell, width in zip(cells, widths)).rstrip())
        return "\n".join(output) + "\n"

    def write_raw_csv(self, stream: TextIO) -> None:
        """
        One line per successful trial: parameter value, trial number and the
        trial's MSE values.
        """
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow([self.parameter, "trial"] + list(METRICS))
        for row in self.rows:
            for t in range(row.succeeded):
                writer.writerow(
                    [repr(row.value), t] + [repr(row.trials[metric][t]) for metric in METRICS]
                )


class _Predictor(Protocol):
    def __call__(self, pattern: SamplingPattern, x: np.ndarray) -> np.ndarray:
        ...


def _test_vectors(ds: Dataset, spec: SweepSpec) -> np.ndarray:
    if ds.test.size == 0:
        raise ValidationError("Dataset has no test observations; split it first")
    X = ds.test_X
    if spec.max_test_vectors is not None:
        X = X[:, : spec.max_test_vectors]
    return X


def _trial(X_test: np.ndarray, m: int, t: int, spec: SweepSpec, predict: _Predictor):
    """
    Score one random sampling pattern over every test vector. Returns
    (metric means, seconds per vector) or None if a solver failed.
    """
    rng = np.random.default_rng([spec.seed, m, t])
    pattern = SamplingPattern.random(X_test.shape[0], m, rng)

    totals = {metric: 0.0 for metric in METRICS}
    start = time.perf_counter()
    try:
        for x in X_test.T:
            x_hat = predict(pattern, x)
            magnitude, phase = mse_decomposed(x_hat, x, pattern)
            totals["mse_magnitude"] += magnitude
            totals["mse_phase"] += phase
            totals["mse_complex"] += mse_complex(x_hat, x, pattern)
    except SolverError as exc:
        module_logger.warning(f"M={m} trial {t} failed: {exc}")
        return None
    elapsed = time.perf_counter() - start

    count = X_test.shape[1]
    return {metric: total / count for metric, total in totals.items()}, elapsed / count


def _score(X_test: np.ndarray, m: int, spec: SweepSpec, predict: _Predictor, value: float) -> ReportRow:
    results = parallel_map(lambda t: _trial(X_test, m, t, spec, predict), range(spec.trials), spec.workers)

    row = ReportRow(value=value)
    for result in results:
        if result is None:
            row.failed += 1
            continue
        metrics, seconds = result
        for metric in METRICS:
            row.trials[metric].append(metrics[metric])
        row.seconds.append(seconds)

    mean, half_width = confidence_interval(row.trials["mse_complex"])
    module_logger.info(f"{value:g}: MSE {mean:.4g} ± {half_width:.2g} over {row.succeeded} trials")
    return row


def _graph_predictor(learned: LearnedGraph, cfg: InterpolateConfig) -> _Predictor:
    def predict(pattern: SamplingPattern, x: np.ndarray) -> np.ndarray:
        y = apply_sampling(pattern, x) - learned.mean[list(pattern.observed)]
        return interpolate(y, pattern, learned.laplacian, cfg).x_star + learned.mean

    return predict


def _as_learned(graph: Union[LearnedGraph, HermitianLaplacian]) -> LearnedGraph:
    if isinstance(graph, HermitianLaplacian):
        return LearnedGraph(laplacian=graph, mean=np.zeros(graph.n, dtype=np.complex128))
    return graph


def _check_graph(ds: Dataset, learned: LearnedGraph) -> None:
    if learned.n != ds.n:
        raise ValidationError(f"Graph has {learned.n} nodes, dataset {ds.n}")
    if learned.train_hash is not None and learned.train_hash != ds.train_hash():
        raise ValidationError("Graph was learned from a different training split than the dataset's")


def run_sweep(ds: Dataset, L: Union[LearnedGraph, HermitianLaplacian], spec: SweepSpec) -> ExperimentReport:
    """
    Interpolation MSE on the test split for every sample count in spec.

    L must have been learned from the training split only. Trials whose
    solver fails are excluded and counted per row.
    """
    learned = _as_learned(L)
    _check_graph(ds, learned)
    spec.check_nodes(ds.n)

    X_test = _test_vectors(ds, spec)
    predict = _graph_predictor(learned, spec.interpolate_config())

    rows = [_score(X_test, m, spec, predict, m) for m in spec.sample_counts]
    return ExperimentReport("sample_count", "M", rows, spec.decompose, spec.record_timing)


def _learn_component(X_train: np.ndarray, spec: SweepSpec, clime_cfg: ClimeConfig, normalizer: Normalizer):
    if not np.any(X_train):
        return None
    return learn_laplacian(X_train, replace(clime_cfg, rho=spec.rho), normalizer)


def run_split_ablation(
    ds: Dataset,
    spec: SweepSpec,
    clime_cfg: ClimeConfig = ClimeConfig(),
    normalizer: Normalizer = Normalizer.BY_NODES,
) -> ExperimentReport:
    """
    Learn one real-valued graph from Re(X) and another from Im(X) and
    interpolate the two parts independently. An identically zero part is
    predicted as zero.
    """
    spec.check_nodes(ds.n)
    X_test = _test_vectors(ds, spec)
    cfg = spec.interpolate_config()

    real_graph = _learn_component(ds.train_X.real.astype(np.complex128), spec, clime_cfg, normalizer)
    imag_graph = _learn_component(ds.train_X.imag.astype(np.complex128), spec, clime_cfg, normalizer)

    def predict_part(graph: Optional[LearnedGraph], pattern: SamplingPattern, part: np.ndarray) -> np.ndarray:
        if graph is None:
            return np.zeros(pattern.n)
        return _graph_predictor(graph, cfg)(pattern, part).real

    def predict(pattern: SamplingPattern, x: np.ndarray) -> np.ndarray:
        return predict_part(real_graph, pattern, x.real) + 1j * predict_part(imag_graph, pattern, x.imag)

    rows = [_score(X_test, m, spec, predict, m) for m in spec.sample_counts]
    return ExperimentReport("ablation", "M", rows, spec.decompose, spec.record_timing)


def _fixed_count(ds: Dataset, spec: SweepSpec, m: Optional[int]) -> int:
    m = spec.sample_counts[0] if m is None else m
    replace(spec, sample_counts=(m,)).check_nodes(ds.n)
    return m


def run_covariance_sweep(
    ds: Dataset,
    spec: SweepSpec,
    sizes: Sequence[int],
    m: Optional[int] = None,
    clime_cfg: ClimeConfig = ClimeConfig(),
    normalizer: Normalizer = Normalizer.BY_NODES,
) -> ExperimentReport:
    """
    Relearn the graph from the first K training observations for every K in
    `sizes` and report the MSE at a fixed sample count m.
    """
    m = _fixed_count(ds, spec, m)
    X_test = _test_vectors(ds, spec)
    cfg = spec.interpolate_config()

    rows = []
    for size in sizes:
        learned = learn_laplacian(ds.head(size).train_X, replace(clime_cfg, rho=spec.rho), normalizer)
        rows.append(_score(X_test, m, spec, _graph_predictor(learned, cfg), size))
    return ExperimentReport("covariance_size", "K", rows, spec.decompose, spec.record_timing)


def run_rho_sweep(
    ds: Dataset,
    spec: SweepSpec,
    rhos: Sequence[float],
    m: Optional[int] = None,
    clime_cfg: ClimeConfig = ClimeConfig(),
    normalizer: Normalizer = Normalizer.BY_NODES,
) -> ExperimentReport:
    """
    Relearn the graph for every rho. Rows carry the Laplacian edge count,
    the estimate's non-zero count and the number of degraded columns.
    """
    m = _fixed_count(ds, spec, m)
    X_test = _test_vectors(ds, spec)
    cfg = spec.interpolate_config()

    rows = []
    for rho in rhos:
        learned = learn_laplacian(ds.train_X, replace(clime_cfg, rho=rho), normalizer)
        row = _score(X_test, m, spec, _graph_predictor(learned, cfg), rho)
        row.extras = {
            "edges": learned.laplacian.edge_count,
            "nonzeros": learned.estimate.nonzero_count(),
            "degraded_columns": len(learned.degraded_columns),
        }
        rows.append(row)
    return ExperimentReport("rho", "rho", rows, spec.decompose, spec.record_timing)


def run_mu_sweep(
    ds: Dataset,
    L: Union[LearnedGraph, HermitianLaplacian],
    spec: SweepSpec,
    mus: Sequence[float],
    m: Optional[int] = None,
) -> ExperimentReport:
    """
    MSE at a fixed sample count for every mu, on one learned graph.
    """
    learned = _as_learned(L)
    _check_graph(ds, learned)
    m = _fixed_count(ds, spec, m)
    X_test = _test_vectors(ds, spec)

    rows = []
    for mu in mus:
        cfg = replace(spec.interpolate_config(), mu=mu)
        rows.append(_score(X_test, m, spec, _graph_predictor(learned, cfg), mu))
    return ExperimentReport("mu", "mu", rows, spec.decompose, spec.record_timing)
