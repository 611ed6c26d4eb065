"""
Copyright (C) 2026 hermit contributors.

This module chains the library into the two halves of the method:

    learn_laplacian:     center -> covariance -> per-column CLIME LPs ->
                         symmetrize -> Hermitian Laplacian -> PD repair
    interpolate_states:  PD repair -> subtract the training mean from the
                         observations -> CG solve -> add the mean back

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

from dataclasses import dataclass, replace
import json
import logging
from typing import *

import numpy as np

from hermit.clime import ClimeConfig, PrecisionEstimate, estimate_precision, symmetrize
from hermit.complex_core import CovarianceMatrix, Normalizer, as_complex_matrix, empirical_covariance
from hermit.interpolate import InterpolateConfig, InterpolationResult, SamplingPattern, interpolate_many
from hermit.laplacian import HermitianLaplacian, SpectralSummary, ensure_pd, from_precision, spectral_summary
from hermit.utils.errors import DataFormatError, DegradedEstimateError, ValidationError

module_logger = logging.getLogger("hermit.pipeline")


@dataclass(frozen=True, eq=False)
class LearnedGraph:
    """
    A learned Laplacian with the training mean it was centered on.

    estimate, covariance and summary are only present for freshly learned
    graphs, not for ones loaded from disk.
    """

    laplacian: HermitianLaplacian
    mean: np.ndarray
    estimate: Optional[PrecisionEstimate] = None
    covariance: Optional[CovarianceMatrix] = None
    summary: Optional[SpectralSummary] = None
    train_hash: Optional[str] = None
    config: Optional[dict] = None

    @property
    def n(self) -> int:
        return self.laplacian.n

    @property
    def degraded_columns(self) -> List[int]:
        return [] if self.estimate is None else self.estimate.degraded_columns

    def to_json(self, config: Optional[dict] = None) -> dict:
        document = self.laplacian.to_json()
        document["mean"] = [[float(v.real), float(v.imag)] for v in self.mean]
        if self.estimate is not None:
            document["rho"] = self.estimate.rho_used
            document["statuses"] = [status.value for status in self.estimate.statuses]
            document["degraded_columns"] = self.degraded_columns
            if self.estimate.fallbacks:
                document["column_fallbacks"] = {str(i): choice for i, choice in self.estimate.fallbacks.items()}
        if self.summary is not None:
            document["lambda_min_estimate"] = self.summary.lambda_min_estimate
            document["lambda_max_estimate"] = self.summary.lambda_max_estimate
        if self.train_hash is not None:
            document["train_hash"] = self.train_hash
        if config is not None:
            document["config"] = config
        return document

    def save(self, path: str, config: Optional[dict] = None) -> None:
        with open(path, "w") as stream:
            json.dump(self.to_json(config), stream, indent=4)

    @classmethod
    def load(cls, path: str) -> "LearnedGraph":
        with open(path, "r") as stream:
            try:
                document = json.load(stream)
            except json.JSONDecodeError as exc:
                raise DataFormatError(str(exc), path, exc.lineno)

        laplacian = HermitianLaplacian.from_json(document, path)
        try:
            pairs = document.get("mean") or [[0.0, 0.0]] * laplacian.n
            mean = np.array([complex(float(re), float(im)) for re, im in pairs])
        except (TypeError, ValueError) as exc:
            raise DataFormatError(f"Invalid mean: {exc}", path)
        if mean.shape != (laplacian.n,):
            raise DataFormatError(f"Mean has {mean.shape[0]} entries, expected {laplacian.n}", path)

        return cls(
            laplacian=laplacian,
            mean=mean,
            train_hash=document.get("train_hash"),
            config=document.get("config"),
        )


def learn_laplacian(
    X_train,
    clime_cfg: ClimeConfig = ClimeConfig(),
    normalizer: Normalizer = Normalizer.BY_NODES,
    pd_floor: Optional[float] = None,
    center: bool = True,
    dump_dir: Optional[str] = None,
    allow_degraded: bool = True,
) -> LearnedGraph:
    """
    Learn a positive definite Hermitian Laplacian from training observations
    (one per column).

    Raises:     DegradedEstimateError when a column LP is not optimal and
                allow_degraded is False.
    """
    X_train = as_complex_matrix(X_train, "X_train")
    n, k = X_train.shape

    mean = X_train.mean(axis=1) if center else np.zeros(n, dtype=np.complex128)
    C = empirical_covariance(X_train - mean[:, None], normalizer)
    if C.is_real:
        module_logger.warning("Covariance is real; the estimate reduces to real-valued CLIME")

    module_logger.info(f"Learning a {n}-node graph from {k} observations (rho={clime_cfg.rho})")
    estimate = symmetrize(estimate_precision(C, clime_cfg, dump_dir))
    if estimate.degraded and not allow_degraded:
        raise DegradedEstimateError(
            f"Columns {estimate.degraded_columns} did not reach an optimal solution at rho={clime_cfg.rho}"
        )

    laplacian = from_precision(estimate)
    summary = spectral_summary(laplacian)
    module_logger.info(
        f"Laplacian has {laplacian.edge_count} edges, lambda in "
        f"[{summary.lambda_min_estimate:.4g}, {summary.lambda_max_estimate:.4g}]"
    )
    laplacian = ensure_pd(laplacian, pd_floor, summary)

    return LearnedGraph(laplacian=laplacian, mean=mean, estimate=estimate, covariance=C, summary=summary)


def interpolate_states(
    Y,
    pattern: SamplingPattern,
    learned: LearnedGraph,
    cfg: InterpolateConfig = InterpolateConfig(),
    workers: int = 1,
) -> List[InterpolationResult]:
    """
    Interpolate every column of the M x T matrix of observed values Y.

    The returned x_star include the training mean; objective values refer to
    the centered problem. The Laplacian is repaired with ensure_pd() and
    cfg.pd_floor first, which leaves a positive definite one unchanged.
    """
    if pattern.n != learned.n:
        raise ValidationError(f"Sampling pattern covers {pattern.n} nodes, the graph has {learned.n}")

    Y = as_complex_matrix(Y, "Y")
    laplacian = ensure_pd(learned.laplacian, cfg.pd_floor)
    observed_mean = learned.mean[list(pattern.observed)]
    results = interpolate_many(Y - observed_mean[:, None], pattern, laplacian, cfg, workers)
    return [replace(result, x_star=result.x_star + learned.mean) for result in results]
