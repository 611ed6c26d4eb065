"""
Copyright (C) 2026 hermit contributors.

This module provides the datasets hermit learns from: synthetic draws from a
Hermitian Gaussian Markov random field with a known Laplacian, CSV ingestion
of externally produced phasor data, and train/test splitting.

Complex Gaussian convention: circularly symmetric with E[z z^H] = I, so the
total variance of each entry (real plus imaginary part) is 1.

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
from dataclasses import dataclass, replace
import hashlib
import json
import logging
from typing import *

import numpy as np
import scipy.linalg
import scipy.sparse as sps

from hermit.complex_core import as_complex_matrix
from hermit.laplacian import HermitianLaplacian
from hermit.utils.errors import DataFormatError, NotPositiveDefiniteError, ValidationError

module_logger = logging.getLogger("hermit.data")

# Smallest eigenvalue of generated ground-truth Laplacians.
GROUND_TRUTH_LAMBDA_MIN = 0.1


@dataclass(frozen=True, eq=False)
class GroundTruthModel:
    laplacian: HermitianLaplacian
    seed: int
    edge_density: float = float("nan")
    phase_spread: float = float("nan")

    def __post_init__(self):
        lam_min = scipy.linalg.eigvalsh(self.laplacian.to_dense())[0]
        if not lam_min > 0:
            raise ValidationError(f"Ground-truth Laplacian is not positive definite (lambda_min={lam_min:.3e})")

    @property
    def n(self) -> int:
        return self.laplacian.n

    def to_json(self) -> dict:
        document = self.laplacian.to_json()
        document.update(
            {"seed": self.seed, "edge_density": self.edge_density, "phase_spread": self.phase_spread}
        )
        return document

    def save(self, path: str) -> None:
        with open(path, "w") as stream:
            json.dump(self.to_json(), stream, indent=4)

    @classmethod
    def load(cls, path: str) -> "GroundTruthModel":
        with open(path, "r") as stream:
            try:
                document = json.load(stream)
            except json.JSONDecodeError as exc:
                raise DataFormatError(str(exc), path, exc.lineno)
        laplacian = HermitianLaplacian.from_json(document, path)
        try:
            return cls(
                laplacian=laplacian,
                seed=int(document["seed"]),
                edge_density=float(document.get("edge_density", "nan")),
                phase_spread=float(document.get("phase_spread", "nan")),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise DataFormatError(f"Invalid ground-truth model: {exc}", path)


def random_hermitian_laplacian(
    n: int, edge_density: float = 0.3, phase_spread: float = np.pi / 4, seed: int = 0
) -> GroundTruthModel:
    """
    Random Hermitian graph Laplacian L = D - W.

    Each pair i < j is an edge with probability edge_density, weighted
    w_ij = m exp(j theta) with m ~ U(0.5, 1.5) and theta ~ U(-phase_spread,
    phase_spread); w_ji = conj(w_ij) and D_ii = sum_j |w_ij|. The diagonal is
    then loaded so that lambda_min(L) = 0.1.
    """
    if n < 2:
        raise ValidationError(f"A ground-truth graph needs at least 2 nodes, got {n}")
    if not 0 < edge_density <= 1:
        raise ValidationError(f"edge_density must be in (0, 1], got {edge_density}")
    if not (np.isfinite(phase_spread) and phase_spread >= 0):
        raise ValidationError(f"phase_spread must be non-negative, got {phase_spread}")

    rng = np.random.default_rng(seed)
    rows, cols = np.triu_indices(n, k=1)
    present = rng.random(rows.shape[0]) < edge_density
    amplitude = rng.uniform(0.5, 1.5, size=rows.shape[0])
    phase = rng.uniform(-phase_spread, phase_spread, size=rows.shape[0])

    rows, cols = rows[present], cols[present]
    w = amplitude[present] * np.exp(1j * phase[present])

    W_upper = sps.csr_matrix((w, (rows, cols)), shape=(n, n), dtype=np.complex128)
    degree = np.asarray(abs(W_upper).sum(axis=1)).ravel() + np.asarray(abs(W_upper).sum(axis=0)).ravel()

    laplacian = HermitianLaplacian(degree, -W_upper)
    lam_min = scipy.linalg.eigvalsh(laplacian.to_dense())[0]
    laplacian = HermitianLaplacian(laplacian.diagonal + (GROUND_TRUTH_LAMBDA_MIN - lam_min), -W_upper)

    module_logger.debug(f"Generated {n}-node ground truth with {w.shape[0]} edges (seed {seed})")
    return GroundTruthModel(laplacian=laplacian, seed=seed, edge_density=edge_density, phase_spread=phase_spread)


@dataclass(frozen=True)
class SyntheticSource:
    seed: int

    def __str__(self) -> str:
        return f"synthetic(seed={self.seed})"


@dataclass(frozen=True)
class CsvSource:
    path: str

    def __str__(self) -> str:
        return f"csv({self.path})"


@dataclass(frozen=True, eq=False)
class Dataset:
    """
    N x K observation matrix with one observation per column and a disjoint
    train/test split covering every column.
    """

    X: np.ndarray
    train: np.ndarray = None
    test: np.ndarray = None
    source: Union[SyntheticSource, CsvSource, None] = None
    centered: bool = False

    def __post_init__(self):
        X = as_complex_matrix(self.X)
        object.__setattr__(self, "X", X)
        k = X.shape[1]

        train = np.arange(k) if self.train is None else np.asarray(self.train, dtype=int)
        test = np.array([], dtype=int) if self.test is None else np.asarray(self.test, dtype=int)
        object.__setattr__(self, "train", train)
        object.__setattr__(self, "test", test)

        both = np.concatenate([train, test])
        if np.any(both < 0) or np.any(both >= k):
            raise ValidationError(f"Split indices must lie in [0, {k})")
        if np.unique(both).shape[0] != both.shape[0]:
            raise ValidationError("Train and test splits overlap")
        if both.shape[0] != k:
            raise ValidationError("Train and test splits do not cover every observation")

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def k(self) -> int:
        return self.X.shape[1]

    @property
    def train_X(self) -> np.ndarray:
        return self.X[:, self.train]

    @property
    def test_X(self) -> np.ndarray:
        return self.X[:, self.test]

    def train_hash(self) -> str:
        """
        SHA-256 of the sorted training column indices.
        """
        indices = ",".join(str(i) for i in np.sort(self.train))
        return hashlib.sha256(indices.encode("ascii")).hexdigest()

    def head(self, count: int) -> "Dataset":
        """
        Dataset restricted to the first `count` training columns plus the
        unchanged test split.
        """
        if not 0 < count <= self.train.shape[0]:
            raise ValidationError(f"Cannot take {count} of {self.train.shape[0]} training observations")
        keep = np.concatenate([self.train[:count], self.test])
        X = self.X[:, keep]
        return replace(self, X=X, train=np.arange(count), test=np.arange(count, keep.shape[0]))


def sample_gmrf(model: GroundTruthModel, k: int, seed: int = 0) -> Dataset:
    """
    Draw k observations x = U^-1 z with L = U^H U and z standard circular
    complex normal, so that E[x x^H] = L^-1.
    """
    if k < 1:
        raise ValidationError(f"Sample count must be positive, got {k}")

    try:
        U = scipy.linalg.cholesky(model.laplacian.to_dense(), lower=False)
    except scipy.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError(f"Cholesky factorization of the ground truth failed: {exc}")

    rng = np.random.default_rng(seed)
    Z = (rng.standard_normal((model.n, k)) + 1j * rng.standard_normal((model.n, k))) / np.sqrt(2)
    X = scipy.linalg.solve_triangular(U, Z, lower=False)

    return Dataset(X=X, source=SyntheticSource(seed))


def save_csv(ds: Dataset, path: str) -> None:
    """
    One observation per row: re_1,im_1,...,re_N,im_N at 17 significant
    digits, after a `# n=N` header.
    """
    with open(path, "w", newline="") as stream:
        stream.write(f"# n={ds.n}\n")
        writer = csv.writer(stream, lineterminator="\n")
        for column in ds.X.T:
            fields = []
            for value in column:
                fields.append(format(value.real, ".17g"))
                fields.append(format(value.imag, ".17g"))
            writer.writerow(fields)


def load_csv(path: str) -> Dataset:
    """
    Read a dataset written by save_csv() or any external tool using the same
    layout. The `# n=N` header is optional.
    """
    n = None
    rows = []
    with open(path, "r", newline="") as stream:
        for line_number, fields in enumerate(csv.reader(stream), start=1):
            if not fields or all(not f.strip() for f in fields):
                continue
            if fields[0].lstrip().startswith("#"):
                header = ",".join(fields).lstrip("# ").strip()
                if header.startswith("n="):
                    try:
                        n = int(header[2:])
                    except ValueError:
                        raise DataFormatError(f"Invalid header '{header}'", path, line_number)
                    if n < 1:
                        raise DataFormatError(f"Invalid node count {n}", path, line_number)
                continue

            if len(fields) % 2:
                raise DataFormatError(f"Odd number of fields ({len(fields)})", path, line_number)
            if n is None:
                n = len(fields) // 2
            if len(fields) != 2 * n:
                raise DataFormatError(f"Expected {2 * n} fields, got {len(fields)}", path, line_number)

            try:
                values = np.array([float(f) for f in fields])
            except ValueError as exc:
                raise DataFormatError(f"Non-numeric field: {exc}", path, line_number)
            if not np.all(np.isfinite(values)):
                raise DataFormatError("NaN or Inf field", path, line_number)

            rows.append(values[0::2] + 1j * values[1::2])

    if not rows:
        raise DataFormatError("File contains no observations", path)

    return Dataset(X=np.array(rows).T, source=CsvSource(path))


def split(ds: Dataset, train_count: int, seed: int = 0) -> Dataset:
    """
    Uniformly random train/test split with train_count training columns.
    """
    if not 0 < train_count < ds.k:
        raise ValidationError(f"train_count must be in [1, {ds.k}), got {train_count}")

    order = np.random.default_rng(seed).permutation(ds.k)
    return replace(ds, train=np.sort(order[:train_count]), test=np.sort(order[train_count:]))
