"""
Copyright (C) 2026 hermit contributors.

Run configuration: a YAML file with one section per subcommand, overridden
by command-line flags.

    seed: 7
    learn:
      rho: 0.15
      train_count: 5000
    interpolate:
      mu: 0.1
    eval:
      sample_counts: [8, 12, 16]
      trials: 20

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

from dataclasses import asdict, dataclass, field, fields
import math
from typing import *

import yaml

from hermit.clime import ClimeConfig
from hermit.complex_core import Normalizer
from hermit.evaluate import SweepSpec
from hermit.interpolate import InterpolateConfig
from hermit.lp import LpSettings
from hermit.utils.errors import ValidationError
from hermit.utils.parallel import available_workers

LOG_LEVELS = ("DEBUG", "INFO", "WARN", "WARNING", "ERROR")


@dataclass
class GenSection:
    nodes: Optional[int] = None
    samples: Optional[int] = None
    edge_density: float = 0.3
    phase_spread: float = math.pi / 4


@dataclass
class LearnSection:
    rho: float = 0.2
    normalizer: str = "nodes"
    train_count: Optional[int] = None
    split_seed: int = 0
    sparsity_epsilon: float = 1e-6
    pd_floor: Optional[float] = None
    allow_degraded: bool = False
    lp_method: str = "interior-point"
    lp_max_iters: int = 200
    lp_simplex_fallback: bool = True
    feas_tol: float = 1e-8
    opt_tol: float = 1e-8


@dataclass
class InterpolateSection:
    mu: float = 0.1
    cg_tol: float = 1e-8
    cg_max_iters: Optional[int] = None
    jacobi: bool = False


@dataclass
class EvalSection:
    sample_counts: List[int] = field(default_factory=lambda: [8, 12, 16])
    trials: int = 20
    max_test_vectors: Optional[int] = None
    decompose: bool = True
    ablation: bool = False
    covariance_sizes: List[int] = field(default_factory=list)
    raw_csv: bool = False
    timing: bool = False


@dataclass
class SweepSection:
    rhos: List[float] = field(default_factory=lambda: [0.05, 0.1, 0.2, 0.4])
    mus: List[float] = field(default_factory=lambda: [0.01, 0.1, 1.0])
    sample_count: Optional[int] = None


SECTIONS = {
    "gen": GenSection,
    "learn": LearnSection,
    "interpolate": InterpolateSection,
    "eval": EvalSection,
    "sweep": SweepSection,
}
TOP_LEVEL = ("threads", "seed", "log_level")


def _update_section(section, values: dict, name: str) -> None:
    known = {f.name for f in fields(section)}
    for key, value in values.items():
        if key not in known:
            raise ValidationError(f"Unknown configuration key '{name}.{key}'")
        setattr(section, key, value)


@dataclass
class RunConfig:
    gen: GenSection = field(default_factory=GenSection)
    learn: LearnSection = field(default_factory=LearnSection)
    interpolate: InterpolateSection = field(default_factory=InterpolateSection)
    eval: EvalSection = field(default_factory=EvalSection)
    sweep: SweepSection = field(default_factory=SweepSection)
    threads: Optional[int] = None
    seed: int = 0
    log_level: str = "INFO"

    @classmethod
    def from_dict(cls, document: Optional[dict]) -> "RunConfig":
        config = cls()
        if not document:
            return config
        if not isinstance(document, dict):
            raise ValidationError("Configuration must be a mapping")

        for key, value in document.items():
            if key in SECTIONS:
                if value is None:
                    continue
                if not isinstance(value, dict):
                    raise ValidationError(f"Configuration section '{key}' must be a mapping")
                _update_section(getattr(config, key), value, key)
            elif key in TOP_LEVEL:
                setattr(config, key, value)
            else:
                raise ValidationError(f"Unknown configuration section '{key}'")
        return config

    @classmethod
    def load(cls, path: Optional[str]) -> "RunConfig":
        """
        Read a YAML configuration file. No path gives the defaults.
        """
        if not path:
            return cls()
        try:
            with open(path, "r") as stream:
                document = yaml.load(stream, Loader=yaml.SafeLoader)
        except OSError as exc:
            raise ValidationError(f"Cannot read configuration file {path}: {exc}")
        except yaml.YAMLError as exc:
            raise ValidationError(f"Invalid YAML in {path}: {exc}")
        return cls.from_dict(document)

    def override(self, section: Optional[str] = None, **flags) -> "RunConfig":
        """
        Apply command-line flags. Flags that are None keep the current value.
        """
        values = {key: value for key, value in flags.items() if value is not None}
        if section is None:
            for key, value in values.items():
                if key not in TOP_LEVEL:
                    raise ValidationError(f"Unknown configuration key '{key}'")
                setattr(self, key, value)
        else:
            _update_section(getattr(self, section), values, section)
        return self

    @property
    def workers(self) -> int:
        return available_workers() if self.threads is None else self.threads

    def normalizer(self) -> Normalizer:
        try:
            return Normalizer(self.learn.normalizer)
        except ValueError:
            raise ValidationError(
                f"normalizer must be 'nodes' or 'samples', got '{self.learn.normalizer}'"
            )

    def lp_settings(self) -> LpSettings:
        return LpSettings(
            method=self.learn.lp_method,
            max_iters=self.learn.lp_max_iters,
            simplex_fallback=self.learn.lp_simplex_fallback,
            feas_tol=self.learn.feas_tol,
            opt_tol=self.learn.opt_tol,
        )

    def clime_config(self) -> ClimeConfig:
        return ClimeConfig(
            rho=self.learn.rho,
            sparsity_epsilon=self.learn.sparsity_epsilon,
            column_parallelism=self.workers,
            lp=self.lp_settings(),
        )

    def interpolate_config(self) -> InterpolateConfig:
        return InterpolateConfig(
            mu=self.interpolate.mu,
            cg_tol=self.interpolate.cg_tol,
            cg_max_iters=self.interpolate.cg_max_iters,
            pd_floor=self.learn.pd_floor,
            jacobi=self.interpolate.jacobi,
        )

    def sweep_spec(self) -> SweepSpec:
        return SweepSpec(
            sample_counts=tuple(self.eval.sample_counts),
            trials=self.eval.trials,
            seed=self.seed,
            mu=self.interpolate.mu,
            rho=self.learn.rho,
            decompose=self.eval.decompose,
            max_test_vectors=self.eval.max_test_vectors,
            cg_tol=self.interpolate.cg_tol,
            jacobi=self.interpolate.jacobi,
            workers=self.workers,
            record_timing=self.eval.timing,
        )

    def validate(self) -> "RunConfig":
        """
        Check every field against the module that consumes it.
        """
        try:
            return self._validate()
        except TypeError as exc:
            raise ValidationError(f"Configuration value has the wrong type: {exc}")

    def _validate(self) -> "RunConfig":
        if self.threads is not None and self.threads < 1:
            raise ValidationError(f"threads must be at least 1, got {self.threads}")
        if str(self.log_level).upper() not in LOG_LEVELS:
            raise ValidationError(f"log_level must be one of {', '.join(LOG_LEVELS)}")

        gen = self.gen
        if gen.nodes is not None and gen.nodes < 2:
            raise ValidationError(f"nodes must be at least 2, got {gen.nodes}")
        if gen.samples is not None and gen.samples < 1:
            raise ValidationError(f"samples must be positive, got {gen.samples}")
        if not 0 < gen.edge_density <= 1:
            raise ValidationError(f"edge_density must be in (0, 1], got {gen.edge_density}")
        if not (math.isfinite(gen.phase_spread) and gen.phase_spread >= 0):
            raise ValidationError(f"phase_spread must be non-negative, got {gen.phase_spread}")

        if self.learn.train_count is not None and self.learn.train_count < 1:
            raise ValidationError(f"train_count must be positive, got {self.learn.train_count}")
        self.normalizer()
        self.clime_config()
        self.interpolate_config()
        self.sweep_spec()

        if any(size < 1 for size in self.eval.covariance_sizes):
            raise ValidationError("covariance_sizes must be positive")
        for rho in self.sweep.rhos:
            ClimeConfig(rho=rho)
        for mu in self.sweep.mus:
            InterpolateConfig(mu=mu)
        if self.sweep.sample_count is not None and self.sweep.sample_count < 1:
            raise ValidationError("sweep sample_count must be positive")
        return self

    def resolved(self) -> dict:
        """
        Plain dict of every setting that influences results. threads and
        log_level are left out so artifacts do not depend on them.
        """
        document = {name: asdict(getattr(self, name)) for name in SECTIONS}
        document["seed"] = self.seed
        return document
