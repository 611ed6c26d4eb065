"""
Copyright (C) 2026 hermit contributors.

This module provides the core Hermit class, used by the CLI interface defined in __main__.py

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

import json
import logging
import os
from typing import *

import numpy as np

import hermit.data
import hermit.evaluate
from hermit.data import Dataset
from hermit.evaluate import ExperimentReport
from hermit.interpolate import SamplingPattern, apply_sampling
from hermit.pipeline import LearnedGraph, interpolate_states, learn_laplacian
from hermit.utils.config import RunConfig
from hermit.utils.errors import DegradedEstimateError, SolverError, ValidationError


class Hermit:
    config: RunConfig
    log_level: str

    def __init__(self, config: RunConfig = None, log_dir: str = "", log_level: str = "") -> None:
        """
        Hermit class.

        Args:
            config:     validated run configuration.
            log_dir:    directory for hermit.log. No file log when empty.
            log_level:  log level ("DEBUG", "INFO", "WARNING", "ERROR").
                        Defaults to the configuration's log_level.
        """
        self.config = RunConfig() if config is None else config
        self.config.validate()

        self.log_file = os.path.join(log_dir, "hermit.log") if log_dir != "" else ""
        self.log_level = (log_level or self.config.log_level).upper()
        self._init_logging(self.log_level)

    def _init_logging(self, level="INFO"):
        """
        Initializes the logging parameters

        Returns:    nothing
        """
        levels = {
            "DEBUG": logging.DEBUG,
            "INFO": logging.INFO,
            "WARN": logging.WARNING,
            "WARNING": logging.WARNING,
            "ERROR": logging.ERROR,
        }
        if level not in levels:
            raise ValidationError(f"Unknown log level '{level}'")

        self.logger = logging.getLogger("hermit")
        self.logger.setLevel(levels[level])

        if self.log_file == "":
            return

        formatter = logging.Formatter(
            fmt="%(asctime)s - %(levelname)s:  %(message)s",
            datefmt="%m/%d/%Y %I:%M:%S %p",
        )

        if not os.path.exists(os.path.split(self.log_file)[0]):
            os.makedirs(os.path.split(self.log_file)[0])

        for handler in list(self.logger.handlers):
            if isinstance(handler, logging.FileHandler) and handler.baseFilename == os.path.abspath(self.log_file):
                self.logger.removeHandler(handler)
                handler.close()

        self.filehandler = logging.FileHandler(filename=self.log_file)
        self.filehandler.setLevel(levels[level])
        self.filehandler.setFormatter(formatter)

        self.logger.addHandler(self.filehandler)

    #
    # Input / output helpers
    #
    def _load_dataset(self, path: str) -> Dataset:
        if not os.path.isfile(path):
            raise ValidationError(f"Data file not found: {path}")
        return hermit.data.load_csv(path)

    def _load_graph(self, path: str) -> LearnedGraph:
        if not os.path.isfile(path):
            raise ValidationError(f"Laplacian file not found: {path}")
        return LearnedGraph.load(path)

    def _split(self, ds: Dataset, learn: dict = None) -> Dataset:
        """
        Apply the learn section's train/test split. When `learn` (the learn
        section echoed in a Laplacian file) is given, its split is used.
        """
        train_count = self.config.learn.train_count
        split_seed = self.config.learn.split_seed
        if learn:
            train_count = learn.get("train_count", train_count)
            split_seed = learn.get("split_seed", split_seed)

        if train_count is None:
            return ds
        return hermit.data.split(ds, train_count, split_seed)

    def _write_json(self, path: str, document: dict) -> None:
        with open(path, "w") as stream:
            json.dump(document, stream, indent=4)

    def _write_report(self, output_dir: str, name: str, report: ExperimentReport) -> None:
        report.config = self.config.resolved()
        self._write_json(os.path.join(output_dir, f"{name}.json"), report.to_json())
        with open(os.path.join(output_dir, f"{name}.txt"), "w") as stream:
            stream.write(report.to_text())
        if self.config.eval.raw_csv:
            with open(os.path.join(output_dir, f"{name}_trials.csv"), "w", newline="") as stream:
                report.write_raw_csv(stream)
        self.logger.info(f"Wrote {name} report to {output_dir}")

    #
    # Subcommands
    #
    def gen(self, output_dir: str) -> bool:
        """
        Generate a ground-truth Hermitian Laplacian and sample a dataset from
        its Gaussian Markov random field.

        Writes data.csv, model.json and edges.txt to output_dir.
        """
        gen = self.config.gen
        if gen.nodes is None or gen.samples is None:
            raise ValidationError("gen requires both --nodes and --samples")

        model = hermit.data.random_hermitian_laplacian(
            gen.nodes, gen.edge_density, gen.phase_spread, self.config.seed
        )
        ds = hermit.data.sample_gmrf(model, gen.samples, self.config.seed + 1)

        try:
            os.makedirs(output_dir, exist_ok=True)
            hermit.data.save_csv(ds, os.path.join(output_dir, "data.csv"))

            document = model.to_json()
            document["config"] = self.config.resolved()
            self._write_json(os.path.join(output_dir, "model.json"), document)

            with open(os.path.join(output_dir, "edges.txt"), "w") as stream:
                model.laplacian.write_edge_list(stream)
        except OSError as exc:
            self.logger.error(f"Failed to write the dataset to {output_dir}: {exc}")
            return False

        self.logger.info(
            f"Generated {gen.samples} observations of a {gen.nodes}-node graph "
            f"with {model.laplacian.edge_count} edges in {output_dir}"
        )
        return True

    def learn(self, data: str, output: str, dump_lp: str = "") -> bool:
        """
        Learn a Hermitian Laplacian from the training split of a dataset.
        Nothing is written unless every column LP is optimal or
        allow_degraded is set.
        """
        ds = self._split(self._load_dataset(data))

        try:
            learned = learn_laplacian(
                ds.train_X,
                self.config.clime_config(),
                self.config.normalizer(),
                self.config.learn.pd_floor,
                dump_dir=dump_lp or None,
                allow_degraded=self.config.learn.allow_degraded,
            )
        except DegradedEstimateError as exc:
            self.logger.error(f"{exc}; rerun with a larger rho or pass --allow-degraded")
            return False
        except SolverError as exc:
            self.logger.error(f"Learning failed: {exc}")
            return False

        if learned.degraded_columns:
            self.logger.warning(f"Writing a degraded estimate, columns {learned.degraded_columns}")

        learned = LearnedGraph(
            laplacian=learned.laplacian,
            mean=learned.mean,
            estimate=learned.estimate,
            summary=learned.summary,
            train_hash=ds.train_hash(),
        )
        try:
            learned.save(output, config=self.config.resolved())
        except OSError as exc:
            self.logger.error(f"Failed to write {output}: {exc}")
            return False

        self.logger.info(f"Wrote {learned.laplacian} to {output}")
        return True

    def interpolate(self, laplacian: str, observations: str, observed: Sequence[int], output: str) -> bool:
        """
        Interpolate every observation of a CSV file. Rows hold either the
        observed values (in index order) or full states.
        """
        learned = self._load_graph(laplacian)
        pattern = SamplingPattern.from_indices(learned.n, observed)
        ds = self._load_dataset(observations)

        if ds.n == pattern.m:
            Y = ds.X
        elif ds.n == pattern.n:
            Y = np.stack([apply_sampling(pattern, x) for x in ds.X.T], axis=1)
        else:
            raise ValidationError(
                f"Observation rows have {ds.n} values, expected {pattern.m} (observed) or {pattern.n} (full)"
            )

        try:
            results = interpolate_states(Y, pattern, learned, self.config.interpolate_config(), self.config.workers)
        except SolverError as exc:
            self.logger.error(f"Interpolation failed: {exc}")
            return False

        document = {
            "n": pattern.n,
            "observed": list(pattern.observed),
            "states": [[[float(v.real), float(v.imag)] for v in result.x_star] for result in results],
            "diagnostics": [
                {
                    "cg_iterations": result.cg_iterations,
                    "final_relative_residual": result.final_relative_residual,
                    "objective_value": result.objective_value,
                    "converged": result.converged,
                }
                for result in results
            ],
            "config": self.config.resolved(),
        }
        try:
            self._write_json(output, document)
        except OSError as exc:
            self.logger.error(f"Failed to write {output}: {exc}")
            return False

        failed = [t for t, result in enumerate(results) if not result.converged]
        if failed:
            self.logger.error(f"CG did not converge for observations {failed}")
            return False

        self.logger.info(f"Interpolated {len(results)} states into {output}")
        return True

    def _evaluation_inputs(self, data: str, laplacian: str) -> Tuple[Dataset, LearnedGraph]:
        learned = self._load_graph(laplacian)
        learn_section = (learned.config or {}).get("learn")
        ds = self._split(self._load_dataset(data), learn_section)
        if ds.test.size == 0:
            raise ValidationError("No test observations; learn with --train-count to hold some out")
        return ds, learned

    def evaluate(self, data: str, laplacian: str, output_dir: str) -> bool:
        """
        Score interpolation on the test split and write report files.
        """
        ds, learned = self._evaluation_inputs(data, laplacian)
        spec = self.config.sweep_spec()
        os.makedirs(output_dir, exist_ok=True)

        try:
            self._write_report(output_dir, "report", hermit.evaluate.run_sweep(ds, learned, spec))

            if self.config.eval.ablation:
                report = hermit.evaluate.run_split_ablation(
                    ds, spec, self.config.clime_config(), self.config.normalizer()
                )
                self._write_report(output_dir, "ablation", report)

            if self.config.eval.covariance_sizes:
                report = hermit.evaluate.run_covariance_sweep(
                    ds,
                    spec,
                    self.config.eval.covariance_sizes,
                    self.config.sweep.sample_count,
                    self.config.clime_config(),
                    self.config.normalizer(),
                )
                self._write_report(output_dir, "covariance", report)
        except (SolverError, OSError) as exc:
            self.logger.error(f"Evaluation failed: {exc}")
            return False

        return True

    def sweep_rho(self, data: str, output_dir: str) -> bool:
        """
        Relearn the graph for every rho in the sweep section and report MSE,
        edge counts and degraded columns.
        """
        ds = self._split(self._load_dataset(data))
        if ds.test.size == 0:
            raise ValidationError("No test observations; use --train-count to hold some out")
        os.makedirs(output_dir, exist_ok=True)

        try:
            report = hermit.evaluate.run_rho_sweep(
                ds,
                self.config.sweep_spec(),
                self.config.sweep.rhos,
                self.config.sweep.sample_count,
                self.config.clime_config(),
                self.config.normalizer(),
            )
            self._write_report(output_dir, "rho_sweep", report)
        except (SolverError, OSError) as exc:
            self.logger.error(f"rho sweep failed: {exc}")
            return False
        return True

    def sweep_mu(self, data: str, laplacian: str, output_dir: str) -> bool:
        """
        Report MSE for every mu in the sweep section on one learned graph.
        """
        ds, learned = self._evaluation_inputs(data, laplacian)
        os.makedirs(output_dir, exist_ok=True)

        try:
            report = hermit.evaluate.run_mu_sweep(
                ds, learned, self.config.sweep_spec(), self.config.sweep.mus, self.config.sweep.sample_count
            )
            self._write_report(output_dir, "mu_sweep", report)
        except (SolverError, OSError) as exc:
            self.logger.error(f"mu sweep failed: {exc}")
            return False
        return True
