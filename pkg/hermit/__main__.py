#!/usr/bin/env python

r"""
  _                         _ _
 | |__   ___ _ __ _ __ ___ (_) |_
 | '_ \ / _ \ '__| '_ ` _ \| | __|
 | | | |  __/ |  | | | | | | | |_
 |_| |_|\___|_|  |_| |_| |_|_|\__|
"""

_description = """
Learn sparse Hermitian graph Laplacians from complex signals,
and use them to interpolate unobserved grid states.
"""
_copyright = """
Copyright (C) 2026 hermit contributors.
"""

"""
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

import logging
import os
import sys
from typing import *

import click
import coloredlogs

import hermit
from hermit.hermit import Hermit
from hermit.utils.click import COMMA_FLOATS, COMMA_INTS, HermitModifier
from hermit.utils.config import LOG_LEVELS, RunConfig
from hermit.utils.errors import ValidationError

_env_level = os.environ.get("HERMIT_LOG_LEVEL", "INFO").upper()
LOG_LEVEL = _env_level if _env_level in LOG_LEVELS else "INFO"

logging.basicConfig()
module_logger = logging.getLogger("hermit")
coloredlogs.install(level=LOG_LEVEL, fmt="%(asctime)s %(name)s %(levelname)s %(message)s")
module_logger.setLevel(LOG_LEVEL)

from colorama import Fore, Back, Style


def common_options(func):
    """
    Options shared by every subcommand.
    """
    options = [
        click.option("--config", "-c", "config_file", default=None, help="YAML configuration file. [optional]"),
        click.option("--threads", "-t", type=int, default=None, help="Worker threads. [optional] Default: all cores"),
        click.option("--seed", "-s", type=int, default=None, help="Random seed. [optional] Default: 0"),
        click.option("--verbose", "-V", is_flag=True, default=False, help="Verbose output. [optional]"),
        click.option("--log-dir", "-l", default="", help="Write hermit.log to this directory. [optional]"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _flag(value: bool) -> Optional[bool]:
    """
    An unset flag must not override a value from the configuration file.
    """
    return True if value else None


def _run(
    config_file: Optional[str],
    threads: Optional[int],
    seed: Optional[int],
    verbose: bool,
    log_dir: str,
    overrides: Dict[str, dict],
    action: Callable[[Hermit], bool],
):
    """
    Build the configuration, run one subcommand and exit with 0 (success),
    1 (runtime or solver failure) or 2 (invalid input).
    """
    if verbose:
        coloredlogs.set_level(logging.DEBUG)

    try:
        config = RunConfig.load(config_file).override(threads=threads, seed=seed)
        for section, values in overrides.items():
            config.override(section, **values)

        level = "DEBUG" if verbose else (os.environ.get("HERMIT_LOG_LEVEL") and LOG_LEVEL)
        my_hermit = Hermit(config, log_dir=log_dir, log_level=level or "")
        success = action(my_hermit)
    except ValidationError as exc:
        module_logger.error(str(exc))
        sys.exit(2)
    except OSError as exc:
        module_logger.error(str(exc))
        sys.exit(1)

    if success == False:
        sys.exit(1)

    sys.exit(0)


#
# CLI Interface
#
@click.group(
    cls=HermitModifier,
    epilog=Fore.BLUE
    + __doc__
    + Fore.GREEN
    + _description
    + f"\nVersion {hermit.__version__}\n"
    + Style.RESET_ALL
    + _copyright,
)
def cli():
    pass


@cli.command("gen")
@click.option("--nodes", "-n", type=int, default=None, help="Number of nodes N. [required]")
@click.option("--samples", "-k", type=int, default=None, help="Number of observations K. [required]")
@click.option("--edge-density", type=float, default=None, help="Edge probability. [optional] Default: 0.3")
@click.option("--phase-spread", type=float, default=None, help="Edge phases are drawn from [-S, S]. [optional] Default: pi/4")
@click.option("--output-dir", "-o", required=True, help="Directory for data.csv, model.json and edges.txt.")
@common_options
def gen(nodes, samples, edge_density, phase_spread, output_dir, config_file, threads, seed, verbose, log_dir):
    """
    Generate a synthetic dataset from a random Hermitian graph.
    """
    _run(
        config_file,
        threads,
        seed,
        verbose,
        log_dir,
        {"gen": dict(nodes=nodes, samples=samples, edge_density=edge_density, phase_spread=phase_spread)},
        lambda h: h.gen(output_dir),
    )


@cli.command("learn")
@click.option("--data", "-d", required=True, help="Dataset CSV.")
@click.option("--output", "-o", required=True, help="Laplacian JSON to write.")
@click.option("--rho", type=float, default=None, help="CLIME slack. [optional] Default: 0.2")
@click.option("--normalizer", type=click.Choice(["nodes", "samples"]), default=None, help="Covariance divisor. [optional] Default: nodes")
@click.option("--train-count", type=int, default=None, help="Observations used for learning; the rest are held out. [optional] Default: all")
@click.option("--split-seed", type=int, default=None, help="Seed of the train/test split. [optional] Default: 0")
@click.option("--allow-degraded", is_flag=True, default=False, help="Write the Laplacian even if some column LPs are not optimal. [optional]")
@click.option("--dump-lp", default="", help="Write every column LP to this directory. [optional]")
@common_options
def learn(data, output, rho, normalizer, train_count, split_seed, allow_degraded, dump_lp, config_file, threads, seed, verbose, log_dir):
    """
    Learn a Hermitian graph Laplacian from a dataset.
    """
    _run(
        config_file,
        threads,
        seed,
        verbose,
        log_dir,
        {
            "learn": dict(
                rho=rho,
                normalizer=normalizer,
                train_count=train_count,
                split_seed=split_seed,
                allow_degraded=_flag(allow_degraded),
            )
        },
        lambda h: h.learn(data, output, dump_lp),
    )


@cli.command("interpolate")
@click.option("--laplacian", "-L", required=True, help="Laplacian JSON written by learn.")
@click.option("--observations", "-y", required=True, help="CSV of observed values or full states.")
@click.option("--observed", type=COMMA_INTS, required=True, help="Observed node indices, e.g. 0,3,5.")
@click.option("--output", "-o", required=True, help="State JSON to write.")
@click.option("--mu", type=float, default=None, help="Regularizer weight. [optional] Default: 0.1")
@click.option("--cg-tol", type=float, default=None, help="CG relative residual target. [optional] Default: 1e-8")
@click.option("--jacobi", is_flag=True, default=False, help="Jacobi-preconditioned CG. [optional]")
@common_options
def interpolate(laplacian, observations, observed, output, mu, cg_tol, jacobi, config_file, threads, seed, verbose, log_dir):
    """
    Interpolate full states from observed nodes.
    """
    _run(
        config_file,
        threads,
        seed,
        verbose,
        log_dir,
        {"interpolate": dict(mu=mu, cg_tol=cg_tol, jacobi=_flag(jacobi))},
        lambda h: h.interpolate(laplacian, observations, observed, output),
    )


@cli.command("eval")
@click.option("--data", "-d", required=True, help="Dataset CSV the Laplacian was learned from.")
@click.option("--laplacian", "-L", required=True, help="Laplacian JSON written by learn.")
@click.option("--output-dir", "-o", required=True, help="Directory for the report files.")
@click.option("--sample-counts", type=COMMA_INTS, default=None, help="Observed node counts, e.g. 8,12,16. [optional]")
@click.option("--trials", type=int, default=None, help="Trials per sample count. [optional] Default: 20")
@click.option("--mu", type=float, default=None, help="Regularizer weight. [optional] Default: 0.1")
@click.option("--max-test-vectors", type=int, default=None, help="Score at most this many test observations. [optional]")
@click.option("--ablation", is_flag=True, default=False, help="Also run the separate real/imaginary graph ablation. [optional]")
@click.option("--covariance-sizes", type=COMMA_INTS, default=None, help="Also relearn from the first K training observations, e.g. 100,500. [optional]")
@click.option("--sample-count", type=int, default=None, help="Fixed sample count of the covariance sweep. [optional]")
@click.option("--raw-csv", is_flag=True, default=False, help="Also write per-trial MSE values. [optional]")
@click.option("--timing", is_flag=True, default=False, help="Record wall-clock time per interpolation. [optional]")
@common_options
def evaluate(
    data, laplacian, output_dir, sample_counts, trials, mu, max_test_vectors, ablation, covariance_sizes,
    sample_count, raw_csv, timing, config_file, threads, seed, verbose, log_dir,
):
    """
    Score interpolation on the held-out observations.
    """
    _run(
        config_file,
        threads,
        seed,
        verbose,
        log_dir,
        {
            "eval": dict(
                sample_counts=sample_counts,
                trials=trials,
                max_test_vectors=max_test_vectors,
                ablation=_flag(ablation),
                covariance_sizes=covariance_sizes,
                raw_csv=_flag(raw_csv),
                timing=_flag(timing),
            ),
            "interpolate": dict(mu=mu),
            "sweep": dict(sample_count=sample_count),
        },
        lambda h: h.evaluate(data, laplacian, output_dir),
    )


@cli.command("sweep-rho")
@click.option("--data", "-d", required=True, help="Dataset CSV.")
@click.option("--rhos", type=COMMA_FLOATS, default=None, help="Values of rho, e.g. 0.05,0.1,0.2. [optional]")
@click.option("--output-dir", "-o", required=True, help="Directory for the report files.")
@click.option("--train-count", type=int, default=None, help="Observations used for learning. [required unless configured]")
@click.option("--split-seed", type=int, default=None, help="Seed of the train/test split. [optional] Default: 0")
@click.option("--sample-count", type=int, default=None, help="Number of observed nodes. [optional]")
@click.option("--trials", type=int, default=None, help="Trials per rho. [optional] Default: 20")
@common_options
def sweep_rho(data, rhos, output_dir, train_count, split_seed, sample_count, trials, config_file, threads, seed, verbose, log_dir):
    """
    Relearn the graph for several values of rho.
    """
    _run(
        config_file,
        threads,
        seed,
        verbose,
        log_dir,
        {
            "learn": dict(train_count=train_count, split_seed=split_seed),
            "sweep": dict(rhos=rhos, sample_count=sample_count),
            "eval": dict(trials=trials),
        },
        lambda h: h.sweep_rho(data, output_dir),
    )


@cli.command("sweep-mu")
@click.option("--data", "-d", required=True, help="Dataset CSV the Laplacian was learned from.")
@click.option("--laplacian", "-L", required=True, help="Laplacian JSON written by learn.")
@click.option("--mus", type=COMMA_FLOATS, default=None, help="Values of mu, e.g. 0.01,0.1,1. [optional]")
@click.option("--output-dir", "-o", required=True, help="Directory for the report files.")
@click.option("--sample-count", type=int, default=None, help="Number of observed nodes. [optional]")
@click.option("--trials", type=int, default=None, help="Trials per mu. [optional] Default: 20")
@common_options
def sweep_mu(data, laplacian, mus, output_dir, sample_count, trials, config_file, threads, seed, verbose, log_dir):
    """
    Score interpolation for several values of mu.
    """
    _run(
        config_file,
        threads,
        seed,
        verbose,
        log_dir,
        {"sweep": dict(mus=mus, sample_count=sample_count), "eval": dict(trials=trials)},
        lambda h: h.sweep_mu(data, laplacian, output_dir),
    )


if __name__ == "__main__":
    sys.argv[0] = "hermit"
    sys.exit(cli())
