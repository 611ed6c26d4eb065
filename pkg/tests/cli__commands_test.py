"""
Copyright (C) 2026 hermit contributors.

Tests for the hermit command-line interface

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
import os
import tempfile
import unittest

from click.testing import CliRunner
import pytest

from hermit.__main__ import cli


class TestClass(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.tmp = tempfile.TemporaryDirectory()
        cls.runner = CliRunner()

        cls.data_dir = os.path.join(cls.tmp.name, "data")
        result = cls.runner.invoke(
            cli, ["gen", "--nodes", "6", "--samples", "60", "--seed", "3", "-o", cls.data_dir, "--threads", "1"]
        )
        assert result.exit_code == 0, result.output
        cls.data = os.path.join(cls.data_dir, "data.csv")

        cls.laplacian = os.path.join(cls.tmp.name, "laplacian.json")
        result = cls.runner.invoke(
            cli, ["learn", "--data", cls.data, "-o", cls.laplacian, "--train-count", "40", "--threads", "1"]
        )
        assert result.exit_code == 0, result.output

    @classmethod
    def tearDownClass(cls):
        cls.tmp.cleanup()

    def path(self, name: str) -> str:
        return os.path.join(self.tmp.name, name)

    def read(self, path: str) -> bytes:
        with open(path, "rb") as stream:
            return stream.read()

    def test_gen_outputs(self):
        assert sorted(os.listdir(self.data_dir)) == ["data.csv", "edges.txt", "model.json"]
        with open(self.data) as stream:
            lines = stream.read().splitlines()
        assert lines[0] == "# n=6"
        assert len(lines) == 61
        assert len(lines[1].split(",")) == 12

    def test_gen_is_reproducible(self):
        other = self.path("again")
        result = self.runner.invoke(cli, ["gen", "--nodes", "6", "--samples", "60", "--seed", "3", "-o", other])
        assert result.exit_code == 0
        for name in ("data.csv", "model.json", "edges.txt"):
            assert self.read(os.path.join(other, name)) == self.read(os.path.join(self.data_dir, name))

    def test_gen_prefix(self):
        result = self.runner.invoke(cli, ["ge", "--nodes", "3", "--samples", "4", "-o", self.path("prefix")])
        assert result.exit_code == 0
        assert os.path.isfile(self.path("prefix/data.csv"))

    def test_ambiguous_prefix(self):
        result = self.runner.invoke(cli, ["sweep", "--data", self.data, "-o", self.path("x")])
        assert result.exit_code == 2
        assert "Too many matches" in result.output

    def test_invalid_nodes(self):
        result = self.runner.invoke(cli, ["gen", "--nodes", "1", "--samples", "5", "-o", self.path("bad")])
        assert result.exit_code == 2
        assert not os.path.exists(self.path("bad/data.csv"))

    def test_missing_data(self):
        result = self.runner.invoke(cli, ["learn", "--data", self.path("missing.csv"), "-o", self.path("out.json")])
        assert result.exit_code == 2
        assert not os.path.exists(self.path("out.json"))

    def test_invalid_config(self):
        config = self.path("bad.yaml")
        with open(config, "w") as stream:
            stream.write("learn:\n  rho: -1\n")
        result = self.runner.invoke(cli, ["learn", "--data", self.data, "-o", self.path("o.json"), "-c", config])
        assert result.exit_code == 2

    def test_learn_refuses_degraded_estimate(self):
        config = self.path("stalled.yaml")
        with open(config, "w") as stream:
            stream.write("learn:\n  lp_max_iters: 1\n  lp_simplex_fallback: false\n")
        args = ["learn", "--data", self.data, "--train-count", "40", "--threads", "1", "-c", config]

        result = self.runner.invoke(cli, args + ["-o", self.path("refused.json")])
        assert result.exit_code == 1
        assert not os.path.exists(self.path("refused.json"))

        result = self.runner.invoke(cli, args + ["-o", self.path("degraded.json"), "--allow-degraded"])
        assert result.exit_code == 0, result.output
        with open(self.path("degraded.json")) as stream:
            document = json.load(stream)
        assert document["degraded_columns"]
        assert sorted(document["column_fallbacks"]) == sorted(str(i) for i in document["degraded_columns"])

    def test_log_dir(self):
        log_dir = self.path("logs")
        result = self.runner.invoke(
            cli, ["gen", "--nodes", "3", "--samples", "4", "-o", self.path("logged"), "--log-dir", log_dir]
        )
        assert result.exit_code == 0
        assert os.path.isfile(os.path.join(log_dir, "hermit.log"))

    def test_laplacian_document(self):
        with open(self.laplacian) as stream:
            document = json.load(stream)
        assert document["n"] == 6
        assert document["format"] == "coo"
        assert len(document["mean"]) == 6
        assert document["degraded_columns"] == []
        assert document["config"]["learn"]["train_count"] == 40
        assert len(document["train_hash"]) == 64

    def test_interpolate_full_states(self):
        observations = self.path("full.csv")
        with open(self.data) as source, open(observations, "w") as target:
            target.writelines(source.readlines()[1:3])

        output = self.path("states.json")
        result = self.runner.invoke(
            cli, ["interpolate", "-L", self.laplacian, "-y", observations, "--observed", "0,2,4", "-o", output]
        )
        assert result.exit_code == 0, result.output

        with open(output) as stream:
            document = json.load(stream)
        assert document["observed"] == [0, 2, 4]
        assert len(document["states"]) == 2
        assert len(document["states"][0]) == 6
        assert all(d["converged"] for d in document["diagnostics"])

    def test_interpolate_observed_values(self):
        observations = self.path("observed.csv")
        with open(observations, "w") as stream:
            stream.write("1,0,0.5,0.5\n")

        output = self.path("observed_states.json")
        result = self.runner.invoke(
            cli, ["i", "-L", self.laplacian, "-y", observations, "--observed", "5,1", "-o", output, "--jacobi"]
        )
        assert result.exit_code == 0, result.output
        with open(output) as stream:
            assert json.load(stream)["observed"] == [1, 5]

    def test_interpolate_wrong_width(self):
        observations = self.path("wrong.csv")
        with open(observations, "w") as stream:
            stream.write("1,0,0.5,0.5\n")
        result = self.runner.invoke(
            cli, ["interpolate", "-L", self.laplacian, "-y", observations, "--observed", "0,1,2", "-o", self.path("w.json")]
        )
        assert result.exit_code == 2

    def test_eval(self):
        output_dir = self.path("eval")
        result = self.runner.invoke(
            cli,
            [
                "eval", "--data", self.data, "-L", self.laplacian, "-o", output_dir,
                "--sample-counts", "2,3", "--trials", "2", "--max-test-vectors", "5", "--raw-csv",
            ],
        )
        assert result.exit_code == 0, result.output
        assert sorted(os.listdir(output_dir)) == ["report.json", "report.txt", "report_trials.csv"]

        with open(os.path.join(output_dir, "report.json")) as stream:
            document = json.load(stream)
        assert [row["value"] for row in document["rows"]] == [2, 3]
        assert document["config"]["eval"]["trials"] == 2

    def test_eval_without_held_out_data(self):
        laplacian = self.path("all.json")
        result = self.runner.invoke(cli, ["learn", "--data", self.data, "-o", laplacian, "--rho", "0.4"])
        assert result.exit_code == 0, result.output

        result = self.runner.invoke(cli, ["eval", "--data", self.data, "-L", laplacian, "-o", self.path("e2")])
        assert result.exit_code == 2

    def test_sweep_mu(self):
        output_dir = self.path("mu")
        result = self.runner.invoke(
            cli,
            [
                "sweep-mu", "--data", self.data, "-L", self.laplacian, "-o", output_dir,
                "--mus", "0.1,1", "--sample-count", "3", "--trials", "2",
            ],
        )
        assert result.exit_code == 0, result.output
        with open(os.path.join(output_dir, "mu_sweep.json")) as stream:
            assert [row["value"] for row in json.load(stream)["rows"]] == [0.1, 1.0]


if __name__ == "__main__":
    pytest.main(args=["-v", os.path.abspath(__file__)])
