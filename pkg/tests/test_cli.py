#!/usr/bin/env python3
"""
Tests for the layernet command line interface.
"""
import json
import os
import tempfile
import unittest

from click.testing import CliRunner

from cli import EXIT_CONFIG, cli
from models.error_report import CSV_COLUMNS
from models.network import Network


class TestCli(unittest.TestCase):
    """Runs the commands through click's test runner."""

    def setUp(self):
        self.runner = CliRunner(mix_stderr=False)
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def _write(self, name, data):
        path = os.path.join(self.tmp.name, name)
        with open(path, "w", encoding="utf-8") as handle:
            if isinstance(data, str):
                handle.write(data)
            else:
                json.dump(data, handle)
        return path

    def _invoke(self, *args):
        return self.runner.invoke(cli, ["--log-level", "WARNING", *args])

    def test_study_csv(self):
        """study writes the CSV table to stdout"""
        path = self._write("study.json", {"method": "fem", "p": [1, 2],
                                          "epsilon": [0.1],
                                          "samples": 100})
        result = self._invoke("study", "--config", path)
        self.assertEqual(result.exit_code, 0, result.stderr)
        lines = result.stdout.splitlines()
        self.assertEqual(lines[0], ",".join(CSV_COLUMNS))
        self.assertEqual(len(lines), 3)

    def test_study_json_to_file(self):
        """study --format json --out writes a JSON document"""
        path = self._write("study.yaml",
                           "method: fem\np: [1, 2]\nepsilon: [0.1]\n"
                           "samples: 100\n")
        out = os.path.join(self.tmp.name, "out.json")
        result = self._invoke("study", "--config", path, "--format", "json",
                              "--out", out)
        self.assertEqual(result.exit_code, 0, result.stderr)
        with open(out, encoding="utf-8") as handle:
            body = json.load(handle)
        self.assertEqual(len(body["rows"]), 2)
        self.assertIn("robustness", body)

    def test_study_bad_config(self):
        """Invalid or missing configs exit with the config code"""
        path = self._write("bad.json", {"method": "fem", "p": [1]})
        result = self._invoke("study", "--config", path)
        self.assertEqual(result.exit_code, EXIT_CONFIG)
        self.assertIn("epsilon", result.stderr)
        result = self._invoke("study", "--config",
                              os.path.join(self.tmp.name, "absent.json"))
        self.assertEqual(result.exit_code, EXIT_CONFIG)

    def test_emit_net(self):
        """emit-net prints the interchange format"""
        path = self._write("net.yaml",
                           "construction: exp\nactivation: sigmoid\n"
                           "tau: 0.01\n")
        result = self._invoke("emit-net", "--config", path)
        self.assertEqual(result.exit_code, 0, result.stderr)
        body = json.loads(result.stdout)
        self.assertEqual(body["activation"], "sigmoid")
        self.assertEqual(body["depth"], 2)
        net = Network.from_json(body)
        self.assertEqual(net.size, 3)

    def test_emit_net_invalid(self):
        """Construction errors exit with the config code"""
        path = self._write("net.json", {"construction": "identity",
                                        "tau": 0.1})
        result = self._invoke("emit-net", "--config", path)
        self.assertEqual(result.exit_code, EXIT_CONFIG)

    def test_verify_snn(self):
        """verify-snn reports an equivalent conversion"""
        hat = Network([([[1.0], [1.0], [1.0]], [1.0, 0.0, -1.0]),
                       ([[1.0, -2.0, 1.0]], [0.0])], "relu")
        path = self._write("hat.json", hat.to_json(for_serialization=True))
        result = self._invoke("verify-snn", path, "--samples", "50")
        self.assertEqual(result.exit_code, 0, result.stderr)
        report = json.loads(result.stdout)
        self.assertLess(report["max_rel"], 1e-8)

    def test_verify_snn_rejects_tanh(self):
        """Non-ReLU networks exit with the config code"""
        net = Network([([[1.0]], [0.0]), ([[1.0]], [0.0])], "tanh")
        path = self._write("tanh.json", net.to_json())
        result = self._invoke("verify-snn", path)
        self.assertEqual(result.exit_code, EXIT_CONFIG)
        result = self._invoke("verify-snn",
                              self._write("junk.json", "[1, 2"))
        self.assertEqual(result.exit_code, EXIT_CONFIG)

    def test_verify_cheb(self):
        """verify-cheb passes feasible trees"""
        result = self._invoke("verify-cheb", "-m", "2", "-m", "3",
                              "--delta", "0.01", "--samples", "1001")
        self.assertEqual(result.exit_code, 0, result.stderr)
        body = json.loads(result.stdout)
        self.assertTrue(body["passed"])
        self.assertEqual(len(body["trees"]), 2)

    def test_verify_cheb_config(self):
        """verify-cheb reads m and delta from a config file"""
        path = self._write("cheb.json", {"m": 4, "delta": [0.01],
                                         "samples": 1001})
        result = self._invoke("verify-cheb", "--config", path)
        self.assertEqual(result.exit_code, 0, result.stderr)
        self.assertEqual(json.loads(result.stdout)["trees"][0]["m"], 4)

    def test_verify_cheb_needs_parameters(self):
        """Without m or delta verify-cheb exits with the config code"""
        result = self._invoke("verify-cheb", "-m", "2")
        self.assertEqual(result.exit_code, EXIT_CONFIG)


if __name__ == '__main__':
    unittest.main()
