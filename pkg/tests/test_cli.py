import csv
import io
import json
import os
import tempfile
from contextlib import redirect_stderr, redirect_stdout
from unittest import mock

from base_test_class import BaseTest

from permpenta.cli import EXIT_LIMITS, EXIT_OK, EXIT_USAGE, main
from permpenta.config import ENV_ORACLE_CAP
from permpenta.report import SWEEP_COLUMNS, to_json

SPEC_ARGS = ["--theorem", "1", "--z", "1", "-p", "2", "-k", "2", "--iq", "2", "--ir", "0", "--is", "1"]


class TestCli(BaseTest):

    def run_cli(self, *argv):
        """ Run main() and return (exit code, stdout, stderr). """
        stdout, stderr = io.StringIO(), io.StringIO()
        with redirect_stdout(stdout), redirect_stderr(stderr):
            code = main(list(argv))
        return code, stdout.getvalue(), stderr.getvalue()

    def run_json(self, *argv):
        code, out, _ = self.run_cli(*argv, "--format", "json")
        return code, json.loads(out), out

    def test_construct(self):
        code, report, _ = self.run_json("construct", *SPEC_ARGS)
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(report["schema"], "permpenta-report-v1")
        record = report["records"][0]
        self.assertEqual(record["kind"], "construct")
        self.assertEqual(record["B"], [["6", 1], ["5", 1], ["3", 1], ["2", 1], ["0", 1]])
        self.assertEqual(record["spec"]["r"], "7")
        self.assertEqual(record["terms"], 5)

    def test_construct_human(self):
        code, out, _ = self.run_cli("construct", "--theorem", "2", "--z", "2", "-k", "1", "--iq", "1", "--is", "1")
        self.assertEqual(code, EXIT_OK)
        self.assertIn("B = [1]X^5 + [1]X^1 + [1]X^0", out)

    def test_json_round_trip(self):
        _, report, out = self.run_json("construct", *SPEC_ARGS)
        self.assertEqual(to_json(report), out)

    def test_characteristic_three(self):
        code, out, err = self.run_cli("construct", "-p", "3", "-k", "1")
        self.assertEqual(code, EXIT_USAGE)
        self.assertEqual(out, "")
        self.assertIn("characteristic 3 unsupported", err)
        code, _, err = self.run_cli("sweep", "--primes", "3")
        self.assertEqual(code, EXIT_USAGE)
        self.assertIn("characteristic 3 unsupported", err)

    def test_bad_r(self):
        code, _, err = self.run_cli("verify", *SPEC_ARGS, "--r", "8")
        self.assertEqual(code, EXIT_USAGE)
        self.assertIn("not congruent", err)

    def test_verify(self):
        code, report, _ = self.run_json("verify", *SPEC_ARGS)
        self.assertEqual(code, EXIT_OK)
        record = report["records"][0]
        self.assertTrue(record["agree"])
        self.assertEqual([record["criterion"], record["mu"], record["oracle"]], [True, True, True])

    def test_oracle_cap_from_environment(self):
        with mock.patch.dict(os.environ, {ENV_ORACLE_CAP: "15"}):
            code, report, _ = self.run_json("verify", *SPEC_ARGS)
        self.assertEqual(code, EXIT_OK)
        self.assertIsNone(report["records"][0]["oracle"])
        self.assertTrue(report["summary"]["skipped"])

    def test_limits_exceeded(self):
        code, _, err = self.run_cli("mu-check", "-p", "2", "-k", "2", "--oracle-cap", "4")
        self.assertEqual(code, EXIT_LIMITS)
        self.assertIn("limit exceeded", err)

    def test_sweep_csv(self):
        code, out, _ = self.run_cli("sweep", "--primes", "2", "--kmax", "2", "--imax", "1", "--format", "csv")
        self.assertEqual(code, EXIT_OK)
        rows = list(csv.reader(io.StringIO(out)))
        self.assertEqual(tuple(rows[0]), SWEEP_COLUMNS)
        self.assertEqual(len(rows), 161)
        self.assertTrue(all(row[SWEEP_COLUMNS.index("agree")] == "true" for row in rows[1:]))

    def test_empty_sweep(self):
        code, report, _ = self.run_json("sweep", "--imax=-1")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(report["records"], [])
        self.assertEqual(report["summary"]["records"], 0)

    def test_decompose(self):
        code, out, _ = self.run_cli("decompose", "--theorem", "1", "-p", "2", "-k", "2")
        self.assertEqual(code, EXIT_OK)
        self.assertIn("q≡1 branch, equality holds on 16/16 points", out)
        code, out, _ = self.run_cli("decompose", "--theorem", "1", "-p", "2", "-k", "1")
        self.assertEqual(code, EXIT_OK)
        self.assertIn("q≡2 branch, equality holds on 4/4 points", out)
        code, _, _ = self.run_cli("decompose", "--theorem", "1", "-p", "2", "-k", "2", "--r", "8")
        self.assertEqual(code, EXIT_USAGE)

    def test_mu_check(self):
        code, report, _ = self.run_json("mu-check", "-p", "5", "-k", "1")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(len(report["records"]), 3)
        self.assertTrue(all(record["passed"] for record in report["records"]))
        self.assertEqual(report["summary"]["failed"], 0)

    def test_mu_check_pair_cap(self):
        code, report, _ = self.run_json("mu-check", "-p", "2", "-k", "2")
        self.assertEqual(code, EXIT_OK)
        self.assertTrue(all(record["details"]["exhaustive"] for record in report["records"][1:]))
        code, report, _ = self.run_json("mu-check", "-p", "2", "-k", "2", "--pair-cap", "16", "--seed", "3")
        self.assertEqual(code, EXIT_OK)
        self.assertFalse(report["records"][1]["details"]["exhaustive"])
        self.assertTrue(all(record["passed"] for record in report["records"]))

    def test_tables(self):
        code, report, _ = self.run_json("tables")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(len(report["records"]), 10)
        self.assertEqual(report["records"][0]["details"]["B_1"], "+QRS -Q -R -S +1")
        for p in ("2", "5"):
            code, report, _ = self.run_json("tables", "-p", p)
            self.assertEqual(code, EXIT_OK)
            self.assertEqual(report["summary"]["failed"], 0)

    def test_literature(self):
        code, report, _ = self.run_json("literature", "--k-values", "1,2")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(len(report["records"]), 34)

    def test_out_file(self):
        with tempfile.TemporaryDirectory() as folder:
            path = os.path.join(folder, "report.json")
            code, out, _ = self.run_cli("construct", *SPEC_ARGS, "--format", "json", "--out", path)
            self.assertEqual(code, EXIT_OK)
            self.assertEqual(out, "")
            with open(path, encoding="utf-8") as handle:
                self.assertEqual(json.load(handle)["command"], "construct")
