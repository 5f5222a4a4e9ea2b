"""
Unit tests for the command line (pseudoelliptic/cli.py)
Tests exit codes, JSON output, batch runs and the summary CSV
"""
import unittest
import io
import json
import sys
import os
import tempfile
from unittest.mock import patch

import pandas as pd
from jsonschema import validate

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from pseudoelliptic.cli import SUMMARY_COLUMNS, main, read_batch
from pseudoelliptic.config import get_settings
from pseudoelliptic.errors import (
    DegenerateMap,
    InvariantViolation,
    ParseError,
    PartialResult,
    UnsupportedRadicand,
    exit_code_for,
)
from pseudoelliptic.report import REPORT_SCHEMA

SQRT_INTEGRAND = "t/((t^2-1)*(t^2-4))^(1/2)"
SQRT_CLOSED_FORM = "(1/2)*log(2*t^2-5+2*((t^2-1)*(t^2-4))^(1/2))"


def run(argv):
    """Run main and return (exit code, stdout)"""
    with patch('sys.stdout', new_callable=io.StringIO) as out:
        code = main(argv)
    return code, out.getvalue()


class CliTestCase(unittest.TestCase):
    def setUp(self):
        self.env = patch.dict(os.environ, {"PSEUDOELLIPTIC_BATCH_WORKERS": "1"})
        self.env.start()
        get_settings.cache_clear()

    def tearDown(self):
        self.env.stop()
        get_settings.cache_clear()


class TestExitCodes(CliTestCase):
    """Test the exit code of each outcome"""

    def test_elementary(self):
        """Test that an elementary integrand exits 0"""
        code, output = run(["diagnose", "--integrand", SQRT_INTEGRAND])
        self.assertEqual(code, 0)
        self.assertIn("status: elementary", output)

    def test_obstructed(self):
        """Test that t/(t^3 - 1)^(1/3) exits 2"""
        code, output = run(["diagnose", "--integrand", "t/(t^3-1)^(1/3)"])
        self.assertEqual(code, 2)
        self.assertIn("obstructed-certified-nonelementary", output)

    def test_unsupported(self):
        """Test that an irreducible cubic radicand exits 3"""
        code, _ = run(["diagnose", "--integrand", "1/(t^3-2)^(1/3)"])
        self.assertEqual(code, 3)

    def test_parse_error(self):
        """Test that an unbalanced parenthesis exits 1"""
        code, output = run(["diagnose", "--integrand", "1/(t^3-1)^(1/3"])
        self.assertEqual(code, 1)
        self.assertTrue(output.startswith("error:"))

    def test_integrate_prints_closed_form(self):
        """Test that integrate prints only the antiderivative"""
        code, output = run(["integrate", "--integrand", "t^2/(t^3-1)^(1/3)"])
        self.assertEqual(code, 0)
        self.assertEqual(output.strip(), "(1/2)*(t^3-1)^(2/3)")

    def test_missing_integrand(self):
        """Test that a command without --integrand or --batch is a usage error"""
        with patch('sys.stderr', new_callable=io.StringIO):
            with self.assertRaises(SystemExit) as ctx:
                main(["diagnose"])
        self.assertEqual(ctx.exception.code, 2)


class TestInternalErrors(CliTestCase):
    """Test that a broken internal check becomes exit code 6"""

    @patch('pseudoelliptic.cli.diagnose_text')
    def test_invariant_violation_is_reported(self, mock_diagnose):
        """Test that an InvariantViolation is logged and exits 6"""
        mock_diagnose.side_effect = InvariantViolation("projections do not sum to F")
        with self.assertLogs('pseudoelliptic.cli', level='ERROR') as logs:
            code, output = run(["diagnose", "--integrand", SQRT_INTEGRAND])
        self.assertEqual(code, 6)
        self.assertTrue(output.startswith("error: projections do not sum to F"))
        self.assertIn("internal error", logs.output[0])

    @patch('pseudoelliptic.cli.verify')
    def test_verify_internal_error(self, mock_verify):
        """Test that verify also exits 6 on an internal failure"""
        mock_verify.side_effect = DegenerateMap("identity")
        with self.assertLogs('pseudoelliptic.cli', level='ERROR'):
            code, _ = run(["verify", "--integrand", SQRT_INTEGRAND, "--antiderivative", SQRT_CLOSED_FORM])
        self.assertEqual(code, 6)

    def test_exit_code_mapping(self):
        """Test that package errors map to codes and foreign errors are re-raised"""
        self.assertEqual(exit_code_for(ParseError("x")), 1)
        self.assertEqual(exit_code_for(UnsupportedRadicand("x")), 3)
        self.assertEqual(exit_code_for(PartialResult("x")), 4)
        self.assertEqual(exit_code_for(InvariantViolation("x")), 6)
        with self.assertRaises(KeyError):
            exit_code_for(KeyError("x"))


class TestJsonOutput(CliTestCase):
    """Test reports printed with --json"""

    def test_report_matches_schema(self):
        """Test that diagnose --json validates against the report schema"""
        code, output = run(["diagnose", "--integrand", SQRT_INTEGRAND, "--json"])
        self.assertEqual(code, 0)
        report = json.loads(output)
        validate(instance=report, schema=REPORT_SCHEMA)
        self.assertEqual(report["status"], "elementary")
        self.assertEqual(len(report["reductions"]), 2)

    def test_obstruction_matches_schema(self):
        """Test that an obstructed report carries its residues"""
        _, output = run(["diagnose", "--integrand", "t/(t^3-1)^(1/3)", "--json"])
        report = json.loads(output)
        validate(instance=report, schema=REPORT_SCHEMA)
        self.assertEqual(report["obstruction"]["witness"], "z")
        self.assertEqual([row["point"] for row in report["obstruction"]["residues"]][:3], ["P0", "PK", "Pinf"])

    def test_integrate_json(self):
        """Test that integrate --json includes the verified antiderivative"""
        _, output = run(["integrate", "--integrand", "1/(t^3-1)^(1/3)", "--json"])
        report = json.loads(output)
        validate(instance=report, schema=REPORT_SCHEMA)
        self.assertTrue(report["verified"])
        self.assertIsNotNone(report["antiderivative"])


class TestVerifyCommand(CliTestCase):
    """Test the verify subcommand"""

    def test_correct_closed_form(self):
        """Test that a correct antiderivative exits 0"""
        code, output = run(["verify", "--integrand", SQRT_INTEGRAND, "--antiderivative", SQRT_CLOSED_FORM])
        self.assertEqual(code, 0)
        self.assertEqual(output.strip(), "verified: True")

    def test_wrong_closed_form(self):
        """Test that a wrong antiderivative exits 5 and prints the discrepancy"""
        wrong = SQRT_CLOSED_FORM.replace("+2*(", "+3*(")
        code, output = run(["verify", "--integrand", SQRT_INTEGRAND, "--antiderivative", wrong])
        self.assertEqual(code, 5)
        self.assertIn("verified: False", output)
        self.assertIn("discrepancy:", output)

    def test_verify_json(self):
        """Test the JSON form of a verification"""
        code, output = run(["verify", "--integrand", SQRT_INTEGRAND, "--antiderivative", SQRT_CLOSED_FORM, "--json"])
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(output), {"verified": True, "discrepancy": None})


class TestBatch(CliTestCase):
    """Test --batch and --summary"""

    def setUp(self):
        super().setUp()
        self.tmp = tempfile.TemporaryDirectory()
        self.batch = os.path.join(self.tmp.name, "integrands.txt")
        self.summary = os.path.join(self.tmp.name, "summary.csv")
        with open(self.batch, "w", encoding="utf-8") as f:
            f.write("# worked examples\n")
            f.write(SQRT_INTEGRAND + "\n")
            f.write("\n")
            f.write("t/(t^3-1)^(1/3)  # obstructed\n")
            f.write("1/(t^3-2)^(1/3)\n")

    def tearDown(self):
        self.tmp.cleanup()
        super().tearDown()

    def test_read_batch(self):
        """Test that comments and blank lines are skipped"""
        self.assertEqual(read_batch(self.batch), [SQRT_INTEGRAND, "t/(t^3-1)^(1/3)", "1/(t^3-2)^(1/3)"])

    def test_summary_csv(self):
        """Test that the summary CSV has one row per integrand"""
        code, _ = run(["diagnose", "--batch", self.batch, "--summary", self.summary])
        self.assertEqual(code, 3)
        summary = pd.read_csv(self.summary)
        self.assertEqual(list(summary.columns), SUMMARY_COLUMNS)
        self.assertEqual(len(summary), 3)
        self.assertEqual(list(summary["exit_code"]), [0, 2, 3])
        self.assertEqual(summary["status"].iloc[1], "obstructed-certified-nonelementary")

    def test_batch_prints_table(self):
        """Test that a plain batch run ends with the summary table"""
        _, output = run(["diagnose", "--batch", self.batch])
        self.assertIn("exit_code", output)
        self.assertIn("status: unsupported", output)


if __name__ == '__main__':
    unittest.main()
