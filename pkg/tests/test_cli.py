import json

import numpy as np
import typer
from typer.testing import CliRunner

from entropy_lab import app, parse_and_validate
from entropy_lab.crossed import BaseTrace
from entropy_lab.report import OutputFormat, Subcommand
from entropy_lab.routes import Method
from tests import TempWorkspaceTestCase

runner = CliRunner()


class CliTestCase(TempWorkspaceTestCase):
    def setUp(self) -> None:
        super().setUp()
        self.rho = str(self.write_matrix(np.diag([0.7, 0.3]), "rho.json"))
        self.sigma = str(self.write_matrix(np.diag([0.5, 0.5]), "sigma.json"))

    def invoke(self, *args: str):
        return runner.invoke(app, list(args))

    def quantum_rel(self, *extra: str) -> list[str]:
        return ["quantum", "rel", "--rho", self.rho, "--sigma", self.sigma, *extra]

    def assertUsageError(self, argv: list[str]):
        with self.assertRaises(typer.Exit) as raised:
            parse_and_validate(argv)
        self.assertEqual(raised.exception.exit_code, 2)


class TestParsing(CliTestCase):
    def test_quantum_rel(self):
        run = parse_and_validate(self.quantum_rel())
        self.assertEqual(run.subcommand, Subcommand.QuantumRel)
        self.assertEqual(run.method, Method.All)
        self.assertEqual(run.format, OutputFormat.Csv)
        self.assertEqual(str(run.rho), self.rho)

    def test_method(self):
        argv = self.quantum_rel("--method", "interp")
        self.assertEqual(parse_and_validate(argv).method, Method.Interpolated)

    def test_unknown_method(self):
        self.assertUsageError(self.quantum_rel("--method", "bogus"))

    def test_missing_file(self):
        argv = ["quantum", "rel", "--rho", self.rho, "--sigma", str(self.to_path("nope.json"))]
        self.assertUsageError(argv)

    def test_eps_grid(self):
        argv = ["orlicz", "regular", "--density", self.rho, "--eps-grid", "1e-8:1e2:161"]
        run = parse_and_validate(argv)
        self.assertEqual(len(run.eps_grid.points()), 161)
        self.assertEqual(run.settings().eps_grid, run.eps_grid)

    def test_malformed_eps_grids(self):
        for grid in ("1e-8:1e2", "1:0.1:5", "0:1:5", "a:b:c"):
            with self.subTest(grid=grid):
                argv = ["orlicz", "regular", "--density", self.rho, "--eps-grid", grid]
                self.assertUsageError(argv)

    def test_regular_needs_one_input(self):
        for argv in (
            ["orlicz", "regular"],
            ["orlicz", "regular", "--rho", self.rho],
            ["orlicz", "regular", "--density", self.rho, "--rho", self.rho, "--sigma", self.sigma],
        ):
            with self.subTest(argv=argv):
                self.assertUsageError(argv)

    def test_trace(self):
        argv = ["crossed", "tail", "--density", self.rho, "--trace", "counting"]
        argv += ["--profile", "phi_ent"]
        run = parse_and_validate(argv)
        self.assertEqual(run.trace, BaseTrace.Counting)
        self.assertEqual(run.profile, "phi_ent")

    def test_classical_inputs(self):
        dist = str(self.write_table("atom,weight", [("a", 1.0)], "p.csv"))

        self.assertUsageError(["classical", "report"])
        self.assertUsageError(["classical", "report", "--ref", dist])
        self.assertUsageError(["classical", "report", "--dist", dist, "--beta", "-1"])

        self.assertEqual(parse_and_validate(["classical", "report", "--dist", dist]).beta, 1.0)

    def test_custom_young_function(self):
        dist = str(self.write_table("atom,weight", [("a", 1.0)], "p.csv"))
        self.assertUsageError(["orlicz", "norm", "--dist", dist, "--young", "custom"])

    def test_checks(self):
        argv = ["check", "--seed", "5", "--only", "kms-condition", "--only", "scalar-bound"]
        run = parse_and_validate(argv)
        self.assertEqual(run.seed, 5)
        self.assertEqual(run.checks, ("kms-condition", "scalar-bound"))
        self.assertIsNone(run.samples)

    def test_invalid_checks(self):
        for argv in (
            ["check", "--only", "bogus"],
            ["check", "--seed", "-1"],
            ["check", "--samples", "0"],
        ):
            with self.subTest(argv=argv):
                self.assertUsageError(argv)

    def test_config_file(self):
        config = str(self.write_file(json.dumps({"route_tolerance": 1e-3}), "lab.json"))
        run = parse_and_validate(["-c", config, *self.quantum_rel()])
        self.assertEqual(run.tolerance, 1e-3)

    def test_bad_config_file(self):
        config = str(self.write_file(json.dumps({"route_tolerance": -1}), "lab.json"))
        self.assertUsageError(["-c", config, *self.quantum_rel()])

    def test_no_command(self):
        self.assertUsageError([])
        self.assertUsageError(["quantum"])


class TestExitCodes(CliTestCase):
    def test_success(self):
        result = self.invoke(*self.quantum_rel("--method", "divergence"))
        self.assertEqual(result.exit_code, 0, result.output)

        lines = result.stdout.splitlines()
        self.assertEqual(lines[0], "section,name,value,error,units,elapsed_ms")
        self.assertTrue(lines[1].startswith("quantum,divergence,0.08228287"))

    def test_all_routes_agree(self):
        result = self.invoke(*self.quantum_rel())
        self.assertEqual(result.exit_code, 0, result.output)
        self.assertEqual(len(result.stdout.splitlines()), 6)

    def test_tolerance_violation(self):
        coarse = {"limit_t0": 0.1, "limit_steps": 1}
        config = str(self.write_file(json.dumps(coarse), "coarse.json"))
        result = self.invoke("-c", config, *self.quantum_rel("--tol", "1e-7"))
        self.assertEqual(result.exit_code, 1)
        self.assertIn("tolerance violated", result.output)
        self.assertIn("discrepancy", result.stdout)

    def test_usage_error(self):
        result = self.invoke(*self.quantum_rel("--method", "bogus"))
        self.assertEqual(result.exit_code, 2)
        self.assertEqual(result.stdout, "")

    def test_invalid_input(self):
        a = str(self.write_matrix(np.diag([1.2, 0.8]), "a.json"))
        result = self.invoke("orlicz", "regular", "--density", a, "--trace", "counting")
        self.assertEqual(result.exit_code, 2)
        self.assertIn("error:", result.output)

    def test_invalid_state(self):
        twice = str(self.write_matrix(np.diag([0.7, 0.7]), "twice.json"))
        result = self.invoke("quantum", "rel", "--rho", twice, "--sigma", self.sigma)
        self.assertEqual(result.exit_code, 2)
        self.assertIn("trace", result.output)

    def test_json_output(self):
        argv = ["quantum", "sweep-t", "--rho", self.rho, "--sigma", self.sigma]
        result = self.invoke(*argv, "--format", "json")
        self.assertEqual(result.exit_code, 0, result.output)

        rows = json.loads(result.stdout)
        self.assertEqual(rows[-1]["name"], "extrapolated")
        self.assertTrue(all(row["section"] == "sweep-t" for row in rows))

    def test_out_file(self):
        out = self.to_path("report.csv")
        argv = ["check", "--only", "scalar-bound", "--samples", "1000"]
        result = self.invoke(*argv, "--out", str(out))

        self.assertEqual(result.exit_code, 0, result.output)
        self.assertEqual(result.stdout, "")
        self.assertTrue(out.read_text().startswith("section,name,value"))

    def test_reruns_are_identical(self):
        energies = self.write_table("atom,energy", [("g", 0), ("e", 1)], "h.csv")
        args = ("classical", "report", "--energies", str(energies))
        first, second = self.invoke(*args), self.invoke(*args)
        self.assertEqual(first.exit_code, 0, first.output)
        self.assertEqual(first.stdout, second.stdout)

    def test_crossed_tail(self):
        a = str(self.write_matrix(np.diag([0.6, 0.4]), "a.json"))
        argv = ["crossed", "tail", "--density", a, "--trace", "counting"]
        result = self.invoke(*argv, "--eps-grid", "0.5:0.5:1")

        self.assertEqual(result.exit_code, 0, result.output)
        self.assertIn("crossed-tail,eps=0.5,2,", result.stdout)
