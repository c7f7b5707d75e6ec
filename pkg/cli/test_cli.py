import io
import json
import os
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path
from unittest import mock

from cli.main import main


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(list(argv))
    return code, out.getvalue(), err.getvalue()


class TestExitCodes(unittest.TestCase):

    def test_adeg(self):
        code, out, _ = run("adeg", "--fn", "or", "--t", "2")
        self.assertEqual(code, 0)
        document = json.loads(out)
        self.assertEqual(document["degree"], 2)
        self.assertEqual(document["profile"][1], "1/2")

    def test_hex_input(self):
        code, out, _ = run("adeg", "--hex", "e", "--t", "2")
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(out)["degree"], 2)

    def test_bad_epsilon(self):
        code, _, err = run("adeg", "--fn", "or", "--t", "2", "--eps", "2")
        self.assertEqual(code, 1)
        self.assertTrue(err.startswith("MALFORMED_INPUT"))

    def test_usage_errors(self):
        self.assertEqual(run("frobnicate")[0], 1)
        self.assertEqual(run("spectrum", "--fn", "or", "--t", "2")[0], 1)
        self.assertEqual(run("adeg", "--fn", "or", "--hex", "e", "--t", "2")[0], 1)

    def test_unknown_bound(self):
        self.assertEqual(run("bounds", "nope", "--fn", "or", "--t", "2", "--n", "4")[0], 1)

    def test_vacuous_bound(self):
        code, out, _ = run("bounds", "main-cc", "--fn", "or", "--t", "2", "--n", "4")
        self.assertEqual(code, 2)
        self.assertEqual(json.loads(out)["status"], "VACUOUS")

    def test_verified_bound(self):
        code, out, _ = run("bounds", "disc-lower", "--fn", "or", "--t", "2", "--n", "4", "--d", "1")
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(out)["exact"], "1/48")

    def test_weight(self):
        code, out, _ = run("weight", "--fn", "or", "--t", "2")
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(out)["weight_int"], 3)
        code, out, _ = run("weight", "--fn", "or", "--t", "2", "--d", "0")
        self.assertEqual(code, 2)
        self.assertEqual(json.loads(out)["weight_real"], "inf")

    def test_simulate_det(self):
        code, out, _ = run("simulate", "det", "--fn", "parity", "--t", "2", "--n", "4")
        self.assertEqual(code, 0)
        document = json.loads(out)
        self.assertEqual(document["correct"], document["inputs"])

    def test_spectrum_csv(self):
        code, out, _ = run("spectrum", "--fn", "or", "--t", "2", "--n", "4", "--verify", "--format", "csv")
        self.assertEqual(code, 0)
        lines = out.splitlines()
        self.assertEqual(lines[0], "sigma,sigma_sq,multiplicity,verified")
        self.assertEqual(len(lines), 4)

    def test_catalog(self):
        code, out, _ = run("catalog", "--format", "csv")
        self.assertEqual(code, 0)
        self.assertTrue(out.startswith("kind,name,description,parameters"))
        self.assertIn("bound,main-cc", out)

    def test_bad_log_level(self):
        with mock.patch.dict(os.environ, {"PATMAT_LOG_LEVEL": "LOUD"}):
            self.assertEqual(run("catalog")[0], 1)


class TestSweep(unittest.TestCase):

    def test_rows_keep_grid_order(self):
        code, out, _ = run("sweep", "main-cc", "--fn", "or", "--t", "2", "--ns", "4,8",
                           "--grid", "1/3,1/2", "--workers", "3")
        self.assertEqual(code, 0)
        rows = json.loads(out)
        self.assertEqual([(r["n"], r["param"]) for r in rows],
                         [(4, "1/3"), (4, "1/2"), (8, "1/3"), (8, "1/2")])

    def test_grid_validated_up_front(self):
        self.assertEqual(run("sweep", "main-cc", "--fn", "or", "--t", "2", "--ns", "4,5")[0], 1)


class TestDeterminism(unittest.TestCase):

    def test_repeated_runs_are_identical(self):
        argv = ("bounds", "small-bias-cc", "--fn", "or", "--t", "2", "--n", "4", "--gamma", "1/2")
        self.assertEqual(run(*argv)[:2], run(*argv)[:2])

    def test_seeded_simulation(self):
        argv = ("simulate", "weight", "--fn", "or", "--t", "2", "--n", "4", "--trials", "500", "--seed", "9")
        first, second = run(*argv), run(*argv)
        self.assertEqual(first[:2], second[:2])
        self.assertEqual(first[0], 0)


class TestVerifyRoundTrip(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.dir = Path(self.tmp.name)

    def test_witness_then_verify(self):
        path = self.dir / "witness.json"
        self.assertEqual(run("witness", "--fn", "or", "--t", "2", "--out", str(path))[0], 0)
        code, out, _ = run("verify", str(path))
        self.assertEqual(code, 0)
        self.assertTrue(json.loads(out)["passed"])

    def test_tampered_certificate(self):
        path = self.dir / "weight.json"
        run("witness", "--fn", "or", "--t", "2", "--kind", "weight-cert", "--out", str(path))
        document = json.loads(path.read_text())
        document["payload"]["weight"] = 2
        path.write_text(json.dumps(document))
        self.assertEqual(run("verify", str(path))[0], 2)

    def test_bound_certificate(self):
        path = self.dir / "bound.json"
        run("bounds", "disc-upper", "--fn", "or", "--t", "2", "--n", "4", "--out", str(path))
        self.assertEqual(run("verify", str(path))[0], 0)

    def test_matrix_export(self):
        path = self.dir / "matrix.csv"
        run("spectrum", "--fn", "or", "--t", "2", "--n", "4", "--export", str(path))
        self.assertEqual(run("verify", str(path))[0], 0)

    def test_missing_file(self):
        self.assertEqual(run("verify", str(self.dir / "absent.json"))[0], 1)

    def test_malformed_files_exit_one(self):
        cases = {"bad-pair.csv": "# n=4,t\n1,1\n", "no-t.csv": "# n=4\n1,1\n", "list.json": "[1, 2]\n"}
        for name, text in cases.items():
            path = self.dir / name
            path.write_text(text)
            code, out, err = run("verify", str(path))
            self.assertEqual(code, 1, name)
            self.assertEqual(out, "")
            self.assertIn("MALFORMED_INPUT", err)

    def test_tampered_export_names_row(self):
        path = self.dir / "matrix.csv"
        run("spectrum", "--fn", "or", "--t", "2", "--n", "4", "--export", str(path))
        lines = path.read_text().splitlines()
        lines[3] = ",".join("1" if c == "-1" else "-1" for c in lines[3].split(","))
        path.write_text("\n".join(lines) + "\n")
        code, out, _ = run("verify", str(path))
        self.assertEqual(code, 2)
        self.assertEqual(json.loads(out)["notes"], {"first-tampered-row": 2})


if __name__ == "__main__":
    unittest.main()
