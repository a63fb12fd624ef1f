#!/usr/bin/env python3
"""End-to-end checks of the hodge CLI: output schemas, round trips, exit codes."""

import argparse
import csv
import io
import json
import os
import subprocess
import sys
import tempfile
import unittest
from pathlib import Path

import jsonschema
from referencing import Registry, Resource

HODGE = None
SCHEMAS = None


def run(*args, env=None, check_exit=None):
    full_env = dict(os.environ)
    full_env.pop("HODGE_SIGMA_TOL", None)
    if env:
        full_env.update(env)
    proc = subprocess.run([HODGE, *map(str, args)], capture_output=True, text=True, env=full_env)
    if check_exit is not None and proc.returncode != check_exit:
        raise AssertionError(
            f"hodge {' '.join(map(str, args))}: exit {proc.returncode}, want {check_exit}\n"
            f"stdout: {proc.stdout}\nstderr: {proc.stderr}"
        )
    return proc


def load_schemas():
    resources = []
    schemas = {}
    for path in sorted(Path(SCHEMAS).glob("*.schema.json")):
        doc = json.loads(path.read_text())
        schemas[path.name.removesuffix(".schema.json")] = doc
        resources.append((doc["$id"], Resource.from_contents(doc)))
    return schemas, Registry().with_resources(resources)


class CliTest(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.schemas, cls.registry = load_schemas()
        cls.tmp = tempfile.TemporaryDirectory()
        cls.dir = Path(cls.tmp.name)

    @classmethod
    def tearDownClass(cls):
        cls.tmp.cleanup()

    def validate(self, name, doc):
        jsonschema.Draft202012Validator(self.schemas[name], registry=self.registry).validate(doc)

    def path(self, name):
        return self.dir / name

    def gen(self, name, *args):
        out = self.path(name)
        run("gen", *args, "--out", out, check_exit=0)
        return out

    def test_schemas_are_valid(self):
        for doc in self.schemas.values():
            jsonschema.Draft202012Validator.check_schema(doc)

    def test_sigma_eval(self):
        doc = json.loads(run("sigma-eval", "--re", 1, "--im", 0, check_exit=0).stdout)
        self.validate("sigma_eval", doc)
        self.assertAlmostEqual(doc["sigma"]["re"], 1.182951300500129291, delta=1e-8)
        doc = json.loads(run("sigma-eval", "--re", 1, "--im", 1, check_exit=0).stdout)
        self.assertEqual(doc["sigma"], {"re": 0.0, "im": 0.0})

    def test_sigma_scan(self):
        text = run("sigma-scan", "--radius", 2, "--grid", 5, check_exit=0).stdout
        rows = list(csv.DictReader(io.StringIO(text)))
        self.assertEqual(len(rows), 25)
        self.assertEqual(list(rows[0].keys()), ["x", "y", "abs_sigma"])
        zeros = [r for r in rows if float(r["abs_sigma"]) == 0.0]
        # Grid step 1 on [-2, 2]^2 hits the 13 lattice points with a = b mod 2.
        self.assertEqual(len(zeros), 13)

    def test_gen_outputs_validate(self):
        out = self.gen("g.json", "--type", "(1,0)x1+(0,1)x1", "--conjugate", "--seed", 4)
        doc = json.loads(out.read_text())
        self.validate("operators", doc)
        self.assertEqual(set(doc), {"E", "T", "S"})

    def test_conjugated_instances_verify(self):
        failures = []
        for seed in range(100):
            out = self.gen(f"c{seed}.json", "--seed", seed, "--conjugate")
            proc = run("verify", out)
            doc = json.loads(proc.stdout)
            self.validate("report", doc)
            if proc.returncode != 0 or not doc["verdict"]:
                failures.append((seed, proc.returncode, doc["witnesses"]))
        self.assertEqual(failures, [])

    def test_split_round_trip(self):
        for seed in range(20):
            src = self.gen(f"s{seed}.json", "--seed", seed, "--conjugate")
            s_only = self.path(f"s{seed}_S.json")
            s_only.write_text(json.dumps({"S": json.loads(src.read_text())["S"]}))
            pair = self.path(f"s{seed}_pair.json")
            run("split", s_only, "--out", pair, check_exit=0)
            doc = json.loads(pair.read_text())
            self.validate("operators", doc)
            self.assertEqual(set(doc), {"E", "T"})
            report = json.loads(run("verify", pair, check_exit=0).stdout)
            self.validate("report", report)
            self.assertTrue(report["verdict"])

    def test_classify_decompose_filtration(self):
        out = self.gen("pure.json", "--type", "(2,0)x1+(1,1)x2", "--conjugate", "--seed", 9)
        cls = json.loads(run("classify", out, check_exit=0).stdout)
        self.validate("classify", cls)
        self.assertEqual(cls["spec"], "(1,1)x2+(2,0)x1")
        self.assertEqual(cls["dimension"], 4)
        dec = json.loads(run("decompose", out, check_exit=0).stdout)
        self.validate("decomposition", dec)
        self.assertEqual(dec["pure_weight"], 2)
        self.assertEqual(sum(c["dim"] for c in dec["components"]), 4)
        for r in range(-1, 5):
            filt = json.loads(run("filtration", out, "--r", r, check_exit=0).stdout)
            self.validate("filtration", filt)
            self.assertTrue(filt["complementary"])

    def test_rho(self):
        out = self.gen("rho_in.json", "--type", "(1,0)x1")
        doc = json.loads(run("rho", out, "--x", 0, "--y", 0, check_exit=0).stdout)
        self.validate("matrix", doc)
        self.assertEqual(doc["entries"], [[1.0, 0.0], [0.0, 1.0]])

    def test_non_structures_exit_one(self):
        bad = self.path("one.json")
        bad.write_text(json.dumps({"S": {"n": 1, "entries": [[1]]}}))
        proc = run("verify", bad, check_exit=1)
        doc = json.loads(proc.stdout)
        self.validate("report", doc)
        self.assertEqual(doc["witnesses"][0]["kind"], "off-lattice")
        nil = self.path("nil.json")
        nil.write_text(json.dumps({"S": {"n": 2, "entries": [[0, 1], [0, 0]]}}))
        self.assertEqual(run("verify", nil).returncode, 1)

    def assert_error(self, proc, kind):
        self.assertEqual(proc.returncode, 2, proc.stderr)
        doc = json.loads(proc.stderr)
        self.validate("error", doc)
        self.assertEqual(doc["error"], kind)

    def test_errors_exit_two(self):
        self.assert_error(run("verify", self.path("missing.json")), "InputError")
        self.assert_error(run("gen", "--type", "(1,0)x"), "InputError")
        unknown = self.path("unknown.json")
        unknown.write_text(json.dumps({"S": {"n": 1, "entries": [[0]]}, "X": 1}))
        self.assert_error(run("verify", unknown), "InputError")
        rows = self.path("rows.json")
        rows.write_text(json.dumps({"S": {"n": 2, "entries": [[0, 0]]}}))
        self.assert_error(run("verify", rows), "DimensionMismatch")
        self.assert_error(run("sigma-eval", "--re", 1, "--im", 0, "--tol", 0), "InputError")
        self.assert_error(run("frobnicate"), "UsageError")
        mixed = self.gen("mixed.json", "--type", "(1,0)x1+(0,0)x1")
        self.assert_error(run("filtration", mixed, "--r", 1), "InputError")
        off = self.path("off.json")
        off.write_text(json.dumps({"S": {"n": 1, "entries": [[1]]}}))
        self.assert_error(run("classify", off), "SpectrumOffLattice")

    def test_tolerance_environment(self):
        out = self.gen("env.json", "--seed", 3, "--conjugate")
        default = json.loads(run("verify", out, check_exit=0).stdout)
        loose = json.loads(run("verify", out, env={"HODGE_SIGMA_TOL": "1e-4"}, check_exit=0).stdout)
        self.assertGreater(loose["threshold"], default["threshold"])
        explicit = json.loads(run("verify", out, "--tol", "1e-8",
                                  env={"HODGE_SIGMA_TOL": "1e-4"}, check_exit=0).stdout)
        self.assertEqual(explicit["threshold"], default["threshold"])
        self.assert_error(run("verify", out, env={"HODGE_SIGMA_TOL": "abc"}), "InputError")


def main():
    global HODGE, SCHEMAS
    parser = argparse.ArgumentParser()
    parser.add_argument("--hodge", required=True)
    parser.add_argument("--schemas", required=True)
    args, rest = parser.parse_known_args()
    HODGE, SCHEMAS = args.hodge, args.schemas
    unittest.main(argv=[sys.argv[0], *rest], verbosity=2)


if __name__ == "__main__":
    main()
