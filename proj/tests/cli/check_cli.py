"""Corpus, negative-case and report-schema checks for the cartalg command line tool."""

import json
import subprocess
import sys
from pathlib import Path

import jsonschema

EXPECTED_CHECK_EXIT = {"ellipsoid": 1}


def run(tool, *args):
    proc = subprocess.run([tool, *args], capture_output=True, text=True, timeout=600)
    return proc.returncode, proc.stdout


def main():
    tool, data = sys.argv[1], Path(sys.argv[2])
    spec_schema = json.loads((data / "schema" / "geometry_spec.schema.json").read_text())
    report_schema = json.loads((data / "schema" / "report.schema.json").read_text())
    for s in (spec_schema, report_schema):
        jsonschema.Draft202012Validator.check_schema(s)
    spec_v = jsonschema.Draft202012Validator(spec_schema)
    report_v = jsonschema.Draft202012Validator(report_schema)
    failures = []

    def expect(cond, msg):
        if not cond:
            failures.append(msg)

    corpus = sorted((data / "corpus").glob("*.json"))
    expect(len(corpus) == 9, f"expected 9 corpus files, found {len(corpus)}")
    for f in corpus:
        doc = json.loads(f.read_text())
        errs = [e.message for e in spec_v.iter_errors(doc)]
        expect(not errs, f"{f.name}: schema errors {errs}")
        for cmd, want in (("validate", 0), ("check", EXPECTED_CHECK_EXIT.get(f.stem, 0))):
            code, out = run(tool, cmd, str(f))
            expect(code == want, f"{f.name} {cmd}: exit {code}, expected {want}")
            report = json.loads(out)
            errs = [e.message for e in report_v.iter_errors(report)]
            expect(not errs, f"{f.name} {cmd}: report schema errors {errs}")
            again = run(tool, cmd, str(f))[1]
            expect(out == again, f"{f.name} {cmd}: report is not byte-stable")
        if f.stem == "ellipsoid":
            report = json.loads(run(tool, "check", str(f), "--pipeline", "riemann")[1])
            expect("witness" in report["checks"][0], "ellipsoid: failing riemann check has no witness")

    expected = json.loads((data / "negative" / "expected.json").read_text())
    for name, exp in sorted(expected.items()):
        f = data / "negative" / f"{name}.json"
        doc = json.loads(f.read_text())
        schema_ok = spec_v.is_valid(doc)
        expect(schema_ok == exp["schema"], f"{name}: schema validity {schema_ok}, expected {exp['schema']}")
        code, out = run(tool, exp["command"], str(f))
        expect(code == exp["exit"], f"{name}: exit {code}, expected {exp['exit']}")
        report = json.loads(out)
        expect(report_v.is_valid(report), f"{name}: error report does not match the report schema")
        expect(report.get("error", {}).get("path") == exp["path"],
               f"{name}: error path {report.get('error', {}).get('path')!r}, expected {exp['path']!r}")
        if "validate_exit" in exp:
            code, _ = run(tool, "validate", str(f))
            expect(code == exp["validate_exit"], f"{name}: validate exit {code}, expected {exp['validate_exit']}")

    code, out = run(tool, "holonomy", str(data / "corpus" / "sphere.json"), "--point", "1.2", "0.7",
                    "--plane", "th", "ph", "--side", "0.01")
    expect(code == 0, f"sphere holonomy: exit {code}")
    expect(report_v.is_valid(json.loads(out)), "holonomy report does not match the report schema")
    code, _ = run(tool, "holonomy", str(data / "corpus" / "sphere.json"), "--point", "2.49", "0.7",
                  "--plane", "0", "1", "--side", "0.1")
    expect(code == 2, f"holonomy loop outside the box: exit {code}, expected 2")
    code, out = run(tool, "--seed", "3", "--samples", "8", "--timing", "check", str(data / "corpus" / "sphere.json"))
    report = json.loads(out)
    expect(code == 0 and report["seed"] == 3 and "elapsed_ms" in report["checks"][0], "flags --seed/--timing ignored")

    for msg in failures:
        print("FAIL:", msg)
    print(f"{len(failures)} failure(s)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
