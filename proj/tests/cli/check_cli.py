#!/usr/bin/env python3
"""End-to-end checks of the nkgeo driver: exit codes, schema validity, determinism."""

import argparse
import json
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema

FAILURES = []


def run(binary, args, out_dir, name):
    out = Path(out_dir) / f"{name}.json"
    proc = subprocess.run([binary, *args, "--out", str(out)], capture_output=True, text=True)
    return proc, out


def expect(cond, message):
    print(("PASS " if cond else "FAIL ") + message)
    if not cond:
        FAILURES.append(message)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("binary")
    parser.add_argument("schema")
    args = parser.parse_args()
    validator = jsonschema.Draft202012Validator(json.loads(Path(args.schema).read_text()))

    cases = [
        ("verify_sparling_tod", ["verify", "--potential", "sparling_tod.txt", "--n", "1", "--checks", "all"], 0),
        ("verify_einstein_fail", ["verify", "--potential", "y1^2*y2^2", "--checks", "einstein"], 1),
        ("verify_y1_quartic", ["verify", "--potential", "y1^4", "--checks", "einstein"], 0),
        ("verify_joyce", ["verify", "--potential", "joyce-sinh", "--checks", "joyce", "--points", "10"], 0),
        ("painleve_solvable", ["painleve", "--kind", "solvable", "--a", "0", "--b", "0", "--c", "0"], 0),
        ("painleve_I", ["painleve", "--kind", "I", "--t0", "0", "--t1", "0.8"], 0),
        ("painleve_II", ["painleve", "--kind", "II", "--alpha", "0"], 0),
        ("iso_pII", ["isomonodromy", "--case", "pII"], 0),
        ("iso_pI", ["isomonodromy", "--case", "pI"], 0),
        ("iso_solvable", ["isomonodromy", "--case", "solvable"], 0),
        ("examples", ["examples"], 0),
    ]
    usage = [
        ("parse_error", ["verify", "--potential", "x1+"]),
        ("bad_case", ["isomonodromy", "--case", "pIII"]),
        ("bad_group", ["verify", "--potential", "y1", "--checks", "bogus"]),
        ("asd_needs_n1", ["verify", "--potential", "flat", "--n", "2", "--checks", "asd"]),
        ("symbolic_alpha", ["painleve", "--kind", "II", "--alpha", "beta"]),
    ]

    with tempfile.TemporaryDirectory() as tmp:
        for name, argv, code in cases:
            proc, out = run(args.binary, argv, tmp, name)
            expect(proc.returncode == code, f"{name}: exit {proc.returncode}, expected {code} {proc.stderr.strip()}")
            if not out.exists():
                expect(False, f"{name}: no report written")
                continue
            doc = json.loads(out.read_text())
            errors = list(validator.iter_errors(doc))
            expect(not errors, f"{name}: schema " + (errors[0].message if errors else "valid"))
            expect(doc["pass"] == (code == 0), f"{name}: pass flag matches exit code")
            again, out2 = run(args.binary, argv, tmp, name + "_again")
            expect(out.read_bytes() == out2.read_bytes(), f"{name}: byte-identical rerun")

        _, out = run(args.binary, ["verify", "--potential", "y1^2*y2^2", "--checks", "einstein"], tmp, "witness")
        row = json.loads(out.read_text())["checks"][0]
        expect(row["witness"] is not None, "einstein failure carries a witness point")

        _, a = run(args.binary, ["verify", "--potential", "cubic-sd", "--checks", "sd", "--seed", "1"], tmp, "s1")
        _, b = run(args.binary, ["verify", "--potential", "cubic-sd", "--checks", "sd", "--seed", "2"], tmp, "s2")
        expect(a.read_bytes() != b.read_bytes(), "different seeds sample different points")

        for name, argv in usage:
            proc, _ = run(args.binary, argv, tmp, name)
            expect(proc.returncode == 2, f"{name}: exit {proc.returncode}, expected 2")

        proc, _ = run(args.binary, ["verify", "--potential", "1/(x1*y1)", "--checks", "structure", "--margin", "100"],
                      tmp, "exhausted")
        expect(proc.returncode == 3, f"sampling exhaustion: exit {proc.returncode}, expected 3")

        proc, _ = run(args.binary, ["painleve", "--kind", "I", "--t1", "10"], tmp, "pole")
        expect(proc.returncode == 4, f"pole: exit {proc.returncode}, expected 4")
        expect("near t =" in proc.stderr, "pole: reports the t where integration stopped")

        csv = Path(tmp) / "traj.csv"
        proc, _ = run(args.binary, ["painleve", "--kind", "I", "--trajectory", str(csv)], tmp, "traj")
        lines = csv.read_text().splitlines() if csv.exists() else []
        expect(len(lines) == 11 and lines[0].startswith("t,y,z"), "trajectory CSV has header plus 10 rows")

        proc = subprocess.run([args.binary, "isomonodromy", "--case", "pII", "--format", "csv"],
                              capture_output=True, text=True)
        expect(proc.stdout.startswith("name,pass,informational"), "CSV report header")

    print(f"{len(FAILURES)} failure(s)")
    return 1 if FAILURES else 0


if __name__ == "__main__":
    sys.exit(main())
