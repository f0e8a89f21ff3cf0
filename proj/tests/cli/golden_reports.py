"""Runs `csf verify` on the corpus scenes, validates each report against the schema and diffs it with
the stored golden report. Statuses, check ids and witness indices must match exactly; numbers match to a
relative tolerance."""

import argparse
import json
import math
import pathlib
import subprocess
import sys
import tempfile

import jsonschema

SCENES = ["bent_line", "circle", "perturbed_wedge", "random_wiggle", "spiral", "wedge", "zigzag"]
REL = 1e-6
ABS = 1e-12


def close(a, b):
    if a is None or b is None:
        return a is b
    return math.isclose(a, b, rel_tol=REL, abs_tol=ABS)


def diff(name, got, want):
    problems = []
    if [r["check_id"] for r in got] != [r["check_id"] for r in want]:
        return [f"{name}: check ids differ"]
    for g, w in zip(got, want):
        cid = g["check_id"]
        if g["status"] != w["status"]:
            problems.append(f"{name}/{cid}: status {g['status']} != {w['status']}")
        for key in ("max_violation", "tolerance"):
            if not close(g[key], w[key]):
                problems.append(f"{name}/{cid}: {key} {g[key]} != {w[key]}")
        gw, ww = g["witness"], w["witness"]
        if (gw is None) != (ww is None):
            problems.append(f"{name}/{cid}: witness presence differs")
        elif gw is not None:
            for key in ("v", "w", "node"):
                if gw[key] != ww[key]:
                    problems.append(f"{name}/{cid}: witness {key} {gw[key]} != {ww[key]}")
            for key in ("t", "psi"):
                if not close(gw[key], ww[key]):
                    problems.append(f"{name}/{cid}: witness {key} {gw[key]} != {ww[key]}")
    return problems


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--csf", required=True)
    ap.add_argument("--source", required=True)
    ap.add_argument("--update", action="store_true", help="rewrite the golden reports")
    args = ap.parse_args()
    src = pathlib.Path(args.source)
    schema = json.loads((src / "schemas" / "report.schema.json").read_text())
    golden_dir = src / "tests" / "golden"
    problems = []
    with tempfile.TemporaryDirectory() as tmp:
        for name in SCENES:
            out = pathlib.Path(tmp) / name
            proc = subprocess.run([args.csf, "verify", "--scene", str(src / "scenes" / f"{name}.json"), "--out", str(out)],
                                  capture_output=True, text=True)
            if proc.returncode != 0:
                problems.append(f"{name}: verify exited {proc.returncode}: {proc.stderr.strip()}")
                continue
            text = (out / "report.json").read_text()
            got = json.loads(text)
            try:
                jsonschema.validate(got, schema)
            except jsonschema.ValidationError as e:
                problems.append(f"{name}: schema: {e.message}")
                continue
            golden = golden_dir / f"{name}.report.json"
            if args.update:
                golden.write_text(text)
                continue
            problems += diff(name, got, json.loads(golden.read_text()))
            print(f"{name}: {len(got)} checks compared")
    for p in problems:
        print(p, file=sys.stderr)
    return 1 if problems else 0


if __name__ == "__main__":
    sys.exit(main())
