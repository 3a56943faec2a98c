"""Runs the CLI on the sample inputs and validates every report against the
published JSON Schema. Also checks that two runs give identical bytes.

usage: check_reports.py ROOTFLOW_BINARY SCHEMA_DIR DATA_DIR
"""

import json
import subprocess
import sys
from pathlib import Path

import jsonschema


def commands(data: Path):
    return [
        ["roots", "--inline", "-1,0,1"],
        ["roots", str(data / "wilkinson5.json"), "--verify"],
        ["align", str(data / "unit_circle.json"), str(data / "unit_circle_shifted.json"), "--verify"],
        ["align", "--f-inline", "0,0,1", "--g-inline", "-1e-8,0,1"],
        ["lemma", str(data / "shift_deformation.json"), "--which", "1"],
        ["lemma", str(data / "shift_deformation.json"), "--which", "2"],
        ["lemma", str(data / "vanishing_leading.json"), "--which", "2"],
        ["lemma", str(data / "infinite_coefficient.json"), "--which", "1", "--points", "0,1"],
        ["continuity", "--inline", "0,0,1", "--eps-range", "-3:-2:3", "--seed", "11"],
        ["continuity", "--inline", "0,0,1", "--epsilons", "1e-9,1e-3", "--seed", "11"],
    ]


def main() -> int:
    binary, schema_dir, data = sys.argv[1], Path(sys.argv[2]), Path(sys.argv[3])
    schema = json.loads((schema_dir / "rootflow-1.schema.json").read_text())
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)

    failures = 0
    for args in commands(data):
        runs = [subprocess.run([binary, *args], capture_output=True, check=False) for _ in range(2)]
        label = " ".join(args)
        if runs[0].returncode != 0:
            print(f"FAIL {label}: exit {runs[0].returncode}: {runs[0].stderr.decode()}")
            failures += 1
            continue
        if runs[0].stdout != runs[1].stdout:
            print(f"FAIL {label}: output differs between runs")
            failures += 1
        errors = sorted(validator.iter_errors(json.loads(runs[0].stdout)), key=lambda e: e.path)
        for e in errors:
            print(f"FAIL {label}: {'/'.join(map(str, e.absolute_path))}: {e.message}")
        failures += bool(errors)
        if not errors:
            print(f"ok   {label}")
    # The schema must reject damaged reports.
    sample = json.loads(subprocess.run([binary, "roots", "--inline", "-1,0,1"], capture_output=True,
                                       check=True).stdout)
    for damage in (lambda r: r.pop("schema"), lambda r: r.update(schema="rootflow/0"),
                   lambda r: r["root_set"]["roots"][0].update(multiplicity=0)):
        broken = json.loads(json.dumps(sample))
        damage(broken)
        if validator.is_valid(broken):
            print("FAIL schema accepted a damaged report")
            failures += 1
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
