"""Run the CLI in JSON mode and validate each output against schema/."""
import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema
from referencing import Registry, Resource


def main() -> int:
    tool, schema_dir = sys.argv[1], pathlib.Path(sys.argv[2])
    schemas = {p.name: json.loads(p.read_text()) for p in schema_dir.glob("*.schema.json")}
    registry = Registry().with_resources(
        (name, Resource.from_contents(body)) for name, body in schemas.items()
    )
    with tempfile.TemporaryDirectory() as tmp:
        runs = [
            ("dims.schema.json", ["dims", "-d", "3", "-k", "5"], 0),
            ("dims.schema.json", ["dims", "-d", "5", "-k", "40", "--da", "3"], 0),
            ("check.schema.json", ["check", "--state", "werner:2:0.5", "-k", "2"], 0),
            ("check.schema.json", ["check", "--state", "werner:3:0.9", "-k", "3"], 1),
            ("check.schema.json", ["check", "--state", "werner:2:0.7", "-k", "3", "--max-iter", "5"], 1),
            ("werner-boundary.schema.json", ["werner-boundary", "-d", "2", "-k", "3"], 0),
            ("export.schema.json", ["export", "--state", "werner:2:0.6", "-k", "3", "--out", f"{tmp}/w.dat-s"], 0),
            ("density_matrix.schema.json", None, 0),
        ]
        failures = 0
        for schema_name, args, expected in runs:
            if args is None:
                document = {"dims": [2, 2], "data": [[0.25, 0.0] if i % 5 == 0 else [0.0, 0.0] for i in range(16)]}
            else:
                proc = subprocess.run([tool, *args, "--json"], capture_output=True, text=True)
                if proc.returncode != expected:
                    print(f"FAIL exit {proc.returncode} != {expected}: {args}\n{proc.stderr}")
                    failures += 1
                    continue
                document = json.loads(proc.stdout)
            validator = jsonschema.Draft202012Validator(schemas[schema_name], registry=registry)
            errors = list(validator.iter_errors(document))
            for e in errors:
                print(f"FAIL {schema_name} {args}: {e.message}")
            failures += bool(errors)
            if not errors:
                print(f"ok   {schema_name} {args}")
        labels = json.loads((pathlib.Path(tmp) / "w.labels.json").read_text())
        if len(labels["blocks"]) != 2:
            print("FAIL labels sidecar block count")
            failures += 1
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
