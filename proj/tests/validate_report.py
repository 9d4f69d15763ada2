"""Validate kgverify JSON reports against the published schema."""

import json
import subprocess
import sys

import jsonschema


def main() -> int:
    exe, schema_path = sys.argv[1], sys.argv[2]
    with open(schema_path, encoding="utf-8") as fh:
        schema = json.load(fh)
    runs = [
        ["verify"],
        ["verify", "--eps", "0.5"],
        ["sweep", "--test-fn", "builtin"],
        ["dimreg"],
        ["dimreg", "--dim", "2.5"],
        ["--eps", "0.01", "eval", "phi_dist", "0"],
    ]
    for args in runs:
        proc = subprocess.run([exe, *args, "--format", "json"], capture_output=True, text=True, check=False)
        if proc.returncode not in (0, 1):
            print(f"{args}: exit {proc.returncode}\n{proc.stderr}")
            return 1
        jsonschema.validate(json.loads(proc.stdout), schema)
        print(f"ok: {' '.join(args)}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
