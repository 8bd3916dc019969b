#!/usr/bin/env python3
"""Run the CLI with --format json and validate its output against the schema."""
import json
import subprocess
import sys

import jsonschema

schema_path, exe, *args = sys.argv[1:]
with open(schema_path) as f:
    schema = json.load(f)
out = subprocess.run([exe, *args, "--format", "json"], capture_output=True, text=True)
if out.returncode != 0:
    sys.exit(f"{exe} exited with {out.returncode}: {out.stderr}")
doc = json.loads(out.stdout)
jsonschema.validate(doc, schema)
for row in doc["rows"]:
    if list(row) != doc["columns"]:
        sys.exit("row keys do not follow the column order")
print(f"{doc['command']}: {len(doc['rows'])} rows valid")
