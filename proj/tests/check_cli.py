#!/usr/bin/env python3
"""check_cli.py EXPECTED_EXIT [--stdin-config TEXT] [--expect SUBSTRING] -- EXE ARGS...

Runs the CLI, checks its exit code and optionally a substring of stdout+stderr.
--stdin-config writes TEXT to a temporary config file and substitutes it for @CFG@ in ARGS.
"""
import os
import subprocess
import sys
import tempfile

argv = sys.argv[1:]
sep = argv.index("--")
opts, cmd = argv[:sep], argv[sep + 1:]
expected = int(opts[0])
cfg_text = None
needle = None
i = 1
while i < len(opts):
    if opts[i] == "--stdin-config":
        cfg_text = opts[i + 1].replace("\\n", "\n")
    elif opts[i] == "--expect":
        needle = opts[i + 1]
    i += 2

path = None
if cfg_text is not None:
    fd, path = tempfile.mkstemp(suffix=".cfg")
    with os.fdopen(fd, "w") as f:
        f.write(cfg_text)
    cmd = [path if a == "@CFG@" else a for a in cmd]
try:
    out = subprocess.run(cmd, capture_output=True, text=True)
finally:
    if path:
        os.unlink(path)
text = out.stdout + out.stderr
print(text)
if out.returncode != expected:
    sys.exit(f"exit code {out.returncode}, expected {expected}")
if needle is not None and needle not in text:
    sys.exit(f"output lacks '{needle}'")
