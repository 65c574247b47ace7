#!/usr/bin/env python3
import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema

root = pathlib.Path(__file__).resolve().parent.parent
cli = sys.argv[1]
m = sys.argv[2] if len(sys.argv) > 2 else "5"
schemas = {p.name.split(".")[0]: json.loads(p.read_text()) for p in (root / "schemas").glob("*.schema.json")}


def check(name, doc):
    jsonschema.validate(doc, schemas[name])
    print(f"ok {name}")


with tempfile.TemporaryDirectory() as out:
    base = [cli, "-m", m, "--qmax", "4", "--export-dir", out]
    subprocess.run([cli, "domain"] + base[1:], check=True, capture_output=True)
    subprocess.run([cli, "homology"] + base[1:], check=True, capture_output=True)
    d = pathlib.Path(out)
    for name in ("gamma_complex", "floor_complex", "domain_summary", "homology"):
        check(name, json.loads((d / f"{name}.json").read_text()))
    for p in sorted(d.glob("pages_*.json")):
        check("pages", json.loads(p.read_text()))
    r = subprocess.run([cli, "verify", "-m", m, "--qmax", "4", "--json"], capture_output=True, text=True)
    check("verify", json.loads(r.stdout))
for p in sorted((root / "fixtures").glob("m*.json")):
    check("fixture", json.loads(p.read_text()))
