#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Run the CLI on a small config and validate its summary and config echo against the shipped schemas."""
import argparse
import json
import os
import pathlib
import subprocess
import sys
import tempfile

import jsonschema
from referencing import Registry, Resource


def load(path):
    with open(path, encoding="utf-8") as f:
        return json.load(f)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--cli", required=True)
    ap.add_argument("--docs", required=True, type=pathlib.Path)
    args = ap.parse_args()

    config_schema = load(args.docs / "config.schema.json")
    summary_schema = load(args.docs / "summary.schema.json")
    registry = Registry().with_resources(
        [(s["$id"], Resource.from_contents(s)) for s in (config_schema, summary_schema)]
        + [("config.schema.json", Resource.from_contents(config_schema))]
    )
    for s in (config_schema, summary_schema):
        jsonschema.Draft202012Validator.check_schema(s)

    config = {
        "seed": 3,
        "scenario": {"M": 2, "N_B": 2, "N_E": 2},
        "domains": {"L_B": 2, "L_E": 3},
        "ao": {"randomization_count": 300, "max_iters": 4},
        "gda": {"init_randomization_count": 300, "max_iters": 4},
        "output": {"timing": True},
    }
    jsonschema.Draft202012Validator(config_schema).validate(config)

    failures = 0
    with tempfile.TemporaryDirectory() as tmp:
        cfg_path = pathlib.Path(tmp) / "config.json"
        cfg_path.write_text(json.dumps(config), encoding="utf-8")
        out = pathlib.Path(tmp) / "out"
        env = dict(os.environ, IRSSEC_LOG="off")
        subprocess.run([args.cli, "run-all", "--config", str(cfg_path), "--out", str(out)],
                       check=True, env=env, stdout=subprocess.DEVNULL)
        summary = load(out / "summary.json")
        validator = jsonschema.Draft202012Validator(summary_schema, registry=registry)
        for err in validator.iter_errors(summary):
            print(f"summary.json: {err.json_path}: {err.message}")
            failures += 1
        for name, s in summary["solvers"].items():
            for f in s["files"]:
                if not (out / f).is_file():
                    print(f"{name}: referenced file {f} missing")
                    failures += 1
            if s["status"] == "ok" and s["deliverable_secrecy_bps_hz"] != max(s["secrecy_rate_bps_hz"], 0.0):
                print(f"{name}: deliverable secrecy is not max(C_s, 0)")
                failures += 1
        # the echoed config is itself a valid config document
        for err in jsonschema.Draft202012Validator(config_schema).iter_errors(summary["config"]):
            print(f"config echo: {err.json_path}: {err.message}")
            failures += 1

    print("schema validation:", "FAIL" if failures else "PASS")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
