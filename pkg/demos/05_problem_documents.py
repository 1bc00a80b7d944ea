#!/usr/bin/env python3
"""Driving the command-line interface with problem documents.

Each run takes a JSON document (or flags), emits a JSON report on stdout
and a human-readable table on stderr, and exits 0 only for a mathematical
"yes".  Negative answers (not in the image, not a coboundary, no match)
are exit code 2 — they are results, not errors.  This script shells out
to `python3 -m prolim` the way a user would.
"""

import json
import subprocess
import sys
import tempfile


def run(argv, doc=None):
    cmd = [sys.executable, "-m", "prolim", *argv]
    if doc is not None:
        with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as fh:
            json.dump(doc, fh)
            path = fh.name
        cmd += ["--input", path]
    proc = subprocess.run(cmd, capture_output=True, text=True)
    report = json.loads(proc.stdout) if proc.stdout else None
    return proc.returncode, report, proc.stderr


def main():
    print("== solve: the alternating band target to depth 8 ==")
    depth = 8
    q = [1 - (k % 2) for k in range(depth)]
    doc = {
        "command": "solve",
        "field": "q",
        "depth": depth,
        "payload": {
            "map": "example1_field",
            "target": [[str(x) for x in q[:j]] for j in range(1, depth + 1)],
        },
    }
    code, report, err = run(["solve"], doc)
    print("exit code:", code, " status:", report["status"])
    cert = report["payload"]["certificate"]
    print("certificate depth:", cert["depth"], " ell:", cert["ell"])
    print("stderr table:")
    for line in err.strip().splitlines():
        print("   |", line)

    print()
    print("== verify: feed the emitted certificate back ==")
    verify_doc = {
        "command": "verify",
        "field": "q",
        "payload": {"map": "example1_field", "certificate": cert,
                    "target": doc["payload"]["target"]},
    }
    code, vreport, _ = run(["verify"], verify_doc)
    print("exit code:", code, " status:", vreport["status"])

    tampered = json.loads(json.dumps(verify_doc))
    tampered["payload"]["certificate"]["v"][3][0] = "7/2"
    code, vreport, _ = run(["verify"], tampered)
    print("after tampering with one entry:", code, vreport["status"])
    print("first failure:", vreport["payload"]["failures"][0])

    print()
    print("== cohom: dimensions for cyclic(2) over F_2 ==")
    doc = {"command": "cohom", "field": "fp:2",
           "payload": {"group": {"kind": "cyclic", "n": 2},
                       "representation": "trivial",
                       "task": "dims", "degree": 1}}
    code, report, _ = run(["cohom"], doc)
    print("exit code:", code, " dims:", report["payload"]["dims"])

    print()
    print("== counterexample: flags only, no document ==")
    code, report, _ = run(["counterexample", "--which", "example1",
                           "--q", "alternating", "--depth", "8", "--field", "z"])
    print("exit code:", code)
    print("min-norm column:",
          [row["value"] for row in report["payload"]["min_norm"]])

    code, report, _ = run(["counterexample", "--which", "example2",
                           "--t", "1/2", "--eps", "1/1000", "--bound", "1000"])
    print("density probe: exit", code, " pair:",
          (report["payload"]["m"], report["payload"]["n"]),
          " residual bound:", report["payload"]["residual_bound"])

    print()
    print("== negative answers are exit 2, input errors are exit 3 ==")
    code, report, _ = run(["counterexample", "--which", "example2",
                           "--t", "1/2", "--eps", "1/1000", "--bound", "60"])
    print("tiny bound, no match:", code, report["status"])
    code, report, _ = run(["cohom"], {"command": "solve", "field": "q",
                                      "payload": {}})
    print("document/subcommand mismatch:", code, report["status"])


if __name__ == "__main__":
    main()
