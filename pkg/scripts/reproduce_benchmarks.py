#!/usr/bin/env python3
"""Run both bundled benchmark scenarios, audit the outputs, print a summary.

Writes run directories under ./runs (or $FTMP_OUT_DIR) and exits nonzero if
any audit check fails.
"""
import sys

from ftmp.cli import main


def run():
    status = 0
    for label in ("example1", "example2"):
        rc = main(["run", "--scenario", label, "--seed", "1"])
        status = status or rc
        out = f"runs/{label}-seed1"
        rc = main(["audit", "--out", out])
        status = status or rc
        print()
    return status


if __name__ == "__main__":
    sys.exit(run())
