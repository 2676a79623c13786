#!/usr/bin/env python3
"""Reproduce both grid-convergence tables and print them side by side
with the published reference deltas.  Writes the CSVs into ./out.
"""

import sys

from heatline.cli import main

if __name__ == "__main__":
    out_dir = sys.argv[1] if len(sys.argv) > 1 else "out"
    rc = main(["table", "uniform", "--out-dir", out_dir])
    rc = rc or main(["table", "two_zone", "--out-dir", out_dir])
    sys.exit(rc)
