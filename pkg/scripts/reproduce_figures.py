#!/usr/bin/env python3
"""Regenerate the uncertainty-product profile data behind figures 1 and 2.

Writes three CSVs (schema: alpha,var_phi,var_lz,product,hr_bound,state_bound):

  fig1_exp.csv        exponential family, alpha in [0.05, 5], linear grid
  fig2_poly.csv       polynomial family, alpha in [1.6, 50], log grid
  fig2_exp.csv        exponential family on the same grid, for overlay

and prints the alpha where the exponential product crosses the hbar/2 line.
Plotting is left to downstream tools; the CSVs are deterministic.
"""

import argparse
import sys
from pathlib import Path

from unclab import exponential_family, find_bound_crossing
from unclab.cli import main as cli_main


def run(outdir: Path) -> int:
    outdir.mkdir(parents=True, exist_ok=True)
    jobs = [
        ("fig1_exp.csv", ["--family", "exp", "--min", "0.05", "--max", "5",
                          "--steps", "300", "--scale", "linear"]),
        ("fig2_poly.csv", ["--family", "poly", "--min", "1.6", "--max", "50",
                           "--steps", "160", "--scale", "log"]),
        ("fig2_exp.csv", ["--family", "exp", "--min", "1.6", "--max", "50",
                          "--steps", "160", "--scale", "log"]),
    ]
    for name, args in jobs:
        rc = cli_main(["sweep", *args, "--out", str(outdir / name)])
        if rc != 0:
            print(f"sweep for {name} failed with exit code {rc}", file=sys.stderr)
            return rc
    alpha = find_bound_crossing(exponential_family(), 0.5)
    print(f"exponential product crosses hbar/2 at alpha = {alpha:.6f}")
    return 0


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--outdir", type=Path, default=Path("figure_data"),
        help="directory for the CSV files (default: ./figure_data)",
    )
    sys.exit(run(parser.parse_args().outdir))
