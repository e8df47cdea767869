"""Witness values across the Kay family, written as CSV.

Columns: a, is_ppt, linear value at theta = pi/4, envelope value, paper-numbers value.
"""
import argparse
import csv
import math
import sys

import numpy as np

from bewit import ghz, witness
from bewit.reproduce import SPECS


def main():
    ap = argparse.ArgumentParser(description="Kay-family witness sweep")
    ap.add_argument("--a-min", type=float, default=2.0)
    ap.add_argument("--a-max", type=float, default=4.0)
    ap.add_argument("--points", type=int, default=41)
    ap.add_argument("--out", help="CSV path (default stdout)")
    args = ap.parse_args()

    spec = SPECS["kay"]
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["a", "is_ppt", "linear_pi4", "envelope", "paper_numbers"])
    for a in np.linspace(args.a_min, args.a_max, args.points):
        rho = ghz.kay(a)
        r = ghz.r_vector(rho)
        w.writerow([
            f"{a:.6g}",
            ghz.ppt_report(rho).is_ppt,
            f"{witness.linear_value(r, spec, math.pi / 4).value:.6g}",
            f"{witness.envelope_value(r, spec).value:.6g}",
            f"{witness.paper_nonlinear_value(r, spec).value:.6g}",
        ])
    if args.out:
        fh.close()


if __name__ == "__main__":
    main()
