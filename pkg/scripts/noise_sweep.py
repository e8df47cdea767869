"""How two-qubit depolarizing noise erodes the detected violation.

For each category instance the fixed-angle witness is estimated at several
depol2 levels and averaged over seeds.
"""
import argparse

import numpy as np

from bewit import ghz
from bewit.estimator import NoiseParams, estimate_witness
from bewit.reproduce import CATEGORY_THETA, SPECS


def main():
    ap = argparse.ArgumentParser(description="witness estimate versus depol2")
    ap.add_argument("--levels", default="0,0.005,0.01,0.02,0.05")
    ap.add_argument("--shots", type=int, default=50_000)
    ap.add_argument("--seeds", type=int, default=5)
    args = ap.parse_args()
    levels = [float(v) for v in args.levels.split(",")]

    print(f"{'state':<10}" + "".join(f"{f'p2={p:g}':>12}" for p in levels))
    for cat in (1, 2, 3):
        state = ghz.category_state(cat)
        row = []
        for p in levels:
            means = [
                estimate_witness(state, SPECS[f"cat{cat}"], "fixed", args.shots, seed,
                                 NoiseParams(depol2=p), CATEGORY_THETA[cat]).mean
                for seed in range(args.seeds)
            ]
            row.append(np.mean(means))
        print(f"{f'cat{cat}':<10}" + "".join(f"{v:>12.4f}" for v in row))


if __name__ == "__main__":
    main()
