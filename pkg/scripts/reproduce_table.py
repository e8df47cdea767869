"""Theoretical and simulated witness values for the five reference states.

    python scripts/reproduce_table.py --shots 100000 --seed 1 --noise depol2=0.02
"""
import argparse

from bewit import reproduce
from bewit.estimator import NoiseParams


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--shots", type=int, default=10_000, help="total shots per witness")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--noise", default="", help="depol1=..,depol2=..,readout=..")
    args = ap.parse_args()
    noise = NoiseParams.parse(args.noise)

    print(f"{'row':<22} {'state':<12} {'mode':<14} {'theory':>9} {'reported':>9} {'estimate':>17}  status")
    for g in reproduce.table_goldens():
        rec = reproduce.evaluate_golden(g, simulate=True, shots=args.shots, seed=args.seed, noise=noise)
        est = f"{rec.estimate['mean']:.4f}+/-{rec.estimate['stderr']:.4f}"
        print(f"{rec.group:<22} {rec.state:<12} {rec.mode:<14} {rec.theoretical:>9.4f} "
              f"{rec.expected:>9.4f} {est:>17}  {rec.status}")


if __name__ == "__main__":
    main()
