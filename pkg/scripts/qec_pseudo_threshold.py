"""Logical error rate of the bit-flip code against the bare physical rate."""

import argparse
import csv
import sys

import numpy as np

from qdesk import qec


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--points", type=int, default=11)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    code = qec.bit_flip_code()
    out = csv.writer(sys.stdout)
    out.writerow(["p", "exact", "monte_carlo", "stderr", "beats_physical"])
    for p in np.linspace(0.0, 0.8, args.points):
        model = qec.PauliErrorModel(float(p))
        exact = qec.exact_logical_error_rate(code, model)
        est = qec.logical_error_rate(code, model, args.trials, rng)
        out.writerow([f"{p:.3f}", f"{exact:.6f}", f"{est.rate:.6f}", f"{est.stderr:.6f}", exact < p])
    # 3p^2 - 2p^3 = p has its nontrivial root at p = 1/2
    print("# encoding helps below p = 0.5", file=sys.stderr)


if __name__ == "__main__":
    main()
