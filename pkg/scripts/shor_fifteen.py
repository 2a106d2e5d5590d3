"""Order finding and factoring of 15: power table, outcome peaks, CF candidates."""

import argparse

import numpy as np

from qdesk import shor


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--x", type=int, default=7)
    ap.add_argument("--t", type=int, default=8)
    ap.add_argument("--seeds", type=int, default=20)
    args = ap.parse_args()

    N = 15
    print("k | x^k mod N")
    for k, m in enumerate(shor.power_table(args.x, N, 8)):
        print(f"{k} | {m}")

    dist = shor.order_finding_distribution(args.x, N, args.t)
    print(f"\noutcomes with weight > 1e-9 (t={args.t}):")
    for k in np.flatnonzero(dist > 1e-9):
        r = shor.continued_fraction_r(int(k), 2**args.t, N)
        print(f"k={k:4d}  p={dist[k]:.6f}  candidate r={r}")

    attempts = []
    for seed in range(args.seeds):
        res = shor.factor(N, np.random.default_rng(seed))
        attempts.append(res.attempts)
        assert sorted(res.factors) == [3, 5]
    print(f"\nfactor(15) over {args.seeds} seeds: mean attempts {np.mean(attempts):.2f}, max {max(attempts)}")


if __name__ == "__main__":
    main()
