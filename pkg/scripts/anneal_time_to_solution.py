"""Ground-state weight and time to 99% solution versus total anneal time."""

import argparse

from qdesk.optimize import (
    AnnealSchedule,
    anneal_evolve,
    encode_subset_sum,
    gap_scan,
    ising_terms,
    time_to_solution,
    transverse_field,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nums", type=int, nargs="+", default=[3, 5, 9])
    ap.add_argument("--target", type=int, default=14)
    ap.add_argument("--dt", type=float, default=0.01, help="Trotter step length")
    args = ap.parse_args()

    p = encode_subset_sum(args.nums, args.target)
    scan = gap_scan(transverse_field(p.n), ising_terms(p), 1e-3)
    print(f"# min gap {scan.min_gap:.4f} at s={scan.s_min:.3f}")
    print("tau,p_ground,tts99")
    for tau in (1, 2, 5, 10, 20, 50, 100):
        steps = max(1, round(tau / args.dt))
        _, prob = anneal_evolve(p, AnnealSchedule(float(tau), steps))
        print(f"{tau},{prob:.6f},{time_to_solution(prob, tau):.3f}")


if __name__ == "__main__":
    main()
