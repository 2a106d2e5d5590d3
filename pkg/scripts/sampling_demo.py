"""Boson-sampling and IQP output distributions next to sampled frequencies."""

import argparse

import numpy as np

from qdesk import sampling as sp


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--modes", type=int, default=4)
    ap.add_argument("--photons", type=int, default=2)
    ap.add_argument("--qubits", type=int, default=3)
    ap.add_argument("--shots", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    u = sp.random_interferometer(args.modes, rng)
    dist = sp.boson_distribution(u, args.photons)
    counts = sp.sample_boson(u, args.photons, args.shots, rng)
    print("configuration,probability,frequency")
    for config, prob in dist.items():
        key = ",".join(map(str, config))
        print(f"({key}),{prob:.5f},{counts.get(key, 0) / args.shots:.5f}")

    c = sp.iqp_random(args.qubits, 1, 4 * args.qubits, rng)
    bits, probs = sp.iqp_sample(c, args.shots, rng)
    freqs = np.bincount([int(b, 2) for b in bits], minlength=probs.size) / args.shots
    print("\nbitstring,probability,frequency")
    for k, prob in enumerate(probs):
        print(f"{k:0{args.qubits}b},{prob:.5f},{freqs[k]:.5f}")


if __name__ == "__main__":
    main()
