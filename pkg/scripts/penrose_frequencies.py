"""Exact tile frequencies of a substitution and the convergence of iterated counts.

    python scripts/penrose_frequencies.py [--preset penrose-robinson] [--k 30]
"""
import argparse
from fractions import Fraction as F

from marginals.substitution import frequency_ratio, iterate_counts, perron_frequencies, preset


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--preset", default="penrose-robinson")
    ap.add_argument("--k", type=int, default=30)
    args = ap.parse_args()
    S = preset(args.preset)
    fr = perron_frequencies(S)
    print(f"mode={fr.mode} perron root={fr.perron_root}")
    for t, v in zip(S.types, fr.values):
        print(f"  {t}: {v}")
    r = frequency_ratio(S, S.types[0], S.types[1], fr)
    print(f"ratio {S.types[0]}/{S.types[1]} = {r} ~ {r.decimal()}")
    target = F(int(r.decimal(40).replace(".", "")), 10**40)
    seed = (1,) + (0,) * (len(S.types) - 1)
    for k, c in enumerate(iterate_counts(S, seed, args.k), 1):
        if k % 5 == 0:
            print(f"  k={k:3d} counts={c} |ratio - exact| ~ {float(abs(F(c[0], c[1]) - target)):.3e}")


if __name__ == "__main__":
    main()
