"""Project I_k^loc down to window n for k = n+1..k_max and report whether it shrinks.

    python scripts/tower_refinement.py [--n 1] [--k-max 3] [--alphabet 01] [--route auto]
"""
import argparse
import json
import time

from marginals.tower import refinement_report


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=1)
    ap.add_argument("--k-max", type=int, default=3)
    ap.add_argument("--alphabet", default="01")
    ap.add_argument("--route", default="auto", choices=("auto", "vertex", "oracle"))
    ap.add_argument("--out")
    args = ap.parse_args()
    t0 = time.perf_counter()
    rep = refinement_report(args.n, args.k_max, alphabet=tuple(args.alphabet), route=args.route)
    for r in rep:
        print(f"k={r['k']}: {r['vertex_count']} vertices, equal_to_previous={r['equal_to_previous']}, "
              f"nested={r['nested']}")
    print(f"total {time.perf_counter() - t0:.2f}s")
    if args.out:
        with open(args.out, "w") as f:
            json.dump(rep, f, indent=2, sort_keys=True)


if __name__ == "__main__":
    main()
