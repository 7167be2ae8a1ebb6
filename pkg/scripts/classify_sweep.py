"""Vertex / simple-cycle pairing for small 1D alphabets and windows.

    python scripts/classify_sweep.py [--max-n 2] [--max-q 3] [--out sweep.json]
"""
import argparse
import json
import time

from marginals.errors import InstanceTooLarge
from marginals.onedim import classify_extreme_points

CASES = [("01", 0), ("01", 1), ("01", 2), ("012", 0), ("012", 1)]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-n", type=int, default=2)
    ap.add_argument("--max-q", type=int, default=3)
    ap.add_argument("--out")
    args = ap.parse_args()
    rows = []
    for alphabet, n in CASES:
        if n > args.max_n or len(alphabet) > args.max_q:
            continue
        t0 = time.perf_counter()
        try:
            rep = classify_extreme_points(alphabet, n)
        except InstanceTooLarge as e:
            print(f"q={len(alphabet)} n={n}: skipped ({e})")
            continue
        dt = time.perf_counter() - t0
        rows.append({k: rep[k] for k in ("alphabet", "n", "vertices", "orbits", "bijection")})
        print(f"q={len(alphabet)} n={n}: {rep['vertices']:4d} vertices, {rep['orbits']:4d} cycles, "
              f"bijection={rep['bijection']}  ({dt:.2f}s)")
    if args.out:
        with open(args.out, "w") as f:
            json.dump(rows, f, indent=2, sort_keys=True)


if __name__ == "__main__":
    main()
