"""Compile a nested chain of frequency polytopes into word languages and check them.

    python scripts/compiler_demo.py [--den 4 3] [--full]

Each level is the segment between (1/den, 1 - 1/den) and its mirror; larger
denominators come first so every level sits inside the previous one.
"""
import argparse
import sys
from fractions import Fraction as F

from marginals.compiler import PolytopeChain, compile_languages, forbidden_list_for_level, parses_into, verify_language
from marginals.errors import InstanceTooLarge


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--den", type=int, nargs="+", default=[4, 3])
    ap.add_argument("--full", action="store_true")
    args = ap.parse_args()
    levels = [[(1, 0), (0, 1)]]
    for den in sorted(args.den, reverse=True):
        a = F(1, den)
        levels.append([(a, 1 - a), (1 - a, a)])
    chain = PolytopeChain.of(levels)
    try:
        langs = compile_languages(chain, full=args.full)
    except InstanceTooLarge as e:
        sys.exit(f"{e}; try fewer levels or drop --full")
    for i, (E, C) in enumerate(zip(langs, chain.levels)):
        parses = i == 0 or all(parses_into(w, langs[i - 1]) for w in E.words)
        shown = E.labels()[:8]
        more = " ..." if len(E.words) > 8 else ""
        print(f"level {i}: N={E.N} words={len(E.words)} verified={verify_language(E, C)} parses={parses}")
        print(f"  {' '.join(shown)}{more}")
    E = langs[-1]
    L = forbidden_list_for_level(E)
    good = E.labels()[0] * 3
    bad = E.alphabet.symbols[0] * (3 * E.N)
    print(f"length {3 * E.N}: {good[:24]}... forbidden={L.is_forbidden_label(good)}")
    print(f"length {3 * E.N}: {bad[:24]}... forbidden={L.is_forbidden_label(bad)}")


if __name__ == "__main__":
    main()
