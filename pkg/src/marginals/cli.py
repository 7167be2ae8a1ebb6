"""``marginal`` command line: one subcommand per pipeline, JSON in and out.

Exit codes: 0 ok, 2 size cap exceeded, 3 wrong dimension, 4 invalid input,
5 failed internal verification.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .compiler import PolytopeChain, WordLanguage, compile_languages, forbidden_list_for_level, verify_language
from .config import Caps, RunConfig
from .errors import InvalidInput, MarginalsError, VerificationFailure, WrongDimension
from .faces import ForbiddenSet, bounded_2d_periodic_search, face_of_forbidden, face_feasible, face_vertices
from .geometry import vertex_enumeration
from .invariance import MeasureVector, build_Iloc
from .onedim import chain_marginal, classify_extreme_points, markov_extension
from .patterns import Alphabet, PatternIndex
from .substitution import SubstitutionSystem, frequency_report, preset
from .tower import ROUTES, refinement_report

log = logging.getLogger("marginals")

CAP_FLAGS = {
    "patterns": "--cap-patterns",
    "generators": "--cap-generators",
    "constraints": "--cap-constraints",
    "language": "--cap-language",
    "vertex_route": "--cap-vertex-route",
    "d2_tower": "--cap-d2-tower",
    "torus": "--max-torus",
}


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise InvalidInput(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise InvalidInput(f"{path} is not valid JSON: {e}") from None


def _emit(obj, cfg: RunConfig) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)


def _masses(index: PatternIndex, v) -> dict:
    return {index.word(i): f"{x.numerator}/{x.denominator}" for i, x in enumerate(v) if x}


def _config(args) -> RunConfig:
    base: dict = {}
    if args.config:
        base = _load_json(args.config)
        if not isinstance(base, dict):
            raise InvalidInput("config file must hold a JSON object")
    caps = dict(base.get("caps", {}))
    for name, flag in CAP_FLAGS.items():
        val = getattr(args, flag.lstrip("-").replace("-", "_"))
        if val is not None:
            caps[name] = val
    try:
        return RunConfig(
            d=args.d if args.d is not None else int(base.get("d", 1)),
            n=args.n if args.n is not None else int(base.get("n", 1)),
            alphabet=Alphabet.of(args.alphabet if args.alphabet is not None else base.get("alphabet", "0,1")).symbols,
            caps=Caps(**caps),
            out=args.out if args.out is not None else base.get("out"),
        )
    except (TypeError, ValueError) as e:
        raise InvalidInput(f"bad configuration: {e}") from None


def cmd_polytope(cfg: RunConfig, args) -> int:
    H = build_Iloc(cfg.d, cfg.n, cfg.alphabet, cfg.caps)
    V = vertex_enumeration(H, cfg.caps)
    index = PatternIndex(cfg.d, cfg.n, cfg.alphabet, cfg.caps)
    _emit({
        "d": cfg.d, "n": cfg.n, "alphabet": list(cfg.alphabet),
        "patterns": [index.word(i) for i in range(index.size)],
        "hrep": H.to_json(),
        "vrep": V.to_json(),
        "measures": [_masses(index, v) for v in V.vertices],
    }, cfg)
    return 0


def cmd_classify(cfg: RunConfig, args) -> int:
    if cfg.d != 1:
        raise WrongDimension("classification by periodic orbits is one-dimensional")
    report = classify_extreme_points(cfg.alphabet, cfg.n, cfg.caps)
    _emit(report, cfg)
    return 0 if report["bijection"] else 5


def cmd_extend(cfg: RunConfig, args) -> int:
    if not args.measure:
        raise InvalidInput("extend needs --measure FILE")
    mu = MeasureVector.from_json(_load_json(args.measure), cfg.caps)
    if mu.index.d != 1:
        raise WrongDimension("Markov extensions exist only in dimension 1")
    chain = markov_extension(mu)
    ok = chain_marginal(chain, mu.index.n, cfg.caps) == mu
    _emit({"chain": chain.to_json(), "round_trip": ok}, cfg)
    if not ok:
        raise VerificationFailure("chain marginal differs from the input measure")
    return 0


def _forbidden(cfg: RunConfig, args) -> ForbiddenSet:
    if args.forbidden:
        obj = _load_json(args.forbidden)
        obj.setdefault("alphabet", list(cfg.alphabet))
        obj.setdefault("d", cfg.d)
        L = ForbiddenSet.from_json(obj)
    elif args.words is not None:
        L = ForbiddenSet.words([w for w in args.words.split(";") if w], cfg.alphabet)
    else:
        raise InvalidInput("face needs --forbidden FILE or --words W1;W2")
    if L.d != cfg.d:
        raise InvalidInput(f"forbidden set is {L.d}-dimensional but -d is {cfg.d}")
    return L


def cmd_face(cfg: RunConfig, args) -> int:
    L = _forbidden(cfg, args)
    F = face_of_forbidden(L, cfg.n, cfg.caps)
    index = PatternIndex(cfg.d, cfg.n, cfg.alphabet, cfg.caps)
    cert = face_feasible(L, cfg.n, cfg.caps)
    if not cert.verify(F.H):
        raise VerificationFailure("feasibility certificate failed to verify")
    out = {
        "d": cfg.d, "n": cfg.n, "alphabet": list(cfg.alphabet),
        "forbidden": L.to_json(),
        "zeroed": [index.word(i) for i in F.zeroed],
        "feasible": cert.feasible,
        "certificate": cert.to_json(),
    }
    if args.vertices or (cfg.d == 1 and not args.no_vertices):
        V = face_vertices(L, cfg.n, cfg.caps)
        out["vertices"] = [_masses(index, v) for v in V.vertices]
    if args.torus:
        hit = bounded_2d_periodic_search(L, args.torus, cfg.n, cfg.caps)
        out["torus"] = hit.to_json() if hit else f"no periodic configuration up to size {args.torus}"
    _emit(out, cfg)
    return 0


def cmd_project(cfg: RunConfig, args) -> int:
    k_max = args.k if args.k is not None else cfg.n + 1
    report = refinement_report(cfg.n, k_max, cfg.d, cfg.alphabet, cfg.caps, args.route)
    _emit({"d": cfg.d, "n": cfg.n, "alphabet": list(cfg.alphabet), "levels": report}, cfg)
    return 0


def cmd_compile(cfg: RunConfig, args) -> int:
    if not args.chain:
        raise InvalidInput("compile needs --chain FILE")
    chain = PolytopeChain.from_json(_load_json(args.chain))
    langs = compile_languages(chain, cfg.caps, full=args.full)
    verified = [verify_language(E, C) for E, C in zip(langs, chain.levels)]
    _emit({"alphabet": list(chain.alphabet.symbols), "levels": [E.to_json() for E in langs], "verified": verified}, cfg)
    return 0 if all(verified) else 5


def cmd_subst(cfg: RunConfig, args) -> int:
    if args.system:
        S = SubstitutionSystem.from_json(_load_json(args.system))
    else:
        S = preset(args.preset)
    report = frequency_report(S, args.mode, args.k)
    _emit(report, cfg)
    if "ratio" in report and args.print_ratio:
        sys.stderr.write(f"{report['ratio'].get('exact', report['ratio']['decimal'])}\n")
    return 0


def cmd_check_word(cfg: RunConfig, args) -> int:
    if not args.language or args.word is None:
        raise InvalidInput("check-word needs --language FILE and --word W")
    obj = _load_json(args.language)
    if "levels" in obj:  # output of compile: pick a level
        alphabet = obj.get("alphabet", list(cfg.alphabet))
        obj = obj["levels"][args.level]
    else:
        alphabet = obj.get("alphabet", list(cfg.alphabet))
    E = WordLanguage.from_json(obj, alphabet)
    pred = forbidden_list_for_level(E)
    _emit({"word": args.word, "N": E.N, "forbidden": pred.is_forbidden_label(args.word)}, cfg)
    return 0


COMMANDS = {
    "polytope": cmd_polytope,
    "classify": cmd_classify,
    "extend": cmd_extend,
    "face": cmd_face,
    "project": cmd_project,
    "compile": cmd_compile,
    "subst": cmd_subst,
    "check-word": cmd_check_word,
}


class _Parser(argparse.ArgumentParser):
    """Usage errors are invalid input (exit 4); exit 2 is reserved for size caps."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(4)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("-d", "--d", type=int, default=None, help="lattice dimension")
    common.add_argument("-n", "--n", type=int, default=None, help="window radius")
    common.add_argument("--alphabet", default=None, help="symbols, e.g. 0,1")
    common.add_argument("--out", default=None, help="output file (stdout if absent)")
    common.add_argument("--config", default=None, help="JSON config; flags override it")
    common.add_argument("--log-level", default="WARNING")
    for name, flag in CAP_FLAGS.items():
        common.add_argument(flag, type=int, default=None, help=f"cap on {name}")

    p = _Parser(prog="marginal", description="Exact marginal polytopes of shift-invariant measures.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("polytope", parents=[common], help="H- and V-representation of I_n^loc")
    sub.add_parser("classify", parents=[common], help="pair vertices with periodic orbits (d=1)")
    s = sub.add_parser("extend", parents=[common], help="Markov extension of a measure (d=1)")
    s.add_argument("--measure", help="measure JSON")
    s = sub.add_parser("face", parents=[common], help="face cut out by forbidden patterns")
    s.add_argument("--forbidden", help="forbidden set JSON")
    s.add_argument("--words", help="1D forbidden words separated by ';'")
    s.add_argument("--vertices", action="store_true", help="enumerate vertices (default in d=1)")
    s.add_argument("--no-vertices", action="store_true")
    s.add_argument("--torus", type=int, default=0, help="periodic search up to this torus size (d=2)")
    s = sub.add_parser("project", parents=[common], help="projected approximations of I_n")
    s.add_argument("--k", type=int, default=None, help="largest window radius (default n+1)")
    s.add_argument("--route", choices=ROUTES, default="auto")
    s = sub.add_parser("compile", parents=[common], help="compile a polytope chain into languages")
    s.add_argument("--chain", help="chain JSON")
    s.add_argument("--full", action="store_true", help="keep every admissible concatenation")
    s = sub.add_parser("subst", parents=[common], help="tile frequencies of a substitution")
    s.add_argument("--preset", default="penrose-robinson")
    s.add_argument("--system", help="system JSON {types, M}")
    s.add_argument("--mode", choices=("auto", "exact", "interval"), default="auto")
    s.add_argument("--k", type=int, default=25, help="inflation steps for the convergence check")
    s.add_argument("--print-ratio", action="store_true", help="also print the first ratio to stderr")
    s = sub.add_parser("check-word", parents=[common], help="is a word of length 3N forbidden?")
    s.add_argument("--language", help="language JSON {N, words} or compile output")
    s.add_argument("--level", type=int, default=-1)
    s.add_argument("--word")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=getattr(logging, str(args.log_level).upper(), logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = _config(args)
        return COMMANDS[args.command](cfg, args)
    except MarginalsError as e:
        sys.stderr.write(f"marginal {args.command}: {e}\n")
        return e.exit_code
    except (KeyError, IndexError, TypeError, ValueError) as e:
        sys.stderr.write(f"marginal {args.command}: invalid input: {e!r}\n")
        return 4


if __name__ == "__main__":
    sys.exit(main())
