"""Command line entry point: ``abelcert <subcommand>``.

Exit status: 0 verified, 1 verification failure, 2 operational error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__, calculus
from .lemmas import LemmaInconsistency, LemmaPreconditionError, descent_chain, fixed_point_levels, property_fuzz
from .morphism import (
    DEFAULT_IMAGE0,
    WIDE_SEED,
    MorphismError,
    ResourceLimitError,
    UniformCyclicMorphism,
    fixed_point_prefix_of_seed,
)
from .pipeline import (
    DigestMismatch,
    PipelineConfig,
    emit_certificate,
    replay_certificate,
    run_verify_paper,
    word_digest,
)
from .rational import format_fraction, parse_fraction
from .scanner import AbelianWitness, ScanConfig, scan
from .words import Word

log = logging.getLogger("abelcert")

EXIT_OK, EXIT_FAILED, EXIT_ERROR = 0, 1, 2


def _fraction(text: str) -> Fraction:
    try:
        return parse_fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from exc


def _show(x: Fraction) -> str:
    return f"{format_fraction(x)} ~ {calculus.decimal(x)}"


def _morphism(args) -> UniformCyclicMorphism:
    return UniformCyclicMorphism.from_image(args.image0, args.alphabet_size)


def _host(args) -> Word:
    if getattr(args, "input", None):
        return Word.parse(Path(args.input).read_text(), args.alphabet_size)
    if getattr(args, "t", None) is None:
        raise ValueError("give either --in <path> or --t <int>")
    seed = WIDE_SEED if getattr(args, "wide", False) else args.seed
    return fixed_point_prefix_of_seed(_morphism(args), seed, args.t)


def cmd_gen(args) -> int:
    w = _host(args)
    Path(args.out).write_text(w.to_text())
    log.info("wrote %d letters to %s (sha256 %s)", len(w), args.out, word_digest(w))
    return EXIT_OK


def cmd_scan(args) -> int:
    host = _host(args)
    threshold = args.threshold
    if args.mode == "violations" and threshold is None:
        raise ValueError("--mode violations needs --threshold")
    cfg = ScanConfig(cap=args.cap, threshold=threshold, period_limit=args.period_limit,
                     parallelism=args.workers)
    result = scan(host, cfg, want_max=args.mode == "max",
                  want_violations=args.mode == "violations")
    report = {
        "word": {"length": len(host), "sha256": word_digest(host)},
        "config": {"cap": cfg.cap, "period_limit": cfg.period_limit,
                   "threshold": format_fraction(threshold) if threshold is not None else None},
        "mode": args.mode,
    }
    status = EXIT_OK
    if args.mode == "max":
        best = result.best
        report["max_witness"] = best.to_dict() if best else None
        print(f"max exponent: {_show(best.exponent)} at {best.to_dict()}" if best
              else "no Abelian power found")
    else:
        report["violations"] = [w.to_dict() for w in result.violations]
        print(f"{len(result.violations)} witnesses above {format_fraction(threshold)}")
        if result.violations:
            status = EXIT_FAILED
    Path(args.report).write_text(json.dumps(report, indent=2) + "\n")
    return status


def cmd_bound(args) -> int:
    inputs = calculus.BoundInputs(args.n, args.c)
    k, r = calculus.geometric_parameters(inputs.n)
    print(f"k = {_show(k)}")
    print(f"r = {_show(r)}")
    print(f"k/(1-r) = {_show(calculus.simplify_bound_term(inputs.n))}")
    print(f"bound = {_show(calculus.bound(inputs))}")
    return EXIT_OK


def cmd_depth(args) -> int:
    d = calculus.depth(args.length)
    print(f"iterates: {' -> '.join(map(str, d.iterates))}")
    print(f"t_min = {d.t_min}, prefix length {d.prefix_length}")
    default_t = calculus.search_depth(args.length)
    print(f"t = {default_t} valid: {d.is_valid(default_t)}")
    return EXIT_OK


def cmd_cap(args) -> int:
    u = calculus.length_cap(args.threshold, args.max_x1)
    exact = args.threshold * args.max_x1 / (args.threshold - 1)
    print(f"|X1 Y X2| < {u}  (threshold*max_x1/(threshold-1) = {_show(exact)})")
    return EXIT_OK


def cmd_descend(args) -> int:
    f = _morphism(args)
    levels = fixed_point_levels(f, args.t)
    w = AbelianWitness(args.start, args.m, args.p)
    chain = descent_chain(f, levels, w, args.n)
    if not chain:
        print(f"|X1| = {w.m} <= {format_fraction(calculus.slack(f.length) * args.n)}; nothing to descend")
    for level, step in enumerate(chain):
        print(json.dumps({"level": args.t - level - 1, **step.summary()}))
    return EXIT_OK


def cmd_props(args) -> int:
    report = property_fuzz(_morphism(args), t=args.t, samples=args.samples, seed=args.rng_seed)
    print(f"pairs checked: {report.pairs}")
    print(f"|delta| <= 1 failures: {report.delta_failures}")
    print(f"surplus-letter marker failures: {report.lemma1_failures} "
          f"(of {report.lemma1_checked} pairs with unequal preimage counts)")
    print(f"hat selection failures: {report.hat_failures}")
    print("cases: " + ", ".join(f"{k}={v}" for k, v in report.cases.items()))
    for failure in report.failures[:20]:
        print(f"FALSIFICATION CANDIDATE: {failure}")
    return EXIT_OK if report.ok else EXIT_FAILED


def cmd_verify_paper(args) -> int:
    cfg = PipelineConfig(t=args.t, cap=args.cap, threshold=args.threshold, seed=args.seed,
                         wide=args.wide, n_values=tuple(args.n) if args.n else PipelineConfig.n_values,
                         workers=args.workers, image0=args.image0, alphabet_size=args.alphabet_size)
    cert = run_verify_paper(cfg)
    emit_certificate(cert, args.out)
    w = cert.max_witness
    print(f"status: {cert.status}")
    if w:
        print(f"max exponent {w['exponent']} ~ {w['exponent_decimal']} "
              f"(start={w['start']}, m={w['m']}, p={w['p']})")
    print(f"violations above {cert.scan['threshold']}: {cert.violations['count']}")
    for b in cert.bounds:
        print(f"bound(n={b['n']}) = {b['bound']['exact']} ~ {b['bound']['decimal']}")
    if cert.published_bound_check["discrepancy"]:
        print(f"note: n={cert.published_bound_check['stated_n']} gives {cert.published_bound_check['stated_n_value']}, "
              f"the published {cert.published_bound_check['published_fraction']} comes from "
              f"n in {cert.published_bound_check['reproduced_by_n']}")
    for c in cert.checks:
        if not c["passed"]:
            print(f"FAILED {c['name']}: {c['detail']}")
    log.info("certificate written to %s", args.out)
    return EXIT_OK if cert.verified else EXIT_FAILED


def cmd_replay(args) -> int:
    host = _host(args)
    ok = replay_certificate(args.cert, host)
    print("replay: ok" if ok else "replay: FAILED")
    return EXIT_OK if ok else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--workers", type=int, default=argparse.SUPPRESS)
    common.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="abelcert", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--workers", type=int, default=1, help="scanner threads")
    parser.add_argument("--quiet", action="store_true", help="only print results and errors")
    parser.add_argument("--image0", default=DEFAULT_IMAGE0, help="image of letter 0")
    parser.add_argument("--alphabet-size", type=int, default=8)
    sub = parser.add_subparsers(dest="command", required=True)

    def word_source(p, require=False):
        p.add_argument("--in", dest="input", help="word file")
        p.add_argument("--t", type=int, required=require, help="iterate the morphism t times")
        p.add_argument("--seed", default="0", help="seed word for --t")
        p.add_argument("--wide", action="store_true", help=f"use the seed {WIDE_SEED}")

    p = sub.add_parser("gen", parents=[common], help="write f^t(seed) to a word file")
    word_source(p, require=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("scan", parents=[common], help="search a word for Abelian powers")
    word_source(p)
    p.add_argument("--cap", type=int, required=True)
    p.add_argument("--threshold", type=_fraction)
    p.add_argument("--period-limit", type=int)
    p.add_argument("--mode", choices=("max", "violations"), default="max")
    p.add_argument("--report", required=True)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("bound", parents=[common], help="evaluate c + k/(1-r)")
    p.add_argument("--n", type=_fraction, required=True)
    p.add_argument("--c", type=_fraction, required=True)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("depth", parents=[common], help="iterate g down to 2")
    p.add_argument("--length", type=int, required=True)
    p.set_defaults(func=cmd_depth)

    p = sub.add_parser("cap", parents=[common], help="total-length cap for a threshold")
    p.add_argument("--threshold", type=_fraction, required=True)
    p.add_argument("--max-x1", type=int, required=True)
    p.set_defaults(func=cmd_cap)

    p = sub.add_parser("descend", parents=[common], help="descend a witness of f^t(0)")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--start", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--n", type=_fraction, default=Fraction(999, 24))
    p.set_defaults(func=cmd_descend)

    p = sub.add_parser("props", parents=[common], help="fuzz the preimage lemmas on f^t(0)")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--t", type=int, default=4)
    p.add_argument("--rng-seed", type=int, default=0)
    p.set_defaults(func=cmd_props)

    p = sub.add_parser("verify-paper", parents=[common], help="full reproduction run with certificate")
    p.add_argument("--t", type=int, default=5)
    p.add_argument("--cap", type=int, default=1000)
    p.add_argument("--threshold", type=_fraction, default=Fraction(1713, 1000))
    p.add_argument("--seed", default="0")
    p.add_argument("--wide", action="store_true")
    p.add_argument("--n", type=_fraction, action="append", help="bound parameter (repeatable)")
    p.add_argument("--out", default="certificate.json")
    p.set_defaults(func=cmd_verify_paper)

    p = sub.add_parser("replay", parents=[common], help="re-check a certificate against a word")
    p.add_argument("--cert", required=True)
    word_source(p)
    p.set_defaults(func=cmd_replay)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except DigestMismatch as exc:
        print(f"error: wrong word: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except LemmaInconsistency as exc:
        print(f"FALSIFICATION CANDIDATE: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except (ResourceLimitError, MemoryError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (ValueError, MorphismError, LemmaPreconditionError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
