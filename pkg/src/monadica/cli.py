"""Command-line front end.

Exit codes: 0 success, 1 logical negative (refutation while validating, a
false check, a failed self-test), 2 bad usage or input.  Every command
ends its output with a ``SUMMARY:`` line.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from . import acceptance
from . import algebra as alg
from . import frames as fr
from . import semantics as sem
from .search import diagram_test
from .syntax import Logic, ParseError, parse, pretty
from .translate import TRANSLATIONS

OK, NEGATIVE, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _logic(text: str) -> Logic:
    try:
        return Logic.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _parse_formula(text: str, lang: Logic):
    try:
        return parse(text, lang)
    except ParseError as exc:
        raise UsageError(f"formula: {exc}") from None


def _load_frame(path: str, cls: Logic | None):
    frame, valuation = fr.parse_frame_file(_read(path))
    if cls is not None and cls is not frame.cls:
        frame = frame.retag(cls)
    fr.require_valid(frame, frame.cls)
    return frame, valuation


def _load_algebra(args) -> alg.FiniteAlgebra:
    if args.frame:
        frame, _ = _load_frame(args.frame, args.cls)
        return alg.complex_algebra(frame)
    if args.file:
        return alg.load_algebra(_read(args.file))
    raise UsageError("give --frame FILE or --file DUMP")


# -- commands ----------------------------------------------------------------------

def cmd_parse(args) -> int:
    f = _parse_formula(args.formula, args.lang)
    print(f"ast: {f!r}")
    print(f"pretty: {pretty(f)}")
    print(f"SUMMARY: parsed as {args.lang.value}")
    return OK


def cmd_translate(args) -> int:
    if args.via not in TRANSLATIONS:
        raise UsageError(f"--via: unknown translation {args.via!r}; "
                         f"choose from {', '.join(TRANSLATIONS)}")
    source, target, fn = TRANSLATIONS[args.via]
    if args.source is not source:
        raise UsageError(f"--via {args.via} translates from {source.value}, not {args.source.value}")
    out = fn(_parse_formula(args.formula, source))
    print(pretty(out))
    print(f"SUMMARY: {source.value} -> {target.value} via {args.via}")
    return OK


def cmd_check(args) -> int:
    frame, valuation = _load_frame(args.frame, args.cls)
    f = _parse_formula(args.formula, frame.cls)
    holds = sem.satisfies(frame, frame.cls, valuation, args.world, f)
    print("true" if holds else "false")
    print(f"SUMMARY: {'holds' if holds else 'fails'} at world {args.world}")
    return OK if holds else NEGATIVE


def _search(args) -> sem.Verdict:
    f = _parse_formula(args.formula, args.cls)
    fr.check_bound(args.max_n)
    verdict = sem.valid_up_to(args.cls, args.max_n, f, args.jobs)
    if not sem.reverify(verdict, args.cls, f):
        raise RuntimeError("countermodel failed to re-verify")
    return verdict


def cmd_valid(args) -> int:
    verdict = _search(args)
    if isinstance(verdict, sem.Valid):
        print(f"SUMMARY: valid, {verdict}")
        return OK
    print(verdict)
    print(fr.format_frame(verdict.frame, verdict.valuation, name="countermodel"), end="")
    print(f"# world {verdict.world}")
    print(f"SUMMARY: refuted on {verdict.frame.n} worlds at world {verdict.world}")
    return NEGATIVE


def cmd_refute(args) -> int:
    verdict = _search(args)
    if isinstance(verdict, sem.Valid):
        print(f"SUMMARY: no countermodel, {verdict}")
        return NEGATIVE
    print(fr.format_frame(verdict.frame, verdict.valuation, name="countermodel"), end="")
    print(f"# world {verdict.world}")
    print(f"SUMMARY: refuted on {verdict.frame.n} worlds at world {verdict.world}")
    return OK


def cmd_diagram(args) -> int:
    fr.check_bound(args.max_n)
    rep = diagram_test(args.samples, args.depth, args.max_n, seed=args.seed, jobs=args.jobs)
    print(rep.render(), end="")
    print(f"SUMMARY: {args.samples - rep.failures}/{args.samples} formulas commute")
    return OK if rep.ok else NEGATIVE


def cmd_algebra(args) -> int:
    a = _load_algebra(args)
    action = args.action
    if action == "complex":
        print(alg.dump_algebra(a), end="")
        print(f"SUMMARY: {a.kind.value} with {a.size} elements")
        return OK
    if action == "axioms":
        rep = alg.check_axioms(a)
        print(rep if not rep.ok else f"all {a.kind.value} axioms hold")
        print(f"SUMMARY: {'pass' if rep.ok else 'fail'}")
        return OK if rep.ok else NEGATIVE
    if action == "canonical":
        frame = alg.canonical_frame(a)
        print(fr.format_frame(frame, name="canonical"), end="")
        print(f"SUMMARY: {frame.n} prime filters")
        return OK
    if action == "stone":
        ok = alg.stone_check(a)
        print("true" if ok else "false")
        print(f"SUMMARY: stone map {'is' if ok else 'is not'} an isomorphism")
        return OK if ok else NEGATIVE
    # shrink
    seed = [int(x) for x in (args.seed_elements or "").replace(",", " ").split()]
    if not seed or any(not 0 <= x < a.size for x in seed):
        raise UsageError(f"--seed-elements: need element indices in 0..{a.size - 1}")
    small = alg.shrink(a, seed)
    print(alg.dump_algebra(small), end="")
    print(f"SUMMARY: shrunk {a.size} -> {small.size} elements")
    return OK


def cmd_selftest(args) -> int:
    text, ok = acceptance.run_suite(args.seed, args.deep, args.jobs,
                                    determinism=not args.skip_determinism)
    print(text, end="")
    return OK if ok else NEGATIVE


# -- argument parsing --------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="monadica", description=(
        "Model checker and countermodel search for MIPC, MS4, S4.t, TS4 and MS4.t."))
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("parse", help="parse a formula and print its tree")
    sp.add_argument("--lang", type=_logic, required=True)
    sp.add_argument("formula")
    sp.set_defaults(run=cmd_parse)

    sp = sub.add_parser("translate", help="apply a translation")
    sp.add_argument("--from", dest="source", type=_logic, required=True)
    sp.add_argument("--via", required=True, help=", ".join(TRANSLATIONS))
    sp.add_argument("formula")
    sp.set_defaults(run=cmd_translate)

    sp = sub.add_parser("check", help="evaluate a formula at a world of a frame file")
    sp.add_argument("--frame", required=True)
    sp.add_argument("--world", type=int, required=True)
    sp.add_argument("--class", dest="cls", type=_logic, default=None)
    sp.add_argument("formula")
    sp.set_defaults(run=cmd_check)

    for name, fn, helptext in (("valid", cmd_valid, "bounded validity"),
                               ("refute", cmd_refute, "search for a countermodel")):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("--class", dest="cls", type=_logic, required=True)
        sp.add_argument("--max-n", type=int, default=3)
        sp.add_argument("--jobs", type=int, default=1)
        sp.add_argument("formula")
        sp.set_defaults(run=fn)

    sp = sub.add_parser("diagram", help="compare the MIPC -> MS4T translation routes")
    sp.add_argument("--samples", type=int, default=100)
    sp.add_argument("--depth", type=int, default=3)
    sp.add_argument("--max-n", type=int, default=3)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--jobs", type=int, default=1)
    sp.set_defaults(run=cmd_diagram)

    sp = sub.add_parser("algebra", help="finite algebra tools")
    sp.add_argument("action", choices=("complex", "axioms", "canonical", "stone", "shrink"))
    sp.add_argument("--frame", help="frame file; its complex algebra is used")
    sp.add_argument("--class", dest="cls", type=_logic, default=None)
    sp.add_argument("--file", help="algebra dump")
    sp.add_argument("--seed-elements", help="element indices for shrink")
    sp.set_defaults(run=cmd_algebra)

    sp = sub.add_parser("selftest", help="run the acceptance battery")
    sp.add_argument("--deep", action="store_true", help="soundness up to 4 worlds")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--skip-determinism", action="store_true",
                    help="skip the rerun comparison (check 9)")
    sp.set_defaults(run=cmd_selftest)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        print("error: --jobs must be at least 1", file=sys.stderr)
        return USAGE
    try:
        return args.run(args)
    except (UsageError, ParseError, fr.FrameError, fr.BoundError, alg.AlgebraError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        print("SUMMARY: error")
        return USAGE


def run(argv: Sequence[str] | None = None) -> int:
    """Like :func:`main` but turns argparse exits into return codes."""
    try:
        return main(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE
