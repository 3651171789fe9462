"""Command-line front end: ``rsfkit check|normalize|translate|run|laws|crosscheck``."""

from __future__ import annotations

import argparse
import os
import sys

from . import equiv
from .errors import LayoutError, NotWellTyped, ParseError, RsfError
from .molholes import run_prog
from .rewrite import normalize_rsf, translate
from .syntax import parse_program, parse_row, render
from .typecheck import well_typed

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Usage(Exception):
    pass


def _default_seed() -> int:
    raw = os.environ.get("RSFKIT_SEED")
    if raw is None:
        return equiv.DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise _Usage(f"RSFKIT_SEED must be an integer, got {raw!r}") from None


def _load(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise _Usage(f"cannot read {path}: {e.strerror}") from None
    return parse_program(text)


def _require_typed(p) -> None:
    report = well_typed(p)
    if not report.ok:
        raise NotWellTyped(report.render())


def cmd_check(args) -> int:
    report = well_typed(_load(args.file))
    print(report.render())
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_normalize(args) -> int:
    print(render(normalize_rsf(_load(args.file).term)))
    return EXIT_OK


def cmd_translate(args) -> int:
    print(render(translate(_load(args.file))))
    return EXIT_OK


def cmd_run(args) -> int:
    p = _load(args.file)
    _require_typed(p)
    rows = []
    if args.inputs:
        try:
            with open(args.inputs, encoding="utf-8") as fh:
                lines = [ln for ln in fh.read().splitlines() if ln.strip()]
        except OSError as e:
            raise _Usage(f"cannot read {args.inputs}: {e.strerror}") from None
        for n, ln in enumerate(lines, 1):
            try:
                rows.append(parse_row(ln))
            except ParseError as e:
                raise ParseError(f"{args.inputs} row {n}: {e}", n, e.col) from None
    if p.k_in == 0:
        rows = [[] for _ in range(args.steps)]
    elif len(rows) < args.steps:
        raise _Usage(f"--steps {args.steps} exceeds the {len(rows)} input rows given")
    else:
        rows = rows[: args.steps]
    for out in run_prog(p, rows):
        print(" ".join(map(str, out)))
    return EXIT_OK


def cmd_laws(args) -> int:
    seed = _default_seed() if args.seed is None else args.seed
    ok = True
    for r in equiv.law_suite(args.samples, seed, args.steps):
        print(r.line())
        ok &= r.passed
    if args.negatives:
        for r in equiv.negative_suite(args.samples, seed):
            verdict = "REFUTED" if r.failures else "NOT-REFUTED"
            print(f"NEG {r.law_id} {verdict} tried={r.tried} counterexamples={len(r.failures)}")
            ok &= bool(r.failures) or r.tried == 0
    return EXIT_OK if ok else EXIT_FAIL


def cmd_crosscheck(args) -> int:
    seed = _default_seed() if args.seed is None else args.seed
    report = equiv.cross_check(_load(args.file), args.steps, args.samples, seed)
    print(report.line())
    for cx in report.failures:
        print(f"  seed={cx.seed} {cx.detail}")
    return EXIT_OK if report.passed else EXIT_FAIL


def _count(s: str) -> int:
    n = int(s)
    if n < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rsfkit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="type-check a program file")
    p.add_argument("file")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("normalize", help="print the normal form of the program term")
    p.add_argument("file")
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("translate", help="print the YampaCore translation")
    p.add_argument("file")
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("run", help="run a program, one output row per line")
    p.add_argument("file")
    p.add_argument("--steps", type=_count, required=True)
    p.add_argument("--inputs", help="file with one row of space-separated values per line")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("laws", help="run the sampled law catalog")
    p.add_argument("--samples", type=_count, default=100)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--steps", type=_count, default=50)
    p.add_argument("--negatives", action="store_true", help="also run the refutation checks")
    p.set_defaults(func=cmd_laws)

    p = sub.add_parser("crosscheck", help="compare a program with its translation")
    p.add_argument("file")
    p.add_argument("--steps", type=_count, default=50)
    p.add_argument("--samples", type=_count, default=5)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_crosscheck)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        return args.func(args)
    except (_Usage, ParseError, LayoutError) as e:
        print(f"rsfkit: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except NotWellTyped as e:
        print(e, file=sys.stderr)
        return EXIT_FAIL
    except RsfError as e:
        print(f"rsfkit: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
