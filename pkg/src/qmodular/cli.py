"""Command-line driver: ``qmod check|run|fmt|verify-examples``."""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from .dsl import DSLError, execute, parse, print_script
from .dsl.report import EXIT_ASSERTION, EXIT_OK, EXIT_PARSE, EXIT_RUNTIME
from .verify import summary, verify_examples


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _error(exc: DSLError, path: str) -> int:
    print(f"{path}:{exc}", file=sys.stderr)
    return exc.exit_code


def cmd_check(args) -> int:
    try:
        script = parse(_read(args.file))
    except DSLError as exc:
        return _error(exc, args.file)
    report = execute(script, args.truncation, queries=False)
    if report.error is not None:
        return _error(report.error, args.file)
    n_queries = len(script.statements) - report.definitions
    print(f"ok: {report.definitions} definitions, {n_queries} queries")
    return EXIT_OK


def cmd_run(args) -> int:
    try:
        script = parse(_read(args.file))
    except DSLError as exc:
        return _error(exc, args.file)
    report = execute(script, args.truncation)
    if args.json:
        sys.stdout.write(report.dumps(timing=not args.no_timing))
    else:
        sys.stdout.write(report.render_text())
    if report.error is not None:
        print(f"{args.file}:{report.error}", file=sys.stderr)
    return report.exit_code


def cmd_fmt(args) -> int:
    try:
        src = _read(args.file)
        text = print_script(parse(src))
    except DSLError as exc:
        return _error(exc, args.file)
    if args.check:
        if text != src:
            print(f"{args.file}: not in canonical form", file=sys.stderr)
            return EXIT_ASSERTION
        return EXIT_OK
    if args.in_place and args.file != "-":
        with open(args.file, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    results = verify_examples()
    summ = summary(results)
    if args.json:
        doc = {"schema": 1, "records": [r.to_json(not args.no_timing) for r in results], "summary": summ}
        sys.stdout.write(json.dumps(doc, indent=2, ensure_ascii=False) + "\n")
    else:
        width = max(len(r.name) for r in results)
        for r in results:
            print(f"{'PASS' if r.passed else 'FAIL'}  {r.name.ljust(width)}  {r.detail}")
        print(f"{summ['passed']}/{summ['total']} passed "
              f"({summ['formula_checks']} formula checks, {summ['corpus_checks']} corpus checks)")
    return EXIT_OK if summ["failed"] == 0 else EXIT_ASSERTION


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qmod", description="Modular classes of Q-manifolds, exactly.")
    p.add_argument("--truncation", type=int, default=None, metavar="N",
                   help="default truncation order for charts that do not set one")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="parse and evaluate definitions only")
    c.add_argument("file")
    c.set_defaults(func=cmd_check)

    r = sub.add_parser("run", help="run a script and report every query")
    r.add_argument("file")
    r.add_argument("--json", action="store_true", help="machine-readable report")
    r.add_argument("--no-timing", action="store_true", help="omit timing fields from JSON")
    r.set_defaults(func=cmd_run)

    f = sub.add_parser("fmt", help="print a script in canonical form")
    f.add_argument("file")
    f.add_argument("--check", action="store_true", help="exit 1 if the file is not canonical")
    f.add_argument("-i", "--in-place", action="store_true", help="rewrite the file")
    f.set_defaults(func=cmd_fmt)

    v = sub.add_parser("verify-examples", help="run the built-in formula checks and corpus")
    v.add_argument("--json", action="store_true", help="machine-readable report")
    v.add_argument("--no-timing", action="store_true", help="omit timing fields from JSON")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.truncation is not None and args.truncation < 1:
        print("--truncation must be at least 1", file=sys.stderr)
        return EXIT_PARSE
    try:
        return args.func(args)
    except OSError as exc:
        print(f"qmod: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
