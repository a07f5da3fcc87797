"""``rigiduality run FILE | check | repl``."""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources

from .parser import SessionSyntaxError, check_bindings, parse_session, parse_session_recover
from .session import Executor, Flags, format_record
from .suite import format_row, run_suite, select

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def load_schema():
    return json.loads(resources.files(__package__).joinpath("schema.json").read_text())


def report_json(records, flags):
    return {"version": 1, "seed": flags.seed,
            "flags": {"order": flags.order, "max_ext": flags.max_ext,
                      "fail_fast": flags.fail_fast},
            "records": [r.to_json() for r in records]}


def _flags(args):
    return Flags(order=args.order, max_ext=args.max_ext, seed=args.seed,
                 fail_fast=args.fail_fast, only=getattr(args, "only", None))


def _write_json(path, obj):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")


def cmd_run(args, out):
    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    try:
        session = parse_session(text)
    except SessionSyntaxError as exc:
        for d in exc.diagnostics:
            print(d.format(args.file), file=sys.stderr)
        return EXIT_USAGE
    flags = _flags(args)
    records = Executor(flags).run(session)
    for r in records:
        if r.kind == "command" or r.status == "error":
            print(format_record(r), file=out)
    if args.json:
        _write_json(args.json, report_json(records, flags))
    return EXIT_FAIL if any(r.status == "error" for r in records) else EXIT_OK


def cmd_check(args, out):
    try:
        select(args.only)
    except ValueError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    print("%-4s %2s  %-26s %8s  %s" % ("", "#", "check", "time", "detail"), file=out)
    rows = run_suite(only=args.only, seed=args.seed,
                     report=lambda r: print(format_row(r), file=out, flush=True))
    failed = sum(not r.passed for r in rows)
    print("%d/%d checks passed" % (len(rows) - failed, len(rows)), file=out)
    if args.json:
        _write_json(args.json, {"seed": args.seed, "checks": [r.to_json() for r in rows]})
    return EXIT_FAIL if failed else EXIT_OK


def cmd_repl(args, out, stdin=None):
    stdin = stdin or sys.stdin
    ex = Executor(_flags(args))
    interactive = stdin.isatty()
    buf = ""
    status = EXIT_OK
    while True:
        if interactive:
            out.write("... " if buf.strip() else "> ")
            out.flush()
        line = stdin.readline()
        if not line:
            break
        if line.strip() in (":quit", ":q"):
            break
        buf += line
        if ";" not in line:
            continue
        session, diags = parse_session_recover(buf)
        diags = [d for d in diags if d.kind != "binding"]
        if not diags:
            diags = check_bindings(session, known=ex.kinds)
        buf = ""
        if diags:
            for d in diags:
                print(d.format("<repl>"), file=out)
            continue
        for st in session.statements:
            rec = ex.execute(st)
            print(format_record(rec), file=out)
            if rec.status == "error":
                status = EXIT_FAIL
    return status


def build_parser():
    p = argparse.ArgumentParser(prog="rigiduality",
                                description="Rigid dualizing modules and traces of forms.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--order", choices=("grevlex", "lex"), default="grevlex",
                        help="monomial order for groebner output")
    common.add_argument("--max-ext", type=int, default=None, metavar="N",
                        help="truncation bound for squaring and Ext tables")
    common.add_argument("--seed", type=int, default=0, help="seed for isomorphism probing")
    common.add_argument("--json", metavar="PATH", help="write the full report as JSON")
    common.add_argument("--fail-fast", action="store_true", help="stop at the first error")
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", parents=[common], help="execute a session file")
    r.add_argument("file")
    c = sub.add_parser("check", parents=[common], help="run the verification suite")
    c.add_argument("--only", help="comma-separated check names, numbers or tags")
    sub.add_parser("repl", parents=[common], help="interactive session")
    return p


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    if args.max_ext is not None and args.max_ext < 0:
        print("error: --max-ext must be non-negative", file=sys.stderr)
        return EXIT_USAGE
    if args.command == "run":
        return cmd_run(args, out)
    if args.command == "check":
        return cmd_check(args, out)
    return cmd_repl(args, out)


if __name__ == "__main__":
    sys.exit(main())
