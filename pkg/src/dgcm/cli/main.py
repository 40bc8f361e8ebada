"""``dgcm`` command-line entry point."""

import argparse
import hashlib
import json
import os
import sys
from pathlib import Path

from .. import __version__
from ..fixtures import SESSIONS, fixture_names, fixture_text
from .dsl import DSLError, parse_session
from .runner import EXIT_PARSE, SessionError, exit_code, run_session, to_json, to_table

CACHE_ENV = "DGCM_CACHE_DIR"


def _load(target):
    """A session file path, or the name of a bundled fixture."""
    path = Path(target)
    if path.exists():
        return path.read_text(encoding="utf-8"), path.stem
    if target.lower() in SESSIONS:
        return fixture_text(target), target.lower()
    raise FileNotFoundError(target)


def _cache_path(text, name, bound, oracle):
    root = os.environ.get(CACHE_ENV)
    if not root:
        return None
    key = hashlib.sha256(f"{__version__}|{name}|{bound}|{oracle}|{text}".encode()).hexdigest()
    return Path(root) / f"{key}.json"


def cmd_run(args):
    try:
        text, name = _load(args.file)
    except FileNotFoundError:
        print(f"error: no such session file or fixture: {args.file}", file=sys.stderr)
        return EXIT_PARSE
    try:
        session = parse_session(text)
    except DSLError as e:
        print(f"{args.file}:{e.line}:{e.col}: parse error: {e.msg}", file=sys.stderr)
        return EXIT_PARSE
    mode = "table" if args.table else "json" if args.json else session.output
    cache = _cache_path(text, name, args.bound, args.oracle)
    if cache is not None and cache.exists():
        doc = json.loads(cache.read_text(encoding="utf-8"))
    else:
        try:
            doc = run_session(session, bound=args.bound, use_oracle=args.oracle, fixture=name)
        except SessionError as e:
            print(f"{args.file}:{e.line}: error: {e}", file=sys.stderr)
            return EXIT_PARSE
        if cache is not None:
            cache.parent.mkdir(parents=True, exist_ok=True)
            cache.write_text(to_json(doc), encoding="utf-8")
    out = to_table(doc) if mode == "table" else to_json(doc)
    if args.output:
        Path(args.output).write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)
    return exit_code(doc)


def cmd_fixtures(args):
    if args.action == "list":
        for n in fixture_names():
            print(f"{n:<8} {SESSIONS[n][0]}")
    else:
        if not args.name or args.name.lower() not in SESSIONS:
            print("error: give a fixture name", file=sys.stderr)
            return EXIT_PARSE
        sys.stdout.write(fixture_text(args.name))
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="dgcm", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="cmd", required=True)
    r = sub.add_parser("run", help="run a session file or bundled fixture")
    r.add_argument("file")
    r.add_argument("--bound", type=int, default=None, help="override the degree bound")
    g = r.add_mutually_exclusive_group()
    g.add_argument("--json", action="store_true", help="machine-readable output")
    g.add_argument("--table", action="store_true", help="human-readable table")
    r.add_argument("--oracle", action="store_true",
                   help="cross-check cohomology with the dense oracle")
    r.add_argument("-o", "--output", help="write the report to a file")
    r.set_defaults(fn=cmd_run)
    f = sub.add_parser("fixtures", help="bundled fixture sessions")
    f.add_argument("action", choices=["list", "show"])
    f.add_argument("name", nargs="?")
    f.set_defaults(fn=cmd_fixtures)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    if getattr(args, "bound", None) is not None and args.bound < 1:
        print("error: --bound must be at least 1", file=sys.stderr)
        return EXIT_PARSE
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
