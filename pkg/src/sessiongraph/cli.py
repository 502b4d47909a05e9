"""Command line entry point.

Every option can also be set through the environment: ``--bots-db`` reads
``SESSIONGRAPH_BOTS_DB``, ``--cutoff`` reads ``SESSIONGRAPH_CUTOFF`` and so
on. Explicit flags win over the environment.

Exit status: 0 on success, 1 for usage errors, 2 for data or I/O errors.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys

from . import __version__, jsonio, pipeline
from .errors import ConfigError, SessionGraphError
from .logparse import DEFAULT_FORMAT
from .sessionizer import DEFAULT_CUTOFF

ENV_PREFIX = "SESSIONGRAPH_"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _positive_int(text):
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _apply_env(parser: argparse.ArgumentParser) -> None:
    for action in parser._actions:
        long_opts = [o for o in action.option_strings if o.startswith("--")]
        if not long_opts or action.dest == "help":
            continue
        env = ENV_PREFIX + long_opts[0][2:].replace("-", "_").upper()
        if env not in os.environ:
            continue
        raw = os.environ[env]
        if isinstance(action, argparse._StoreTrueAction):
            value = raw.strip().lower() in ("1", "true", "yes", "on")
        elif action.nargs in ("*", "+"):
            value = raw.replace(",", " ").split()
        else:
            try:
                value = action.type(raw) if action.type else raw
            except (ValueError, argparse.ArgumentTypeError) as exc:
                raise UsageError(f"{env}: {exc}") from None
        action.default = value
        action.required = False


def _add_run_options(p):
    p.add_argument("--format", default=DEFAULT_FORMAT,
                   help="log layout: preset (common, combined, combined-ip, proxy) or token string")
    p.add_argument("--bots-db", default=None, help="robot signature file ([ua]/[ip] sections)")
    p.add_argument("--cutoff", type=_positive_int, default=DEFAULT_CUTOFF, help="session gap cutoff in seconds")
    p.add_argument("--strip-query", action="store_true", help="drop query strings from resource paths")
    p.add_argument("--xmin", default="auto", help="'auto' or a fixed integer cut-off")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--export", nargs="*", default=list(pipeline.DEFAULT_EXPORTS),
                   choices=pipeline.EXPORTS, help="flat-file exports to write")
    p.add_argument("--top-k", type=_positive_int, default=5000,
                   help="node count of the high-degree subgraph exported with graphml")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sessiongraph", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="full pipeline, writes report.json")
    p.add_argument("inputs", nargs="+", help="log files or glob patterns")
    p.add_argument("--out", default="out")
    _add_run_options(p)

    p = sub.add_parser("parse", help="log files -> records.jsonl")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--format", default=DEFAULT_FORMAT)
    p.add_argument("--out", default="out")

    p = sub.add_parser("split", help="records.jsonl -> human/ and robot/ records")
    p.add_argument("--records", required=True)
    p.add_argument("--bots-db", default=None)
    p.add_argument("--out", default="out")

    p = sub.add_parser("sessionize", help="records.jsonl -> sessions.jsonl, sessions.csv, summary.json")
    p.add_argument("--records", required=True)
    p.add_argument("--cutoff", type=_positive_int, default=DEFAULT_CUTOFF)
    p.add_argument("--strip-query", action="store_true")
    p.add_argument("--out", required=True)

    p = sub.add_parser("graph", help="sessions.jsonl -> nodes.csv, edges.csv, graph.json")
    p.add_argument("--sessions", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("fit", help="degree CSV -> fit_<direction>.json, freq_<direction>.csv")
    p.add_argument("--degrees", required=True, help="nodes.csv or any CSV with a 'degree' column")
    p.add_argument("--direction", choices=pipeline.DIRECTIONS, default="in")
    p.add_argument("--xmin", default="auto")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("compare", help="degree CSV + fit JSON -> compare_<direction>.csv/json")
    p.add_argument("--degrees", required=True)
    p.add_argument("--fits", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("export", help="assemble report.json (and graphml) from a work directory")
    p.add_argument("--workdir", required=True)
    p.add_argument("--export", nargs="*", default=[], choices=pipeline.EXPORTS)
    p.add_argument("--top-k", type=_positive_int, default=5000)

    for sp in sub.choices.values():
        _apply_env(sp)
    _apply_env(parser)
    return parser


def _dispatch(args) -> object:
    norm = "strip-query" if getattr(args, "strip_query", False) else "verbatim"
    if args.command == "run":
        config = pipeline.RunConfig(
            inputs=args.inputs, out_dir=args.out, log_format=args.format, bots_db=args.bots_db,
            cutoff=args.cutoff, normalization=norm, xmin=args.xmin, seed=args.seed,
            exports=args.export, top_k=args.top_k)
        pipeline.run(config)
        return {"report": os.path.join(args.out, "report.json")}
    if args.command == "parse":
        return pipeline.stage_parse(args.inputs, args.format, args.out)
    if args.command == "split":
        return pipeline.stage_split(args.records, args.bots_db, args.out)
    if args.command == "sessionize":
        return pipeline.stage_sessionize(args.records, args.cutoff, norm, args.out)
    if args.command == "graph":
        return pipeline.stage_graph(args.sessions, args.out)
    if args.command == "fit":
        return pipeline.stage_fit(args.degrees, args.direction, args.xmin, args.seed, args.out)
    if args.command == "compare":
        return pipeline.stage_compare(args.degrees, args.fits, args.out)
    if args.command == "export":
        pipeline.stage_export(args.workdir, args.export, args.top_k)
        return {"report": os.path.join(args.workdir, "report.json")}
    raise UsageError(f"unknown command {args.command}")


def main(argv=None) -> int:
    try:
        parser = build_parser()
    except UsageError as exc:
        print(f"sessiongraph: error: {exc}", file=sys.stderr)
        return 1
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # usage errors, --help, --version
        return exc.code if isinstance(exc.code, int) else 1
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        result = _dispatch(args)
    except (ConfigError, UsageError) as exc:
        print(f"sessiongraph: error: {exc}", file=sys.stderr)
        return 1
    except (SessionGraphError, OSError, ValueError) as exc:
        print(f"sessiongraph: error: {exc}", file=sys.stderr)
        return 2
    if isinstance(result, dict):
        sys.stdout.write(jsonio.dumps(result))
    else:
        sys.stdout.write(f"{len(result)} rows written\n")
    return 0
