"""Command-line driver: ``rpqw verify`` runs the checks, ``rpqw list`` prints the catalog.

Exit codes: 0 when nothing failed, 1 for an invalid configuration, an
engine error or a forced-identity failure, 2 when only conformance checks
failed.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .catalog import BY_ID, list_checks
from .config import SUITES, make_config
from .errors import ConfigInvalid
from .report import emit, run


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rpqw", description="Exact verifier for deformed W-algebra identities.")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run the selected suites and emit a report")
    v.add_argument("--suite", choices=SUITES, default="all")
    v.add_argument("--family", default="pq", help="pq, q, classical or custom:FILE")
    v.add_argument("--p", default="2/3", help="exact rational, ignored by the q family")
    v.add_argument("--q", default="1/5", help="exact rational")
    v.add_argument("--window", type=int, default=12, help="monomials z^n with |n| <= window")
    v.add_argument("--modes", default="-4..4", help="mode range LO..HI")
    v.add_argument("--max-rank", type=int, default=4)
    v.add_argument("--max-arity", type=int, default=6)
    v.add_argument("--t-order", type=int, default=6, help="truncation K = W of the time series")
    v.add_argument("--toy", default="1:0,1:1,2:0,2:1", help="toy-model a:gamma pairs")
    v.add_argument("--seed", type=int, default=42)
    v.add_argument("--check", action="append", default=[], help="run only this check id (repeatable)")
    v.add_argument("--out", help="write the report here instead of stdout")
    v.add_argument("--format", choices=("json", "markdown"), default="json")
    v.add_argument("--timing", action="store_true", help="record wall-clock ms per grid point")
    v.add_argument("--jobs", type=int, default=1, help="worker processes for the grid")

    ls = sub.add_parser("list", help="print the check catalog")
    ls.add_argument("--suite", choices=SUITES, default="all")
    return parser


def _config_from(args):
    from .config import parse_modes, parse_toy

    unknown = [c for c in args.check if c not in BY_ID]
    if unknown:
        raise ConfigInvalid(f"--check: unknown check id(s) {', '.join(unknown)}")
    kwargs = dict(
        p=args.p,
        q=args.q,
        window=args.window,
        modes=parse_modes(args.modes),
        max_rank=args.max_rank,
        max_arity=args.max_arity,
        t_order=args.t_order,
        toy=parse_toy(args.toy),
        suite=args.suite,
        seed=args.seed,
        only=tuple(args.check),
        timing=args.timing,
        jobs=args.jobs,
        out=args.out,
        format=args.format,
    )
    if args.family == "q":
        kwargs["p"] = "1"
    return make_config(args.family, **kwargs)


def cmd_verify(args) -> int:
    try:
        config = _config_from(args)
    except ConfigInvalid as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    report = run(config)
    data = emit(report, config.format)
    if config.out:
        Path(config.out).write_bytes(data)
        s = report.summary
        print(f"{s['pass']} pass, {s['fail']} fail, {s['skipped']} skipped -> {config.out}", file=sys.stderr)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    return report.exit_code()


def cmd_list(args) -> int:
    for info in list_checks(args.suite):
        print(f"{info.id}\t{info.suite}\t{info.anchor}\t{info.description}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "verify":
        return cmd_verify(args)
    return cmd_list(args)


if __name__ == "__main__":
    sys.exit(main())
