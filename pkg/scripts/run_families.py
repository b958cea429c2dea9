"""Run the full catalog for every built-in family and write one report per family.

Usage: python3 scripts/run_families.py [OUTDIR] [--format json|markdown]
"""

import argparse
import sys
from pathlib import Path

from rpqw.config import make_config
from rpqw.report import emit, run

FAMILIES = {
    "pq": {"p": "2/3", "q": "1/5"},
    "q": {"p": "1", "q": "1/5"},
    "classical": {},
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("outdir", nargs="?", default="reports")
    parser.add_argument("--format", choices=("json", "markdown"), default="json")
    args = parser.parse_args(argv)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    suffix = "json" if args.format == "json" else "md"
    for family, kw in FAMILIES.items():
        report = run(make_config(family, format=args.format, **kw))
        path = outdir / f"{family}.{suffix}"
        path.write_bytes(emit(report, args.format))
        s = report.summary
        failing = sorted({r.id for r in report.records if r.status == "fail"})
        print(f"{family:10s} pass={s['pass']:4d} fail={s['fail']:4d} skipped={s['skipped']:3d} exit={report.exit_code()} -> {path}")
        print(f"{'':10s} failing ids: {', '.join(failing) or 'none'}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
