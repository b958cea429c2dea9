"""Check that README.md documents every check id with its suite, and nothing else.

Exit status 0 when the README table and the catalog agree, 1 otherwise.
"""

import re
import sys
from pathlib import Path

from rpqw.catalog import CATALOG

README = Path(__file__).resolve().parent.parent / "README.md"
ROW = re.compile(r"^\| `([a-z0-9_]+)` \| (forced|conformance) \|", re.M)


def main() -> int:
    documented = dict(ROW.findall(README.read_text()))
    catalog = {c.id: c.suite for c in CATALOG}
    problems = []
    for cid, suite in catalog.items():
        if cid not in documented:
            problems.append(f"missing from README: {cid}")
        elif documented[cid] != suite:
            problems.append(f"suite mismatch for {cid}: README {documented[cid]}, catalog {suite}")
    problems += [f"README lists unknown id: {cid}" for cid in documented if cid not in catalog]
    for line in problems:
        print(line)
    print(f"{len(catalog)} checks, {len(documented)} documented, {len(problems)} problems")
    return 1 if problems else 0


if __name__ == "__main__":
    sys.exit(main())
