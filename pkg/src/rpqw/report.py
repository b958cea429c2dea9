"""Running the catalog over its grids and emitting the report.

Grid points may run in worker processes; records are collected and sorted
by (id, params) before the report is assembled, so the JSON output depends
only on the configuration and the seed.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .catalog import BY_ID, FORCED, list_checks
from .config import RunConfig
from .errors import RpqwError
from .operators import Witness
from .outcome import FAIL, PASS, SKIPPED, CheckOutcome

CONVENTIONS = (
    "K(P, Q) acts by its eigenvalue on the image monomial; it is 1 for the pq and q families.",
    "In the n-bracket multi-sum the index after the last position wraps to the first (cyclic reading); "
    "the truncated reading is recorded alongside.",
    "Falling factorials A^k_n are 0 for k > n, so commutator grids keep m + r - 1 >= 0.",
    "The multi-variable n-bracket display uses symbols without definitions; only closure onto the "
    "generator of summed modes and ranks is tested and the scalar is recorded.",
    "The multi-variable commutator is checked with the printed ranks (literal) and with ranks lowered "
    "by one (shifted).",
    "Constraint operators use the sign (-K/(q-p))^(r-1) of the r = 2, 3, 4 displays; the printed general "
    "sign is recorded as the literal reading.",
    "Toy-model operators are compared with the x-space oracle up to one overall scalar fitted at the "
    "first nonzero oracle coefficient.",
)


@dataclass
class Record:
    id: str
    params: dict
    status: str
    witness: dict | None = None
    note: str | None = None
    ms: int = 0
    data: dict = field(default_factory=dict)
    engine_error: bool = False


@dataclass
class Report:
    config: dict
    records: list
    conventions: list

    @property
    def summary(self) -> dict:
        out = {PASS: 0, FAIL: 0, SKIPPED: 0}
        for r in self.records:
            out[r.status] += 1
        return out

    def exit_code(self) -> int:
        """0 if nothing failed, 1 for forced failures or engine errors, 2 for conformance failures only."""
        failed = [r for r in self.records if r.status == FAIL]
        if any(r.engine_error or BY_ID[r.id].suite == FORCED for r in failed):
            return 1
        return 2 if failed else 0


def to_plain(value):
    """JSON-ready copy: Fractions become "num/den", tuples become lists."""
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, Witness):
        return to_plain(value.as_dict())
    if isinstance(value, dict):
        return {str(k): to_plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_plain(v) for v in value]
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    return str(value)


def _sort_key(record: Record):
    return record.id, json.dumps(to_plain(record.params), sort_keys=True)


def run_point(config: RunConfig, check_id: str, params: dict) -> list[Record]:
    """Run one grid point; classified errors become skipped records."""
    info = BY_ID[check_id]
    start = time.perf_counter()
    try:
        result = info.run(config, config.deformation(), params)
        outcomes = result if isinstance(result, list) else [result]
        records = [_from_outcome(check_id, params, o) for o in outcomes]
    except RpqwError as exc:
        records = [Record(check_id, params, SKIPPED, note=f"{type(exc).__name__}: {exc}")]
    except Exception as exc:  # noqa: BLE001 - an unclassified error is an engine failure
        records = [Record(check_id, params, FAIL, note=f"engine error {type(exc).__name__}: {exc}", engine_error=True)]
    elapsed = int((time.perf_counter() - start) * 1000)
    if config.timing:
        for r in records:
            r.ms = elapsed
    return records


def _from_outcome(check_id: str, params: dict, out: CheckOutcome) -> Record:
    merged = dict(params)
    for key, value in out.params.items():
        merged.setdefault(key, value)
    return Record(check_id, merged, out.status, out.witness, out.note, data=dict(out.data))


def grid_points(config: RunConfig) -> list[tuple[str, dict]]:
    d = config.deformation()
    points = []
    for info in list_checks(config.suite):
        if config.only and info.id not in config.only:
            continue
        points.extend((info.id, params) for params in info.grid(config, d))
    return points


def _run_chunk(config: RunConfig, chunk: list) -> list[Record]:
    out = []
    for check_id, params in chunk:
        out.extend(run_point(config, check_id, params))
    return out


def run(config: RunConfig) -> Report:
    points = grid_points(config)
    if config.jobs > 1 and len(points) > 1:
        chunks = [points[i :: config.jobs] for i in range(config.jobs)]
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            results = list(pool.map(_run_chunk, [config] * len(chunks), chunks))
        records = [r for chunk in results for r in chunk]
    else:
        records = _run_chunk(config, points)
    records.sort(key=_sort_key)
    return Report(config.echo(), records, list(CONVENTIONS) + _derived_conventions(records))


def _derived_conventions(records: list[Record]) -> list[str]:
    out = []
    dropped = sum(r.data.get("dropped", 0) for r in records if r.id == "wtilde_specialization")
    if any(r.id == "wtilde_specialization" for r in records):
        out.append(f"Bell sums drop terms whose derivative index would be negative: {dropped} terms dropped in total.")
    return out


def as_dict(report: Report) -> dict:
    checks = []
    for r in report.records:
        item = {"id": r.id, "params": to_plain(r.params), "status": r.status}
        if r.witness is not None:
            item["witness"] = to_plain(r.witness)
        if r.note:
            item["note"] = r.note
        item["ms"] = r.ms
        checks.append(item)
    return {
        "config": to_plain(report.config),
        "checks": checks,
        "summary": report.summary,
        "conventions": list(report.conventions),
    }


def emit(report: Report, fmt: str = "json") -> bytes:
    data = as_dict(report)
    if fmt == "json":
        return (json.dumps(data, indent=2, sort_keys=True) + "\n").encode()
    if fmt == "markdown":
        return render_markdown(data).encode()
    raise ValueError(f"unknown format {fmt!r}")


def _cell(value) -> str:
    if value is None:
        return ""
    text = value if isinstance(value, str) else json.dumps(value, sort_keys=True)
    return text.replace("|", "\\|")


def render_markdown(data: dict) -> str:
    lines = ["# Verification report", "", "## Configuration", "", "| field | value |", "| --- | --- |"]
    lines += [f"| {k} | {_cell(v)} |" for k, v in sorted(data["config"].items())]
    s = data["summary"]
    lines += ["", "## Summary", "", "| pass | fail | skipped |", "| --- | --- | --- |", f"| {s['pass']} | {s['fail']} | {s['skipped']} |"]
    lines += ["", "## Checks", "", "| id | params | status | witness | note | ms |", "| --- | --- | --- | --- | --- | --- |"]
    for c in data["checks"]:
        lines.append(
            f"| {c['id']} | {_cell(c['params'])} | {c['status']} | {_cell(c.get('witness'))} | {_cell(c.get('note'))} | {c['ms']} |"
        )
    lines += ["", "## Conventions", ""] + [f"- {x}" for x in data["conventions"]]
    return "\n".join(lines) + "\n"
