"""Run configuration for the verifier and its validation.

Every field is checked against the limits the engines can honour; a bad
value raises ``ConfigInvalid`` naming the field.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

from .deform import CLASSICAL, Deformation, classical_limit, load_custom_table, make_deformation
from .errors import ConfigInvalid, RpqwError

SUITES = ("forced", "conformance", "all")
FORMATS = ("json", "markdown")

# caps keep every grid at desk scale
MAX_WINDOW = 16
MIN_WINDOW = 8
MAX_RANK = 4
MAX_T_ORDER = 8
MAX_ARITY = 6


@dataclass(frozen=True)
class RunConfig:
    family: str = "pq"
    p: str = "2/3"
    q: str = "1/5"
    custom_file: str | None = None
    window: int = 12
    modes: tuple[int, int] = (-4, 4)
    max_rank: int = 4
    max_arity: int = MAX_ARITY
    t_order: int = 6
    toy: tuple[tuple[int, int], ...] = ((1, 0), (1, 1), (2, 0), (2, 1))
    suite: str = "all"
    seed: int = 42
    only: tuple[str, ...] = ()
    timing: bool = False
    jobs: int = 1
    out: str | None = None
    format: str = "json"
    _custom: tuple = field(default=(), compare=False, repr=False)

    def deformation(self) -> Deformation:
        if self.family == CLASSICAL:
            return classical_limit()
        if self.family == "custom":
            l, terms = self._custom
            return make_deformation("custom", self.p, self.q, terms=terms, l=l)
        if self.family == "q":
            return make_deformation("q", None, self.q)
        return make_deformation("pq", self.p, self.q)

    def echo(self) -> dict:
        """The fields that determine the report, as plain JSON values."""
        data = asdict(self)
        for key in ("_custom", "out", "format", "jobs", "timing"):
            data.pop(key)
        data["modes"] = list(self.modes)
        data["toy"] = [list(x) for x in self.toy]
        data["only"] = list(self.only)
        if self.family == "q":
            data["p"] = "1"
        return data


def parse_modes(text: str) -> tuple[int, int]:
    """"-4..4" -> (-4, 4)."""
    try:
        lo, hi = text.split("..")
        return int(lo), int(hi)
    except ValueError:
        raise ConfigInvalid(f"--modes: expected LO..HI, got {text!r}") from None


def parse_toy(text: str) -> tuple[tuple[int, int], ...]:
    """"1:0,1:1,2:0" -> ((1, 0), (1, 1), (2, 0))."""
    try:
        pairs = tuple(tuple(int(x) for x in item.split(":")) for item in text.split(",") if item)
    except ValueError:
        raise ConfigInvalid(f"--toy: expected a:gamma pairs, got {text!r}") from None
    if not pairs or any(len(pair) != 2 for pair in pairs):
        raise ConfigInvalid(f"--toy: expected a:gamma pairs, got {text!r}")
    return pairs


def _rational(name: str, value: str) -> Fraction:
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise ConfigInvalid(f"--{name}: {value!r} is not an exact rational") from None


def make_config(family: str = "pq", **kwargs) -> RunConfig:
    """Build and validate a RunConfig; ``family`` may be "custom:FILE"."""
    custom = ()
    if family.startswith("custom:"):
        path = family.split(":", 1)[1]
        try:
            custom = load_custom_table(path)
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise ConfigInvalid(f"--family: cannot read custom table {path!r}: {exc}") from None
        kwargs["custom_file"] = str(Path(path))
        family = "custom"
    config = RunConfig(family=family, _custom=custom, **kwargs)
    validate(config)
    return config


def validate(config: RunConfig) -> None:
    c = config
    if c.family not in ("pq", "q", "custom", CLASSICAL):
        raise ConfigInvalid(f"--family: unknown family {c.family!r}")
    p, q = _rational("p", c.p), _rational("q", c.q)
    if c.family in ("pq", "custom") and not (0 < q < p <= 1):
        raise ConfigInvalid(f"--p/--q: need 0 < q < p <= 1, got p={c.p}, q={c.q}")
    if c.family == "q" and not (0 < q < 1):
        raise ConfigInvalid(f"--q: need 0 < q < 1, got q={c.q}")
    if not MIN_WINDOW <= c.window <= MAX_WINDOW:
        raise ConfigInvalid(f"--window: {c.window} outside [{MIN_WINDOW}, {MAX_WINDOW}]")
    lo, hi = c.modes
    if lo > hi or max(abs(lo), abs(hi)) > c.window // 2:
        raise ConfigInvalid(f"--modes: {lo}..{hi} must be ordered and within half the window")
    if not 1 <= c.max_rank <= MAX_RANK:
        raise ConfigInvalid(f"--max-rank: {c.max_rank} outside [1, {MAX_RANK}]")
    if not 2 <= c.max_arity <= MAX_ARITY:
        raise ConfigInvalid(f"--max-arity: {c.max_arity} outside [2, {MAX_ARITY}]")
    if not 1 <= c.t_order <= MAX_T_ORDER:
        raise ConfigInvalid(f"--t-order: {c.t_order} outside [1, {MAX_T_ORDER}]")
    if any(a < 1 or g < 0 for a, g in c.toy):
        raise ConfigInvalid("--toy: need a >= 1 and gamma >= 0")
    if c.suite not in SUITES:
        raise ConfigInvalid(f"--suite: {c.suite!r} not in {SUITES}")
    if c.format not in FORMATS:
        raise ConfigInvalid(f"--format: {c.format!r} not in {FORMATS}")
    if c.jobs < 1:
        raise ConfigInvalid(f"--jobs: {c.jobs} must be positive")
    try:
        config.deformation()
    except RpqwError as exc:
        raise ConfigInvalid(f"--family/--p/--q: {exc}") from None
