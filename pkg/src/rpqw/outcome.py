"""The record every check returns."""

from __future__ import annotations

from dataclasses import dataclass, field

from .operators import Witness, op_equal

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"


@dataclass
class CheckOutcome:
    check_id: str
    params: dict
    status: str
    witness: dict | None = None
    note: str | None = None
    data: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == PASS


def from_witness(check_id: str, params: dict, witness: Witness | None, note: str | None = None) -> CheckOutcome:
    if witness is None:
        return CheckOutcome(check_id, params, PASS, note=note)
    return CheckOutcome(check_id, params, FAIL, witness=witness.as_dict(), note=note)


def compare(check_id: str, params: dict, expected, got, note: str | None = None) -> CheckOutcome:
    """Compare a displayed right-hand side (expected) against the oracle (got)."""
    return from_witness(check_id, params, op_equal(expected, got), note)


def first_failure(check_id: str, params: dict, outcomes, note: str | None = None) -> CheckOutcome:
    """Fold several sub-checks into one record: the first failure wins, else pass."""
    for out in outcomes:
        if out.status != PASS:
            failed = CheckOutcome(check_id, params, out.status, out.witness, out.note, out.data)
            if note and not failed.note:
                failed.note = note
            return failed
    return CheckOutcome(check_id, params, PASS, note=note)
