"""Check outcome type shared by the geometry, balance, and verifier modules."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

PASS = "pass"
FAIL = "fail"
REPORT_ONLY = "report-only"

THEOREM = "theorem"
CONJECTURE = "conjecture"
REPORT = "report"


@dataclass
class CheckReport:
    """Outcome of one theorem/conjecture check on one poset.

    A fail always carries a witness with enough data to re-run the check;
    extremal is the tightest slack (or the reported ratio for report-only
    checks).
    """

    check: str
    status: str
    witness: dict | None = None
    extremal: Fraction | float | None = None

    def to_json_dict(self) -> dict:
        from .fileio import jsonable
        return {
            "check": self.check,
            "status": self.status,
            "witness": jsonable(self.witness),
            "extremal": jsonable(self.extremal),
        }
