"""Auditable outcome of a single inequality evaluation."""
from dataclasses import dataclass, field
from typing import Any, Optional, Union

# pass <=> lhs <= rhs + SLACK_REL * max(1, rhs)
SLACK_REL = 1e-8
# ratios are undefined below this structural right-hand side
DEGENERATE_RHS = 1e-14
EMPIRICAL = "empirical"


def within_slack(lhs: float, rhs: float, slack: float = SLACK_REL) -> bool:
    return lhs <= rhs + slack * max(1.0, rhs)


@dataclass
class CheckRecord:
    """One evaluation of ``lhs <= constant * rhs_structural``.

    ``constant`` is a float for inequalities with an explicit constant and
    the string ``"empirical"`` otherwise; in the latter case ``passed``
    compares ``ratio`` against a configured cap.  ``ratio`` is None when the
    structural side is below ``DEGENERATE_RHS``.  Explicit-constant records
    are still judged by the slack rule then (``0 <= 0`` passes, a nonzero
    left side against a vanishing bound fails); empirical ones become
    skipped-degenerate (``passed is None``).  ``error`` carries the message
    of a numerical failure.
    """

    lemma_id: str
    lhs: float
    rhs_structural: float
    constant: Union[float, str]
    ratio: Optional[float]
    passed: Optional[bool]
    inputs_digest: dict = field(default_factory=dict)
    extras: dict = field(default_factory=dict)
    error: Optional[str] = None

    @property
    def status(self) -> str:
        if self.error is not None:
            return "error"
        if self.passed is None:
            return "skipped-degenerate"
        return "pass" if self.passed else "fail"

    @property
    def explicit(self) -> bool:
        return self.constant != EMPIRICAL

    def to_dict(self) -> dict[str, Any]:
        return {
            "lemma_id": self.lemma_id,
            "status": self.status,
            "lhs": self.lhs,
            "rhs_structural": self.rhs_structural,
            "constant": self.constant,
            "ratio": self.ratio,
            "pass": self.passed,
            "inputs_digest": self.inputs_digest,
            "extras": self.extras,
            "error": self.error,
        }


def make_record(lemma_id, lhs, rhs_structural, constant, *, cap=None,
                digest=None, extras=None, slack=SLACK_REL) -> CheckRecord:
    """Build a record, applying the repo-wide slack and degeneracy rules."""
    lhs = float(lhs)
    rhs_structural = float(rhs_structural)
    if rhs_structural > DEGENERATE_RHS:
        ratio = lhs / rhs_structural
    else:
        ratio = None
    if constant == EMPIRICAL:
        if ratio is None:
            passed = None
        else:
            passed = cap is None or ratio <= cap
    else:
        passed = within_slack(lhs, float(constant) * rhs_structural, slack)
    return CheckRecord(lemma_id, lhs, rhs_structural, constant, ratio, passed,
                       dict(digest or {}), dict(extras or {}))
