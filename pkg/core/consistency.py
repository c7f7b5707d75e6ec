"""
Ledger of named invariant checks attached to every bound report.

Each check records whether it held and, for numeric comparisons, the two
sides that were compared. Checks are deterministic: the same inputs give
the same ledger.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from core.numeric import format_rational
from core.policy import NumericPolicy

logger = logging.getLogger(__name__)


def _show(value) -> str:
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, float):
        return "inf" if math.isinf(value) else repr(value)
    return str(value)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""

    def as_dict(self) -> Dict[str, object]:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


class ConsistencyLedger:
    """Collects checks in order; a name may appear only once."""

    def __init__(self, tolerance: float = NumericPolicy.COMPARISON_TOLERANCE):
        self.tolerance = tolerance
        self._checks: List[Check] = []

    def record(self, name: str, passed: bool, detail: str = "") -> bool:
        if any(c.name == name for c in self._checks):
            raise ValueError(f"check {name!r} recorded twice")
        passed = bool(passed)
        self._checks.append(Check(name, passed, detail))
        if not passed:
            logger.warning("check %s failed: %s", name, detail)
        return passed

    def at_most(self, name: str, lhs, rhs) -> bool:
        """lhs <= rhs, exactly for rationals and up to the tolerance otherwise."""
        if math.isinf(float(rhs)) and float(rhs) > 0:
            ok = True
        elif isinstance(lhs, (int, Fraction)) and isinstance(rhs, (int, Fraction)):
            ok = lhs <= rhs
        else:
            ok = float(lhs) <= float(rhs) + self.tolerance * max(1.0, abs(float(rhs)))
        return self.record(name, ok, f"{_show(lhs)} <= {_show(rhs)}")

    def at_least(self, name: str, lhs, rhs) -> bool:
        if isinstance(lhs, (int, Fraction)) and isinstance(rhs, (int, Fraction)):
            ok = lhs >= rhs
        else:
            ok = float(lhs) >= float(rhs) - self.tolerance * max(1.0, abs(float(rhs)))
        return self.record(name, ok, f"{_show(lhs)} >= {_show(rhs)}")

    def close(self, name: str, lhs, rhs, tolerance: Optional[float] = None) -> bool:
        if isinstance(lhs, (int, Fraction)) and isinstance(rhs, (int, Fraction)):
            ok = lhs == rhs
        else:
            tol = self.tolerance if tolerance is None else tolerance
            ok = abs(float(lhs) - float(rhs)) <= tol * max(1.0, abs(float(rhs)))
        return self.record(name, ok, f"{_show(lhs)} ~ {_show(rhs)}")

    def merge(self, prefix: str, results: Dict[str, bool]):
        """Fold a {name: passed} mapping from a certificate check into the ledger."""
        for name, passed in results.items():
            self.record(f"{prefix}:{name}", passed)

    @property
    def checks(self) -> Tuple[Check, ...]:
        return tuple(self._checks)

    def all_passed(self) -> bool:
        return all(c.passed for c in self._checks)

    def __len__(self) -> int:
        return len(self._checks)
