"""
Bound reports: a named numeric bound together with the checks that back it.
"""

import hashlib
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional, Tuple

from core.consistency import Check, ConsistencyLedger
from core.numeric import format_rational


def _jsonable(value):
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


@dataclass(frozen=True)
class BoundReport:
    """
    ``side`` is "lower" or "upper". A lower bound at or below zero, or an
    upper bound at or above the trivial ceiling, is vacuous. A report with
    no checks is formula-only.
    """

    VERIFIED = "VERIFIED"
    VACUOUS = "VACUOUS"
    FORMULA_ONLY = "FORMULA_ONLY"
    FAILED = "FAILED"

    name: str
    side: str
    value: object
    inputs: Dict[str, object]
    checks: Tuple[Check, ...] = ()
    vacuous: bool = False
    exact: Optional[Fraction] = None
    details: Dict[str, object] = field(default_factory=dict)

    @classmethod
    def from_ledger(cls, name: str, side: str, value, inputs, ledger: ConsistencyLedger,
                    vacuous: bool = False, details=None) -> "BoundReport":
        exact = value if isinstance(value, (int, Fraction)) and not isinstance(value, bool) else None
        return cls(name=name, side=side, value=float(value), inputs=dict(inputs),
                   checks=ledger.checks, vacuous=vacuous,
                   exact=Fraction(exact) if exact is not None else None,
                   details=dict(details or {}))

    @property
    def formula_only(self) -> bool:
        return not self.checks

    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def status(self) -> str:
        if not self.passed():
            return self.FAILED
        if self.vacuous:
            return self.VACUOUS
        if self.formula_only:
            return self.FORMULA_ONLY
        return self.VERIFIED

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_payload(self) -> Dict[str, object]:
        return {
            "name": self.name,
            "side": self.side,
            "value": _jsonable(self.value),
            "exact": _jsonable(self.exact),
            "status": self.status,
            "vacuous": self.vacuous,
            "formula_only": self.formula_only,
            "inputs": _jsonable(self.inputs),
            "checks": [c.as_dict() for c in self.checks],
            "details": _jsonable(self.details),
        }

    def fingerprint(self) -> str:
        text = json.dumps(self.to_payload(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode("utf-8")).hexdigest()
