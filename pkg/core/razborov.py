"""
Lower bounds for symmetric predicates F(x, y) = D(|x and y|).

A change point of D near the bottom of its range embeds the pattern matrix of
f(z) = D(|z|) on floor(n/4) variables; a change point higher up is first moved
down by shifting D. Approximate degrees come from the symmetric program, so
the pipeline stays exact well past truth-table reach.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from core.boolfn import Predicate, from_predicate, l0_l1
from core.bounds import q_lower_adeg
from core.consistency import ConsistencyLedger
from core.evaluator import BoundReport
from core.policy import MalformedInputError, NumericPolicy
from core.symmetric import symmetric_approx_degree

logger = logging.getLogger(__name__)

# fraction of the range below which a change point needs no shift
ALPHA = Fraction(1, 8)
BOUNDED_EPS = Fraction(1, 3)
BOUNDED_DELTA = Fraction(1, 7)


@dataclass(frozen=True)
class ShiftIdentities:
    n: int
    l: int
    k: int
    shifted_range: int
    shifted_point: int
    holds: bool


def shift_identities(n: int, l: int) -> ShiftIdentities:
    """
    k = l - floor(alpha/(1-alpha) (n - l)) with alpha = 1/8, so that
    n - k = floor((n - l)/(1-alpha)) and l - k = floor(alpha/(1-alpha) (n - l)).
    """
    if not ALPHA * n < l <= n:
        raise MalformedInputError(f"shift needs n/8 < l <= n, got n={n}, l={l}")
    ratio = ALPHA / (1 - ALPHA)
    k = l - math.floor(ratio * (n - l))
    holds = (n - k == math.floor((n - l) / (1 - ALPHA))
             and l - k == math.floor(ratio * (n - l))
             and 0 < k <= l
             and (l - k) <= ALPHA * (n - k))
    return ShiftIdentities(n=n, l=l, k=k, shifted_range=n - k, shifted_point=l - k, holds=holds)


def _branch(D: Predicate, l: int, mode: Optional[str]) -> Dict[str, object]:
    """One change point l of D: shift if needed, restrict to floor(range/4) variables, bound."""
    n = D.n
    branch: Dict[str, object] = {"l": l}
    ledger = ConsistencyLedger()
    if l <= ALPHA * n:
        k = 0
    else:
        ids = shift_identities(n, l)
        ledger.record("shift-identities", ids.holds, f"k={ids.k}")
        k = ids.k
    branch["shift"] = k
    point = l - k
    m = (n - k) // 4
    branch["arity"] = m
    if m < 1 or not 1 <= point <= m:
        branch.update(value=None, status=BoundReport.VACUOUS, checks=[c.as_dict() for c in ledger.checks])
        return branch
    NumericPolicy.check_arity(m)
    f = from_predicate(D.shift(k) if k else D, m)
    if f.is_constant():
        branch.update(value=None, status=BoundReport.VACUOUS, checks=[c.as_dict() for c in ledger.checks])
        return branch
    report = q_lower_adeg(f, 2 * m, m, BOUNDED_EPS, BOUNDED_DELTA, mode)
    branch.update(
        value=report.value,
        degree=report.details["degree"],
        simplified=report.details.get("simplified"),
        status=report.status,
        checks=[c.as_dict() for c in ledger.checks + report.checks],
    )
    return branch


def razborov_bound(D: Predicate, n: Optional[int] = None, mode: Optional[str] = None) -> BoundReport:
    """
    Best main-cc value over the change points that realize l0(D) and l1(D),
    with sqrt(n l0) + l1 reported alongside.
    """
    if n is not None and n != D.n:
        raise MalformedInputError(f"predicate is defined on n={D.n}, got n={n}")
    n = D.n
    if n < 8:
        raise MalformedInputError(f"the predicate pipeline needs n >= 8, got {n}")
    l0, l1 = l0_l1(D)
    symbolic = math.sqrt(n * l0) + l1
    inputs = {"predicate": list(D.values), "n": n}
    details: Dict[str, object] = {"l0": l0, "l1": l1, "symbolic": symbolic}
    ledger = ConsistencyLedger()
    if D.is_constant():
        ledger.record("constant-predicate", True)
        return BoundReport.from_ledger("razborov", "lower", 0, inputs, ledger, vacuous=True, details=details)

    points = []
    if l0 >= 1:
        points.append(l0)
    if l1 >= 1:
        points.append(n - l1 + 1)
    branches = [_branch(D, l, mode) for l in points]
    for i, branch in enumerate(branches):
        ledger.record(f"branch-{i}-change-point", D(branch["l"]) != D(branch["l"] - 1))
        for check in branch["checks"]:
            ledger.record(f"branch-{i}:{check['name']}", check["passed"], check["detail"])
    details["branches"] = branches
    values = [b["value"] for b in branches if b["value"] is not None]
    value = max(values) if values else 0
    report = BoundReport.from_ledger("razborov", "lower", value, inputs, ledger,
                                     vacuous=value <= 0, details=details)
    logger.info("predicate bound at n=%d (l0=%d, l1=%d): %s", n, l0, l1, report.value)
    return report


@dataclass(frozen=True)
class PaturiRow:
    t: int
    adeg: int
    l0: int
    l1: int
    reference: float
    ratio: Optional[float]

    @property
    def in_band(self) -> Optional[bool]:
        if self.ratio is None:
            return None
        lo, hi = NumericPolicy.PATURI_BAND
        return lo <= self.ratio <= hi


@dataclass(frozen=True)
class PaturiTable:
    family: str
    rows: Tuple[PaturiRow, ...]

    def within_band(self) -> bool:
        return all(row.in_band is not False for row in self.rows)

    def as_rows(self) -> List[Dict[str, object]]:
        return [{"t": r.t, "adeg": r.adeg, "l0": r.l0, "l1": r.l1,
                 "reference": r.reference, "ratio": r.ratio, "in_band": r.in_band} for r in self.rows]


def paturi_report(family, arities: Sequence[int], eps=BOUNDED_EPS, mode: Optional[str] = None,
                  name: Optional[str] = None) -> PaturiTable:
    """
    deg_eps(D_t) next to sqrt(t l0) + sqrt(t l1) for each t. ``family`` maps t
    to a predicate on {0..t}.
    """
    rows = []
    name = name or getattr(family, "__name__", str(family))
    for t in arities:
        NumericPolicy.check_arity(t, NumericPolicy.MAX_LP_ARITY)
        D = family(t)
        if D.n != t:
            raise MalformedInputError(f"family returned a predicate on n={D.n} for t={t}")
        l0, l1 = l0_l1(D)
        reference = math.sqrt(t * l0) + math.sqrt(t * l1)
        adeg = 0 if D.is_constant() else symmetric_approx_degree(D, t, eps, mode)
        ratio = adeg / reference if reference else None
        rows.append(PaturiRow(t=t, adeg=adeg, l0=l0, l1=l1, reference=reference, ratio=ratio))
        logger.debug("paturi row t=%d: adeg=%d reference=%.3f", t, adeg, reference)
    return PaturiTable(family=name, rows=tuple(rows))
