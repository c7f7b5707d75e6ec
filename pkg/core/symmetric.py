"""
Symmetric reduction: for f(x) = D(|x|) a best approximant may be taken
symmetric, so E(f, d) is the error of the best univariate polynomial of
degree <= d on the points 0..t. The programs here have t+1 variables per
sign instead of 2^t and stay exact for every arity the catalog allows.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence, Tuple

from core.approx import DualWitness, check_epsilon
from core.boolfn import Predicate, popcounts
from core.policy import DegenerateInputError, MalformedInputError, NumericPolicy
from core.simplex import OPTIMAL, Constraint, LPProblem, lp_solve

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SymmetricApprox:
    """E(f, d) and the level weights omega_k = sum_{|x|=k} psi(x) of a witness."""

    t: int
    d: int
    value: object
    omega: Tuple
    mode: str = "exact"


def _levels(D, t: int) -> Tuple[int, ...]:
    values = D.values if isinstance(D, Predicate) else tuple(D)
    if len(values) < t + 1:
        raise MalformedInputError(f"predicate covers {len(values) - 1} levels, arity {t} needs {t}")
    return tuple(int(v) for v in values[:t + 1])


@lru_cache(maxsize=2048)
def _solve(levels: Tuple[int, ...], d: int, mode: str) -> SymmetricApprox:
    t = len(levels) - 1
    objective = list(levels) + [-v for v in levels]
    rows = []
    for j in range(d + 1):
        basis = tuple(math.comb(k, j) for k in range(t + 1))
        rows.append(Constraint(basis + tuple(-b for b in basis), "=", 0))
    rows.append(Constraint((1,) * (2 * (t + 1)), "<=", 1))
    sol = lp_solve(LPProblem(objective=objective, constraints=rows, maximize=True), mode)
    if sol.status != OPTIMAL:
        raise AssertionError(f"symmetric program returned {sol.status}")
    omega = tuple(u - v for u, v in zip(sol.primal[:t + 1], sol.primal[t + 1:]))
    return SymmetricApprox(t=t, d=d, value=sol.objective, omega=omega, mode=mode)


def symmetric_best_approx(D, t: int, d: int, mode: Optional[str] = None) -> SymmetricApprox:
    if not 0 <= d <= t:
        raise MalformedInputError(f"degree must satisfy 0 <= d <= {t}, got {d}")
    NumericPolicy.check_arity(t)
    return _solve(_levels(D, t), d, NumericPolicy.resolve_mode(mode))


def symmetric_approx_degree(D, t: int, eps, mode: Optional[str] = None) -> int:
    eps = check_epsilon(eps)
    mode = NumericPolicy.resolve_mode(mode)
    tol = 0 if mode == "exact" else NumericPolicy.FEASIBILITY_TOLERANCE
    for d in range(t + 1):
        if symmetric_best_approx(D, t, d, mode).value <= eps + tol:
            return d
    return t


def lift(omega: Sequence, t: int) -> Tuple:
    """psi(x) = omega_{|x|} / C(t, |x|)."""
    pc = popcounts(t)
    per_level = [w / math.comb(t, k) for k, w in enumerate(omega)]
    return tuple(per_level[int(pc[x])] for x in range(1 << t))


def symmetric_dual_witness(D, t: int, eps, mode: Optional[str] = None) -> DualWitness:
    """Witness of deg_eps for f(x) = D(|x|), lifted from the level weights at degree d-1."""
    eps = check_epsilon(eps)
    levels = _levels(D, t)
    if len(set(levels)) == 1:
        raise DegenerateInputError("constant predicate has no witness")
    mode = NumericPolicy.resolve_mode(mode)
    d = symmetric_approx_degree(levels, t, eps, mode)
    res = symmetric_best_approx(levels, t, d - 1, mode)
    omega = res.omega
    l1 = sum(abs(w) for w in omega)
    if l1 != 1:
        omega = tuple(w / l1 for w in omega)
    corr = sum(w * v for w, v in zip(omega, levels))
    logger.info("symmetric witness at t=%d: d=%d, correlation %s", t, d, corr)
    return DualWitness(t=t, d=d, eps=eps, values=lift(omega, t), correlation=corr, mode=mode)
