"""
Threshold weight W(f, d): its real relaxation, the rounding certificate that
bounds it from above, an exhaustive oracle and the minimax distribution that
bounds it from the other side.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Dict, Optional, Tuple

import numpy as np

from core.approx import best_approx, character_matrix, solve_weight_program
from core.boolfn import BooleanFunction, monomials, num_monomials
from core.policy import (DegenerateInputError, MalformedInputError, NumericPolicy,
                         SizeLimitError, SolverError, WeightProvenance)
from core.simplex import OPTIMAL, UNBOUNDED, Constraint, LPProblem, lp_solve

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WeightCertificate:
    """Integer lambda_S (|S| <= d) with sign(sum lambda_S chi_S(x)) = f(x) everywhere."""

    t: int
    d: int
    lambdas: Dict[int, int]
    provenance: str = WeightProvenance.UPPER

    @property
    def weight(self) -> int:
        return sum(abs(v) for v in self.lambdas.values())

    def polynomial(self) -> np.ndarray:
        masks = list(self.lambdas)
        if not masks:
            return np.zeros(1 << self.t, dtype=np.int64)
        coeffs = np.array([self.lambdas[S] for S in masks], dtype=np.int64)
        return coeffs @ character_matrix(self.t, masks)

    def sign_represents(self, f: BooleanFunction) -> bool:
        p = self.polynomial()
        return bool(np.all(p * f.values() > 0))

    def check(self, f: BooleanFunction) -> Dict[str, bool]:
        return {
            "integer-coefficients": all(isinstance(v, int) for v in self.lambdas.values()),
            "degree-bounded": all(bin(S).count("1") <= self.d for S in self.lambdas),
            "sign-represents": self.sign_represents(f),
        }


@dataclass(frozen=True)
class RealWeight:
    d: int
    value: object
    coeffs: Dict[int, object]
    mode: str = "exact"

    @property
    def finite(self) -> bool:
        return self.value != math.inf


@dataclass(frozen=True)
class BruteforceWeight:
    d: int
    cap: int
    weight: Optional[int]
    certificate: Optional[WeightCertificate]

    @property
    def exceeds_cap(self) -> bool:
        return self.weight is None


@dataclass(frozen=True)
class DualDistribution:
    d: int
    mu: Tuple
    value: object
    mode: str = "exact"


def weight_real(f: BooleanFunction, d: int, mode: Optional[str] = None) -> RealWeight:
    """min sum |lambda_S| over real lambda with f(x) sum lambda_S chi_S(x) >= 1; infinity when infeasible."""
    if not 0 <= d <= f.t:
        raise MalformedInputError(f"degree must satisfy 0 <= d <= {f.t}, got {d}")
    mode = NumericPolicy.lp_mode_for_arity(f.t, mode)
    sol = solve_weight_program(f, d, mode)
    if sol.status == UNBOUNDED:
        return RealWeight(d=d, value=math.inf, coeffs={}, mode=mode)
    masks = monomials(f.t, d)
    coeffs = {}
    for i, S in enumerate(masks):
        lam = sol.duals[2 * i] - sol.duals[2 * i + 1]
        if lam != 0:
            coeffs[S] = lam
    return RealWeight(d=d, value=sol.objective, coeffs=coeffs, mode=mode)


def _round_half_up(q: Fraction) -> int:
    return math.floor(q + Fraction(1, 2))


def weight_int_upper(f: BooleanFunction, d: int, delta=None) -> WeightCertificate:
    """
    Round M * p_hat with M = 3N / (4 delta), N the number of monomials of
    degree <= d and p a best approximant with E(f, d) = 1 - delta, then divide
    by the gcd of the result.
    """
    res = best_approx(f, d, "exact")
    err = Fraction(res.value)
    if err >= 1:
        raise DegenerateInputError(f"E(f, {d}) = 1; f has no sign-representation of degree {d}")
    slack = 1 - err
    if delta is None:
        delta = slack
    delta = Fraction(delta)
    if not 0 < delta <= slack:
        raise MalformedInputError(f"delta must satisfy 0 < delta <= 1 - E(f,d) = {slack}, got {delta}")
    N = num_monomials(f.t, d)
    M = Fraction(3 * N) / (4 * delta)
    lambdas = {S: _round_half_up(M * c) for S, c in res.coeffs.items()}
    lambdas = {S: v for S, v in lambdas.items() if v != 0}
    g = reduce(math.gcd, (abs(v) for v in lambdas.values()), 0)
    if g > 1:
        lambdas = {S: v // g for S, v in lambdas.items()}
    cert = WeightCertificate(t=f.t, d=d, lambdas=lambdas, provenance=WeightProvenance.UPPER)
    if not cert.sign_represents(f):
        raise SolverError(f"rounded certificate fails to sign-represent {f!r} at degree {d}")
    logger.info("rounding certificate for %r at d=%d: weight %d (M=%s, gcd %d)", f, d, cert.weight, M, g)
    return cert


def rounding_ceiling(f: BooleanFunction, d: int) -> float:
    """(2 / (1 - E(f, d))) N^{3/2}, the ceiling on the rounding certificate's weight."""
    err = Fraction(best_approx(f, d, "exact").value)
    if err >= 1:
        return math.inf
    return float(2 / (1 - err)) * num_monomials(f.t, d) ** 1.5


def weight_bruteforce(f: BooleanFunction, d: int, cap: int = NumericPolicy.MAX_BRUTEFORCE_CAP) -> BruteforceWeight:
    """Exact W(f, d) by iterative deepening over the total weight, or "> cap"."""
    masks = monomials(f.t, d)
    if len(masks) > NumericPolicy.MAX_BRUTEFORCE_MONOMIALS:
        raise SizeLimitError(
            f"{len(masks)} monomials exceed the brute-force limit {NumericPolicy.MAX_BRUTEFORCE_MONOMIALS}")
    if not 0 <= cap <= NumericPolicy.MAX_BRUTEFORCE_CAP:
        raise SizeLimitError(f"cap must lie in [0, {NumericPolicy.MAX_BRUTEFORCE_CAP}], got {cap}")
    # rows: f(x) chi_S(x) for each monomial
    signed = character_matrix(f.t, masks) * f.values()[None, :]
    k = len(masks)

    def search(i: int, budget: int, margin: np.ndarray, chosen: list):
        if np.any(margin + budget < 1):
            return None
        if i == k - 1:
            for v in ((budget, -budget) if budget else (0,)):
                final = margin + v * signed[i]
                if np.all(final >= 1):
                    return chosen + [v]
            return None
        for mag in range(budget + 1):
            for v in ((mag, -mag) if mag else (0,)):
                found = search(i + 1, budget - mag, margin + v * signed[i], chosen + [v])
                if found is not None:
                    return found
        return None

    start = np.zeros(1 << f.t, dtype=np.int64)
    for w in range(cap + 1):
        found = search(0, w, start, [])
        if found is not None:
            lambdas = {S: int(v) for S, v in zip(masks, found) if v != 0}
            cert = WeightCertificate(t=f.t, d=d, lambdas=lambdas, provenance=WeightProvenance.EXACT)
            logger.debug("W(%r, %d) = %d by exhaustive search", f, d, w)
            return BruteforceWeight(d=d, cap=cap, weight=w, certificate=cert)
    return BruteforceWeight(d=d, cap=cap, weight=None, certificate=None)


def weight_dual_distribution(f: BooleanFunction, d: int, mode: Optional[str] = None) -> DualDistribution:
    """mu minimizing max_{|S|<=d} |E_mu[f chi_S]|, with that minimum."""
    if not 0 <= d <= f.t:
        raise MalformedInputError(f"degree must satisfy 0 <= d <= {f.t}, got {d}")
    mode = NumericPolicy.lp_mode_for_arity(f.t, mode)
    size = 1 << f.t
    signed = character_matrix(f.t, monomials(f.t, d)) * f.values()[None, :]
    rows = []
    for row in signed:
        plus = tuple(int(c) for c in row)
        rows.append(Constraint(plus + (-1,), "<=", 0))
        rows.append(Constraint(tuple(-c for c in plus) + (-1,), "<=", 0))
    rows.append(Constraint((1,) * size + (0,), "=", 1))
    sol = lp_solve(LPProblem(objective=(0,) * size + (1,), constraints=rows), mode)
    if sol.status != OPTIMAL:
        raise AssertionError(f"minimax program returned {sol.status}")
    return DualDistribution(d=d, mu=sol.primal[:size], value=sol.objective, mode=mode)


def correlations(f: BooleanFunction, d: int, mu) -> list:
    """E_mu[f chi_S] for every |S| <= d, in monomial order."""
    signed = character_matrix(f.t, monomials(f.t, d)) * f.values()[None, :]
    return [sum(m * int(c) for m, c in zip(mu, row)) for row in signed]
