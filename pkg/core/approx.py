"""
Uniform approximation of Boolean functions by low-degree polynomials and the
dual objects that certify it.

E(f, d) is computed from the program

    maximize   sum_x f(x) psi(x)
    subject to sum_x psi(x) chi_S(x) = 0     for |S| <= d
               sum_x |psi(x)| <= 1

with psi = u - v split into nonnegative parts. Its optimum equals E(f, d);
the primal optimum is an orthogonal witness psi and the row duals are the
coefficients of a best degree-d approximant.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Optional, Tuple

import numpy as np

from core.boolfn import BooleanFunction, characters, fourier_table, monomials, popcounts
from core.policy import DegenerateInputError, MalformedInputError, NumericPolicy
from core.simplex import (INFEASIBLE, OPTIMAL, UNBOUNDED, Constraint, LPProblem,
                          LPSolution, lp_solve)

logger = logging.getLogger(__name__)


def character_matrix(t: int, masks) -> np.ndarray:
    """Rows chi_S for S in ``masks``, columns x = 0..2^t-1."""
    if not masks:
        return np.zeros((0, 1 << t), dtype=np.int64)
    return np.stack([characters(S, t) for S in masks])


def _tolerance(mode: str):
    return 0 if mode == "exact" else NumericPolicy.FEASIBILITY_TOLERANCE


def check_epsilon(eps, upper_open: bool = True):
    eps = Fraction(eps) if not isinstance(eps, float) else eps
    if eps < 0 or (eps >= 1 if upper_open else eps > 1):
        raise MalformedInputError(f"epsilon must satisfy 0 <= eps < 1, got {eps}")
    return eps


@dataclass(frozen=True)
class ApproxResult:
    """Best degree-d approximant p and its uniform error E(f, d)."""

    d: int
    value: object
    coeffs: Dict[int, object]
    witness: Tuple
    mode: str = "exact"

    def polynomial(self, t: int) -> np.ndarray:
        """p(x) for every x."""
        chi = character_matrix(t, list(self.coeffs))
        c = np.array(list(self.coeffs.values()), dtype=object if self.mode == "exact" else np.float64)
        if not len(c):
            return np.zeros(1 << t, dtype=object)
        return c.dot(chi)

    def max_error(self, f: BooleanFunction):
        p = self.polynomial(f.t)
        return max(abs(int(fx) - px) for fx, px in zip(f.table, p))


@dataclass(frozen=True)
class DualWitness:
    """
    psi with sum |psi| = 1, psi_hat(S) = 0 for |S| < d and sum psi f > eps.
    ``correlation`` is sum_x psi(x) f(x).
    """

    t: int
    d: int
    eps: object
    values: Tuple
    correlation: object
    mode: str = "exact"

    def check(self, f: BooleanFunction) -> Dict[str, bool]:
        tol = _tolerance(self.mode)
        l1 = sum(abs(v) for v in self.values)
        if self.mode == "exact":
            spectrum = fourier_table(self.values, self.t)
            low = [S for S in spectrum.support() if popcounts(self.t)[S] < self.d]
            orthogonal = not low
        else:
            psi = np.array(self.values, dtype=np.float64)
            chi = character_matrix(self.t, monomials(self.t, self.d - 1))
            orthogonal = bool(np.all(np.abs(chi @ psi) <= tol)) if len(chi) else True
        corr = sum(v * int(fx) for v, fx in zip(self.values, f.table))
        return {
            "l1-unit": abs(l1 - 1) <= tol,
            "orthogonal-below-d": orthogonal,
            "correlation-matches": abs(corr - self.correlation) <= tol,
            "correlation-exceeds-eps": corr > self.eps,
        }


@dataclass(frozen=True)
class OrthoDistribution:
    """mu >= 0, sum mu = 1, E_mu[f chi_S] = 0 for |S| < d."""

    t: int
    d: int
    weights: Tuple
    mode: str = "exact"

    def check(self, f: BooleanFunction) -> Dict[str, bool]:
        tol = _tolerance(self.mode)
        mu = self.weights
        total = sum(mu)
        ok_low = True
        for S in monomials(self.t, self.d - 1):
            chi = characters(S, self.t)
            corr = sum(m * int(fx) * int(c) for m, fx, c in zip(mu, f.table, chi))
            ok_low = ok_low and abs(corr) <= tol
        return {
            "nonnegative": all(m >= -tol for m in mu),
            "sums-to-one": abs(total - 1) <= tol,
            "orthogonal-below-d": ok_low,
        }


def _approx_program(f: BooleanFunction, d: int) -> Tuple[LPProblem, list]:
    t = f.t
    size = 1 << t
    masks = monomials(t, d)
    chi = character_matrix(t, masks)
    fv = [int(v) for v in f.table]
    objective = fv + [-v for v in fv]
    rows = [Constraint(tuple(int(c) for c in row) + tuple(-int(c) for c in row), "=", 0)
            for row in chi]
    rows.append(Constraint((1,) * (2 * size), "<=", 1))
    return LPProblem(objective=objective, constraints=rows, maximize=True), masks


@lru_cache(maxsize=4096)
def _best_approx_cached(f: BooleanFunction, d: int, mode: str) -> ApproxResult:
    problem, masks = _approx_program(f, d)
    sol = lp_solve(problem, mode)
    if sol.status != OPTIMAL:
        # the program is always feasible (psi = 0) and bounded by 1
        raise AssertionError(f"approximation program returned {sol.status}")
    size = 1 << f.t
    psi = tuple(u - v for u, v in zip(sol.primal[:size], sol.primal[size:]))
    coeffs = {S: y for S, y in zip(masks, sol.duals[:len(masks)]) if y != 0}
    logger.debug("E(%r, %d) = %s in %d pivots", f, d, sol.objective, sol.iterations)
    return ApproxResult(d=d, value=sol.objective, coeffs=coeffs, witness=psi, mode=mode)


def best_approx(f: BooleanFunction, d: int, mode: Optional[str] = None) -> ApproxResult:
    """E(f, d) with a best approximant; memoized per (f, d, mode)."""
    if not 0 <= d <= f.t:
        raise MalformedInputError(f"degree must satisfy 0 <= d <= {f.t}, got {d}")
    mode = NumericPolicy.lp_mode_for_arity(f.t, mode)
    return _best_approx_cached(f, d, mode)


def error_profile(f: BooleanFunction, mode: Optional[str] = None) -> Tuple:
    """(E(f,0), ..., E(f,t))."""
    return tuple(best_approx(f, d, mode).value for d in range(f.t + 1))


def approx_degree(f: BooleanFunction, eps, mode: Optional[str] = None) -> int:
    """Least d with E(f, d) <= eps."""
    eps = check_epsilon(eps)
    mode = NumericPolicy.lp_mode_for_arity(f.t, mode)
    tol = _tolerance(mode)
    for d in range(f.t + 1):
        if best_approx(f, d, mode).value <= eps + tol:
            return d
    return f.t


def dual_witness(f: BooleanFunction, eps, mode: Optional[str] = None) -> DualWitness:
    """
    Witness for deg_eps(f) = d: the optimal psi of the degree d-1 program, so
    its correlation is E(f, d-1) > eps.
    """
    eps = check_epsilon(eps)
    if f.is_constant():
        raise DegenerateInputError("constant functions have approximate degree 0 and no witness")
    mode = NumericPolicy.lp_mode_for_arity(f.t, mode)
    d = approx_degree(f, eps, mode)
    if d == 0:
        raise DegenerateInputError(f"deg_eps(f) = 0 for eps={eps}; no witness exists")
    res = best_approx(f, d - 1, mode)
    psi = res.witness
    l1 = sum(abs(v) for v in psi)
    if l1 != 1:
        psi = tuple(v / l1 for v in psi)
    corr = sum(v * int(fx) for v, fx in zip(psi, f.table))
    logger.info("dual witness for %r: d=%d, correlation %s > eps %s", f, d, corr, eps)
    return DualWitness(t=f.t, d=d, eps=eps, values=psi, correlation=corr, mode=mode)


def weight_program(f: BooleanFunction, d: int) -> Tuple[LPProblem, list]:
    """
    maximize sum_x mu(x) subject to |sum_x mu(x) f(x) chi_S(x)| <= 1 for |S| <= d.

    Its optimum is the real threshold weight W_R(f, d); unboundedness means
    f has no sign-representation of degree d. Rows come in (S, +), (S, -)
    pairs, whose duals are the positive and negative parts of lambda_S.
    """
    masks = monomials(f.t, d)
    chi = character_matrix(f.t, masks) * f.values()[None, :]
    rows = []
    for row in chi:
        plus = tuple(int(c) for c in row)
        rows.append(Constraint(plus, "<=", 1))
        rows.append(Constraint(tuple(-c for c in plus), "<=", 1))
    return LPProblem(objective=(1,) * (1 << f.t), constraints=rows, maximize=True), masks


@lru_cache(maxsize=1024)
def _weight_real_cached(f: BooleanFunction, d: int, mode: str) -> LPSolution:
    problem, _ = weight_program(f, d)
    return lp_solve(problem, mode)


def solve_weight_program(f: BooleanFunction, d: int, mode: str) -> LPSolution:
    return _weight_real_cached(f, d, mode)


def threshold_degree(f: BooleanFunction, mode: Optional[str] = None) -> int:
    """Least d for which some degree-d polynomial p has f(x) p(x) >= 1 everywhere."""
    mode = NumericPolicy.lp_mode_for_arity(f.t, mode)
    for d in range(f.t + 1):
        if solve_weight_program(f, d, mode).status != UNBOUNDED:
            return d
    return f.t


def ortho_distribution(f: BooleanFunction, d: int, mode: Optional[str] = None) -> Optional[OrthoDistribution]:
    """A distribution making f orthogonal to every chi_S with |S| < d, or None when none exists."""
    if not 0 <= d <= f.t + 1:
        raise MalformedInputError(f"degree must satisfy 0 <= d <= {f.t + 1}, got {d}")
    mode = NumericPolicy.lp_mode_for_arity(f.t, mode)
    size = 1 << f.t
    masks = monomials(f.t, d - 1) if d >= 1 else []
    chi = character_matrix(f.t, masks) * f.values()[None, :]
    rows = [Constraint(tuple(int(c) for c in row), "=", 0) for row in chi]
    rows.append(Constraint((1,) * size, "=", 1))
    sol = lp_solve(LPProblem(objective=(0,) * size, constraints=rows), mode)
    if sol.status == INFEASIBLE:
        logger.info("no orthogonalizing distribution for %r at d=%d", f, d)
        return None
    return OrthoDistribution(t=f.t, d=d, weights=sol.primal, mode=mode)
