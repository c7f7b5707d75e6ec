"""
Communication, discrepancy and approximate-rank bounds for pattern matrices.

Each bound is returned as a BoundReport whose checks replay the argument
behind it on the witnesses actually constructed: the dual witness psi (or
the minimax distribution mu), its pattern matrix Psi, the spectral closed
form for ||Psi|| and, when the matrices are small enough, the matrices
themselves. All logarithms are base 2.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

import numpy as np

from core.approx import approx_degree, best_approx, check_epsilon, dual_witness
from core.boolfn import BooleanFunction, degree, num_monomials
from core.consistency import ConsistencyLedger
from core.dtree import min_depth_tree
from core.evaluator import BoundReport
from core.numeric import DenseMatrix, common_denominator, log2, to_exact
from core.pattern import (PatternMatrixSpec, build, rank_exact, spectrum_formula, witness_matrix,
                          witness_norm, witness_norm_ceiling, witness_scale)
from core.policy import MalformedInputError, NumericPolicy, SizeLimitError, WeightProvenance
from core.protocols import exhaustive_det_run
from core.spectral import numerical_rank, singular_values
from core.spectral import spectral_norm as svd_norm
from core.symmetric import symmetric_approx_degree, symmetric_dual_witness
from core.weight import weight_bruteforce, weight_dual_distribution, weight_int_upper, weight_real

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Rectangle:
    """Row and column subsets as bit masks over a rows x cols matrix."""

    row_mask: int
    col_mask: int
    rows: int
    cols: int

    def __post_init__(self):
        if not 0 <= self.row_mask < 1 << self.rows or not 0 <= self.col_mask < 1 << self.cols:
            raise MalformedInputError(f"rectangle masks fall outside a {self.rows}x{self.cols} matrix")

    def row_indices(self) -> Tuple[int, ...]:
        return tuple(i for i in range(self.rows) if self.row_mask >> i & 1)

    def col_indices(self) -> Tuple[int, ...]:
        return tuple(j for j in range(self.cols) if self.col_mask >> j & 1)

    def mass(self, M: DenseMatrix):
        """Sum of M over the rectangle."""
        rows, cols = self.row_indices(), self.col_indices()
        if not rows or not cols:
            return 0
        block = M.array[np.ix_(rows, cols)]
        if M.is_exact:
            return sum((to_exact(v) for v in block.reshape(-1)), Fraction(0))
        return float(block.sum())


@dataclass(frozen=True)
class WeightEstimate:
    """A value for W(f, d) together with the direction in which it may err."""

    d: int
    value: object
    kind: str

    @property
    def finite(self) -> bool:
        return self.value != math.inf


@dataclass(frozen=True)
class RankConstruction:
    """A = (n, t, phi)-pattern matrix for a best approximant phi with ||F - A||_inf <= eps."""

    d: int
    spec: PatternMatrixSpec
    rank: int
    trace_norm: float
    deviation: Fraction

    def matrix(self) -> DenseMatrix:
        return build(self.spec)


def _rational(value, name: str):
    if isinstance(value, float):
        return value
    try:
        return Fraction(value)
    except (TypeError, ValueError) as exc:
        raise MalformedInputError(f"{name} must be rational, got {value!r}") from exc


def _check_gamma(gamma):
    gamma = _rational(gamma, "gamma")
    if not 0 < gamma < 1:
        raise MalformedInputError(f"gamma must satisfy 0 < gamma < 1, got {gamma}")
    return gamma


def _check_function(f: BooleanFunction, n: int, t: int) -> PatternMatrixSpec:
    if not isinstance(f, BooleanFunction):
        raise MalformedInputError("expected a BooleanFunction")
    return PatternMatrixSpec(n, t, f)


def _size(n: int, t: int) -> int:
    """|X| |Y| of the (n, t) pattern matrix."""
    q = n // t
    return (1 << n) * q ** t * (1 << t)


def _small(spec: PatternMatrixSpec) -> bool:
    rows, cols = spec.shape
    return rows <= NumericPolicy.MAX_DISC_SIDE and cols <= NumericPolicy.MAX_DISC_SIDE


def _gdm_value(numerator, norm: float, size: int) -> Optional[float]:
    """log_4 of numerator / (3 ||Psi|| sqrt(size)); None when the ratio is not positive."""
    if norm <= 0:
        raise MalformedInputError("witness matrix has zero spectral norm")
    ratio = float(numerator) / (3 * norm * math.sqrt(size))
    if ratio <= 0:
        return None
    return math.log2(ratio) / 2


def _check_unit_mass(Psi: DenseMatrix):
    l1 = Psi.l1_norm()
    ok = l1 == 1 if Psi.is_exact else abs(l1 - 1) <= 1e-12
    if not ok:
        raise MalformedInputError(f"witness matrix must have unit l1 mass, got {l1}")
    return l1


def _check_distribution(P: DenseMatrix):
    if P.is_exact:
        if any(to_exact(v) < 0 for v in P.array.reshape(-1)):
            raise MalformedInputError("distribution has negative entries")
        total = P.l1_norm()
        if total != 1:
            raise MalformedInputError(f"distribution must sum to 1, got {total}")
        return
    arr = P.to_float()
    if np.any(arr < -1e-12):
        raise MalformedInputError("distribution has negative entries")
    if abs(arr.sum() - 1) > 1e-12:
        raise MalformedInputError(f"distribution must sum to 1, got {arr.sum()}")


def adeg_witness(f: BooleanFunction, eps, mode: Optional[str] = None):
    """deg_eps(f) and a dual witness for it (None when the degree is 0); symmetric f uses level weights."""
    eps = check_epsilon(eps)
    levels = f.symmetric_levels()
    if levels is not None:
        d = symmetric_approx_degree(levels, f.t, eps, mode)
        witness = symmetric_dual_witness(levels, f.t, eps, mode) if d else None
        return d, witness
    d = approx_degree(f, eps, mode)
    return d, (dual_witness(f, eps, mode) if d else None)


def weight_estimate(f: BooleanFunction, d: int, side: str, direction: str,
                    mode: Optional[str] = None) -> WeightEstimate:
    """
    W(f, d) as a bound formula of the given shape may use it: infinity and
    small brute-force values are exact; otherwise the real relaxation serves
    as a lower estimate and the rounding certificate as an upper one.
    """
    allowed = WeightProvenance.admissible(side, direction)
    real = weight_real(f, d, mode)
    if not real.finite:
        return WeightEstimate(d, math.inf, WeightProvenance.EXACT)
    if num_monomials(f.t, d) <= NumericPolicy.BOUND_BRUTEFORCE_MONOMIALS:
        brute = weight_bruteforce(f, d)
        if not brute.exceeds_cap:
            return WeightEstimate(d, brute.weight, WeightProvenance.EXACT)
    if WeightProvenance.LOWER in allowed:
        estimate = WeightEstimate(d, real.value, WeightProvenance.LOWER)
    else:
        NumericPolicy.check_arity(f.t, NumericPolicy.MAX_EXACT_LP_ARITY)
        estimate = WeightEstimate(d, weight_int_upper(f, d).weight, WeightProvenance.UPPER)
    WeightProvenance.require(estimate.kind, side, direction, "weight estimate")
    logger.debug("W(%r, %d) estimated as %s (%s)", f, d, estimate.value, estimate.kind)
    return estimate


def _weight_witness(f: BooleanFunction, d: int, mode: Optional[str]):
    """psi = f mu for the distribution mu minimizing max_{|S| < d} |E_mu[f chi_S]|."""
    dist = weight_dual_distribution(f, d - 1, mode)
    mu = dist.mu
    if dist.mode == "float":
        mu = tuple(max(float(m), 0.0) for m in mu)
        total = sum(mu)
        mu = tuple(m / total for m in mu)
    psi = tuple(m * int(fx) for m, fx in zip(mu, f.table))
    return mu, psi, dist.value


def constructed_distribution(f: BooleanFunction, n: int, t: int, d: int,
                             mode: Optional[str] = None) -> DenseMatrix:
    """P = |Psi| for the weight witness at degree d: the pattern matrix of 2^{-n}(n/t)^{-t} mu."""
    spec = _check_function(f, n, t)
    if not 1 <= d <= t:
        raise MalformedInputError(f"degree must satisfy 1 <= d <= {t}, got {d}")
    mu, _, _ = _weight_witness(f, d, mode)
    c = witness_scale(n, t)
    scaled = tuple(m * float(c) if isinstance(m, float) else to_exact(m) * c for m in mu)
    P = PatternMatrixSpec(n, t, scaled)
    NumericPolicy.check_matrix_size(*spec.shape)
    return build(P)


def uniform_distribution(rows: int, cols: int) -> DenseMatrix:
    return DenseMatrix(np.full((rows, cols), Fraction(1, rows * cols), dtype=object), exact=True)


def gdm_bound(F: DenseMatrix, Psi: DenseMatrix, eps, psi_norm: Optional[float] = None) -> BoundReport:
    """
    log_4((<Psi, F> - 2 eps) / (3 ||Psi|| sqrt(|X||Y|))) for a unit-mass Psi.

    ``psi_norm`` may supply ||Psi|| from the spectral closed form; it is then
    checked against the numerical value.
    """
    eps = check_epsilon(eps)
    if F.shape != Psi.shape:
        raise MalformedInputError(f"shape mismatch {F.shape} vs {Psi.shape}")
    ledger = ConsistencyLedger()
    ledger.record("unit-mass", _check_unit_mass(Psi) is not None)
    corr = Psi.inner(F)
    numeric = svd_norm(Psi)
    if psi_norm is not None:
        ledger.close("norm-matches-svd", numeric, psi_norm)
    norm = psi_norm if psi_norm is not None else numeric
    value = _gdm_value(corr - 2 * eps, norm, F.rows * F.cols)
    details = {"correlation": corr, "norm": norm}
    if value is None:
        return BoundReport.from_ledger("gdm", "lower", -math.inf, {"eps": eps}, ledger,
                                       vacuous=True, details=details)
    return BoundReport.from_ledger("gdm", "lower", value, {"eps": eps}, ledger,
                                   vacuous=value <= 0, details=details)


def q_lower_adeg(f: BooleanFunction, n: int, t: int, eps, delta,
                 mode: Optional[str] = None) -> BoundReport:
    """(1/4) deg_eps(f) log(n/t) - (1/2) log(3 / (eps - 2 delta))."""
    spec = _check_function(f, n, t)
    eps = check_epsilon(eps)
    delta = _rational(delta, "delta")
    if not 0 <= delta < eps / 2:
        raise MalformedInputError(f"need 0 <= delta < eps/2, got eps={eps}, delta={delta}")
    q = spec.q
    d, witness = adeg_witness(f, eps, mode)
    value = d * math.log2(q) / 4 - log2(3 / (eps - 2 * delta)) / 2
    inputs = {"f": f.to_hex(), "n": n, "t": t, "eps": eps, "delta": delta}
    details = {"degree": d}
    ledger = ConsistencyLedger()
    if eps == Fraction(1, 3) and delta == Fraction(1, 7):
        simplified = d * math.log2(q) / 4 - 3
        details["simplified"] = simplified
        ledger.at_least("simplified-form", value, simplified)
    if witness is None:
        ledger.record("degree-zero", f.is_constant())
        return BoundReport.from_ledger("main-cc", "lower", value, inputs, ledger, vacuous=True, details=details)

    ledger.merge("witness", witness.check(f))
    psi = witness.values
    norm = witness_norm(n, t, psi)
    ledger.at_most("norm-ceiling", norm, witness_norm_ceiling(n, t, d))
    chain = _gdm_value(witness.correlation - 2 * delta, norm, _size(n, t))
    ledger.at_least("gdm-chain", chain if chain is not None else -math.inf, value)
    details.update(correlation=witness.correlation, norm=norm)
    if spec.fits():
        F = build(spec)
        Psi = witness_matrix(n, t, psi)
        ledger.close("matrix-unit-mass", Psi.l1_norm(), 1)
        ledger.close("matrix-correlation", Psi.inner(F), witness.correlation)
        direct = gdm_bound(F, Psi, delta, psi_norm=norm)
        ledger.merge("gdm", {c.name: c.passed for c in direct.checks})
        ledger.at_least("gdm-matrix", direct.value, value)
    report = BoundReport.from_ledger("main-cc", "lower", value, inputs, ledger, vacuous=value <= 0, details=details)
    logger.info("main-cc bound for %r at n=%d t=%d: %.6f (%s)", f, n, t, value, report.status)
    return report


def q_lower_weight(f: BooleanFunction, n: int, t: int, d: int, gamma,
                   mode: Optional[str] = None) -> BoundReport:
    """(1/4) min{d log(n/t), log(W(f, d-1) / 2t)} - (1/2) log(3 / gamma)."""
    spec = _check_function(f, n, t)
    if not 1 <= d <= t:
        raise MalformedInputError(f"degree must satisfy 1 <= d <= {t}, got {d}")
    gamma = _check_gamma(gamma)
    q = spec.q
    W = weight_estimate(f, d - 1, "lower", "increasing", mode)
    first = d * math.log2(q)
    second = log2(Fraction(W.value) / (2 * t)) if W.finite and not isinstance(W.value, float) \
        else (math.log2(W.value / (2 * t)) if W.finite else math.inf)
    value = min(first, second) / 4 - log2(3 / gamma) / 2
    inputs = {"f": f.to_hex(), "n": n, "t": t, "d": d, "gamma": gamma}
    details = {"weight": W.value, "weight_kind": W.kind}

    ledger = ConsistencyLedger()
    mu, psi, v = _weight_witness(f, d, mode)
    real = weight_real(f, d - 1, mode)
    if real.finite:
        ledger.close("minimax-duality", v * real.value, 1)
    else:
        ledger.close("minimax-duality", v, 0)
    ledger.close("unit-mass", sum(abs(p) for p in psi), 1)
    norm = witness_norm(n, t, psi)
    ceiling = max(float(v), (1.0 / q) ** (d / 2)) / math.sqrt((1 << (n + t)) * q ** t)
    ledger.at_most("weight-norm", norm, ceiling)
    chain = _gdm_value(gamma, norm, _size(n, t))
    ledger.at_least("gdm-chain", chain if chain is not None else -math.inf, value)
    if spec.fits():
        ledger.close("matrix-correlation", witness_matrix(n, t, psi).inner(build(spec)), 1)
    details.update(minimax=v, norm=norm)
    return BoundReport.from_ledger("small-bias-cc", "lower", value, inputs, ledger,
                                   vacuous=value <= 0, details=details)


def disc_bruteforce(P: DenseMatrix, F: DenseMatrix):
    """
    max over rectangles S x T of |sum P(x,y) F(x,y)|. For each subset of the
    shorter side the best opposite subset takes every line of one sign.
    """
    if P.shape != F.shape:
        raise MalformedInputError(f"shape mismatch {P.shape} vs {F.shape}")
    if P.rows > NumericPolicy.MAX_DISC_SIDE or P.cols > NumericPolicy.MAX_DISC_SIDE:
        raise SizeLimitError(f"exhaustive discrepancy is limited to {NumericPolicy.MAX_DISC_SIDE} rows and columns")
    _check_distribution(P)
    M = P.hadamard(F)
    transposed = M.cols > M.rows
    A = M.array.T if transposed else M.array
    scale = 1
    if M.is_exact:
        entries = [to_exact(v) for v in A.reshape(-1)]
        scale = common_denominator(entries)
        dtype = np.int64 if scale < 1 << 58 else object
        A = np.array([int(v * scale) for v in entries], dtype=dtype).reshape(A.shape)
    else:
        A = np.asarray(A, dtype=np.float64)
    k = A.shape[1]
    subsets = (np.arange(1 << k, dtype=np.int64)[:, None] >> np.arange(k, dtype=np.int64)) & 1
    sums = subsets.dot(A.T)
    pos = np.where(sums > 0, sums, 0).sum(axis=1)
    neg = np.where(sums < 0, -sums, 0).sum(axis=1)
    i_pos, i_neg = int(np.argmax(pos)), int(np.argmax(neg))
    if pos[i_pos] >= neg[i_neg]:
        best, chosen, lines = pos[i_pos], i_pos, sums[i_pos] > 0
    else:
        best, chosen, lines = neg[i_neg], i_neg, sums[i_neg] < 0
    line_mask = sum(1 << i for i, hit in enumerate(lines) if hit)
    if transposed:
        rect = Rectangle(row_mask=chosen, col_mask=line_mask, rows=M.rows, cols=M.cols)
    else:
        rect = Rectangle(row_mask=line_mask, col_mask=chosen, rows=M.rows, cols=M.cols)
    value = Fraction(int(best), scale) if M.is_exact else float(best)
    return value, rect


def disc_spectral(P: DenseMatrix, F: DenseMatrix) -> float:
    """sqrt(|X||Y|) ||P o F||, an upper bound on disc_P(F)."""
    if P.shape != F.shape:
        raise MalformedInputError(f"shape mismatch {P.shape} vs {F.shape}")
    _check_distribution(P)
    return math.sqrt(P.rows * P.cols) * svd_norm(P.hadamard(F))


def disc_upper_weight(f: BooleanFunction, n: int, t: int, mode: Optional[str] = None) -> BoundReport:
    """disc(F)^2 <= min_d max{2t / W(f, d-1), (t/n)^d}, capped at 1."""
    spec = _check_function(f, n, t)
    q = spec.q
    best_d, best_sq = None, None
    for d in range(1, t + 1):
        W = weight_estimate(f, d - 1, "upper", "decreasing", mode)
        weight_term = Fraction(0) if not W.finite else (
            2 * t / W.value if isinstance(W.value, float) else Fraction(2 * t) / Fraction(W.value))
        square = max(weight_term, Fraction(1, q ** d))
        if best_sq is None or square < best_sq:
            best_d, best_sq = d, square
    value = min(1.0, math.sqrt(best_sq))
    inputs = {"f": f.to_hex(), "n": n, "t": t}
    details = {"degree": best_d, "square": best_sq}

    ledger = ConsistencyLedger()
    _, psi, v = _weight_witness(f, best_d, mode)
    norm = witness_norm(n, t, psi)
    spectral = math.sqrt(_size(n, t)) * norm
    ledger.at_most("spectral-chain", spectral, value)
    if spec.fits():
        F = build(spec)
        P = constructed_distribution(f, n, t, best_d, mode)
        direct = disc_spectral(P, F)
        ledger.close("spectral-matches-formula", direct, spectral)
        if _small(spec):
            brute, rect = disc_bruteforce(P, F)
            ledger.at_most("bruteforce-below-spectral", brute, direct)
            details["rectangle"] = (rect.row_mask, rect.col_mask)
    return BoundReport.from_ledger("disc-upper", "upper", value, inputs, ledger,
                                   vacuous=value >= 1, details=details)


def disc_lower_weight(f: BooleanFunction, n: int, t: int, d: int, mode: Optional[str] = None) -> BoundReport:
    """disc(F) >= (t/n)^d / (8 W(f, d)), with W taken exactly or from above."""
    spec = _check_function(f, n, t)
    if not 0 <= d <= t:
        raise MalformedInputError(f"degree must satisfy 0 <= d <= {t}, got {d}")
    inputs = {"f": f.to_hex(), "n": n, "t": t, "d": d}
    ledger = ConsistencyLedger()
    W = weight_estimate(f, d, "lower", "decreasing", mode)
    if not W.finite:
        ledger.record("no-sign-representation", not weight_real(f, d, mode).finite)
        return BoundReport.from_ledger("disc-lower", "lower", 0, inputs, ledger, vacuous=True,
                                       details={"weight": W.value, "weight_kind": W.kind})
    value = Fraction(1, 8 * int(W.value)) * Fraction(1, spec.q) ** d
    if spec.fits() and _small(spec):
        F = build(spec)
        brute, _ = disc_bruteforce(uniform_distribution(*spec.shape), F)
        ledger.at_least("uniform-distribution", brute, value)
        P = constructed_distribution(f, n, t, max(d, 1), mode)
        brute, _ = disc_bruteforce(P, F)
        ledger.at_least("constructed-distribution", brute, value)
    else:
        ledger.record("weight-provenance", W.kind in WeightProvenance.admissible("lower", "decreasing"))
    return BoundReport.from_ledger("disc-lower", "lower", value, inputs, ledger, vacuous=value <= 0,
                                   details={"weight": W.value, "weight_kind": W.kind})


def disc_upper_adeg(f: BooleanFunction, n: int, t: int, gamma, mode: Optional[str] = None) -> BoundReport:
    """disc(F) <= gamma + (t/n)^{deg_{1-gamma}(f)/2}."""
    spec = _check_function(f, n, t)
    gamma = _check_gamma(gamma)
    q = spec.q
    d, witness = adeg_witness(f, 1 - gamma, mode)
    if d % 2 == 0 and not isinstance(gamma, float):
        value = gamma + Fraction(1, q ** (d // 2))
    else:
        value = float(gamma) + (1.0 / q) ** (d / 2)
    inputs = {"f": f.to_hex(), "n": n, "t": t, "gamma": gamma}
    ledger = ConsistencyLedger()
    if witness is None:
        ledger.record("degree-zero", f.is_constant())
        return BoundReport.from_ledger("disc-upper-adeg", "upper", value, inputs, ledger,
                                       vacuous=True, details={"degree": d})
    ledger.merge("witness", witness.check(f))
    norm = witness_norm(n, t, witness.values)
    spectral = math.sqrt(_size(n, t)) * norm
    ledger.at_most("disc-P-H", spectral, (1.0 / q) ** (d / 2))
    ledger.at_most("disc-P-F", float(1 - witness.correlation) + spectral, value)
    if spec.fits() and _small(spec):
        Psi = witness_matrix(n, t, witness.values)
        brute, _ = disc_bruteforce(Psi.abs(), build(spec))
        ledger.at_most("bruteforce", brute, value)
    return BoundReport.from_ledger("disc-upper-adeg", "upper", value, inputs, ledger,
                                   vacuous=value >= 1, details={"degree": d, "norm": norm})


def trace_norm_lower(F: DenseMatrix, Psi: DenseMatrix, eps, psi_norm: Optional[float] = None) -> float:
    """(<F, Psi> - eps ||Psi||_1) / ||Psi||, a lower bound on the eps-approximate trace norm of F."""
    if F.shape != Psi.shape:
        raise MalformedInputError(f"shape mismatch {F.shape} vs {Psi.shape}")
    if Psi.is_zero():
        raise MalformedInputError("Psi must be nonzero")
    eps = _rational(eps, "eps")
    if eps < 0:
        raise MalformedInputError(f"eps must be nonnegative, got {eps}")
    norm = psi_norm if psi_norm is not None else svd_norm(Psi)
    return float(Psi.inner(F) - eps * Psi.l1_norm()) / norm


def rank_upper_construction(f: BooleanFunction, n: int, t: int, eps) -> RankConstruction:
    """The pattern matrix of a best approximant at degree deg_eps(f), exactly within eps of F."""
    _check_function(f, n, t)
    eps = check_epsilon(eps)
    NumericPolicy.check_arity(f.t, NumericPolicy.MAX_EXACT_LP_ARITY)
    d = approx_degree(f, eps, "exact")
    res = best_approx(f, d, "exact")
    phi = tuple(to_exact(v) for v in res.polynomial(f.t))
    spec = PatternMatrixSpec(n, t, phi)
    deviation = max(abs(int(fx) - p) for fx, p in zip(f.table, phi))
    if deviation > eps:
        raise AssertionError(f"approximant deviates by {deviation} > {eps}")
    return RankConstruction(d=d, spec=spec, rank=rank_exact(spec),
                            trace_norm=spectrum_formula(spec).trace_norm(), deviation=deviation)


def _rank_sandwich(ledger: ConsistencyLedger, spec: PatternMatrixSpec, value, construction: RankConstruction):
    exact = rank_exact(spec)
    ledger.at_most("rank-sandwich", value, min(exact, construction.rank))
    if spec.fits():
        ledger.record("numeric-rank", numerical_rank(singular_values(build(spec))) == exact)
    return exact


def rank_lower_adeg(f: BooleanFunction, n: int, t: int, eps, delta, mode: Optional[str] = None) -> BoundReport:
    """rk_delta(F) >= ((eps - delta) / (1 + delta))^2 (n/t)^{deg_eps(f)}."""
    spec = _check_function(f, n, t)
    eps = check_epsilon(eps)
    delta = _rational(delta, "delta")
    if not 0 <= delta <= eps:
        raise MalformedInputError(f"need 0 <= delta <= eps, got eps={eps}, delta={delta}")
    q = spec.q
    d, witness = adeg_witness(f, eps, mode)
    value = ((eps - delta) / (1 + delta)) ** 2 * q ** d
    inputs = {"f": f.to_hex(), "n": n, "t": t, "eps": eps, "delta": delta}
    ledger = ConsistencyLedger()
    details = {"degree": d}
    if witness is not None and eps > delta:
        size = _size(n, t)
        norm = witness_norm(n, t, witness.values)
        trace = float(witness.correlation - delta) / norm
        ledger.at_least("trace-norm-chain", trace, float(eps - delta) * q ** (d / 2) * math.sqrt(size))
        ledger.at_least("rank-chain", trace ** 2 / (size * float(1 + delta) ** 2), value)
        details["trace_norm_lower"] = trace
        if spec.fits():
            direct = trace_norm_lower(build(spec), witness_matrix(n, t, witness.values), delta)
            ledger.close("trace-norm-matrix", direct, trace)
    construction = rank_upper_construction(f, n, t, delta)
    details["rank"] = _rank_sandwich(ledger, spec, value, construction)
    details["construction_rank"] = construction.rank
    return BoundReport.from_ledger("rank-bounded-error", "lower", value, inputs, ledger,
                                   vacuous=value <= 0, details=details)


def rank_lower_weight(f: BooleanFunction, n: int, t: int, d: int, gamma,
                      mode: Optional[str] = None) -> BoundReport:
    """rk_{1-gamma}(F) >= (gamma / (2 - gamma))^2 min{(n/t)^d, W(f, d-1) / 2t}."""
    spec = _check_function(f, n, t)
    if not 1 <= d <= t:
        raise MalformedInputError(f"degree must satisfy 1 <= d <= {t}, got {d}")
    gamma = _check_gamma(gamma)
    q = spec.q
    W = weight_estimate(f, d - 1, "lower", "increasing", mode)
    cap = Fraction(q ** d)
    if W.finite:
        cap = min(cap, Fraction(W.value) / (2 * t)) if not isinstance(W.value, float) \
            else min(float(cap), W.value / (2 * t))
    value = (gamma / (2 - gamma)) ** 2 * cap
    inputs = {"f": f.to_hex(), "n": n, "t": t, "d": d, "gamma": gamma}
    ledger = ConsistencyLedger()
    _, psi, v = _weight_witness(f, d, mode)
    size = _size(n, t)
    norm = witness_norm(n, t, psi)
    trace = float(gamma) / norm
    ledger.at_least("rank-chain", trace ** 2 / (size * float(2 - gamma) ** 2), value)
    construction = rank_upper_construction(f, n, t, 1 - gamma)
    details = {"weight": W.value, "weight_kind": W.kind, "trace_norm_lower": trace,
               "construction_rank": construction.rank}
    details["rank"] = _rank_sandwich(ledger, spec, value, construction)
    return BoundReport.from_ledger("rank-small-bias", "lower", value, inputs, ledger,
                                   vacuous=value <= 0, details=details)


def rank_bounds(f: BooleanFunction, n: int, t: int, eps=None, delta=None, gamma=None, d=None,
                mode: Optional[str] = None) -> Tuple[BoundReport, ...]:
    """Bounded-error report when eps/delta are given, small-bias report when gamma/d are given."""
    reports = []
    if eps is not None:
        reports.append(rank_lower_adeg(f, n, t, eps, 0 if delta is None else delta, mode))
    if gamma is not None:
        reports.append(rank_lower_weight(f, n, t, 1 if d is None else d, gamma, mode))
    if not reports:
        raise MalformedInputError("rank_bounds needs eps (bounded error) or gamma (small bias)")
    return tuple(reports)


def logrank_check(f: BooleanFunction, n: int, t: int) -> BoundReport:
    """rank(F) >= (n/t)^{deg f}, with the decision-tree protocol cost attached."""
    spec = _check_function(f, n, t)
    q = spec.q
    d = degree(f)
    rank = rank_exact(spec)
    value = q ** d
    ledger = ConsistencyLedger()
    ledger.at_least("rank-vs-degree", rank, value)
    tree = min_depth_tree(f)
    ceiling = tree.depth * ((q - 1).bit_length() + 2)
    details = {"rank": rank, "degree": d, "tree_depth": tree.depth,
               "tree_optimal": tree.optimal, "det_cost_ceiling": ceiling}
    if spec.fits():
        ledger.record("numeric-rank", numerical_rank(singular_values(build(spec))) == rank)
    if spec.shape[0] * spec.shape[1] <= 1 << 16:
        run = exhaustive_det_run(f, n, t, tree.tree)
        ledger.record("protocol-correct", run.correct == run.total)
        ledger.at_most("protocol-cost", run.max_cost, ceiling)
        details["det_cost"] = run.max_cost
    return BoundReport.from_ledger("logrank", "lower", value, {"f": f.to_hex(), "n": n, "t": t},
                                   ledger, details=details)
