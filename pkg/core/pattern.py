"""
Pattern matrices A[x, (V, w)] = phi(x|_V xor w) and their closed-form spectra.

Rows are x = 0..2^n-1. Columns are ordered by (V, w) with V given by t
digits in base q = n/t (digit j picks the element of block j, most
significant digit first) and w a t-bit mask.
"""

import hashlib
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np

from core.boolfn import BooleanFunction, FourierSpectrum, characters, fourier_table, popcounts
from core.numeric import DenseMatrix, format_rational, to_exact
from core.policy import MalformedInputError, NumericPolicy, SizeLimitError
from core.spectral import group_spectrum, singular_values

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ColumnIndex:
    digits: Tuple[int, ...]
    w: int

    def ordinal(self, q: int) -> int:
        v = 0
        for d in self.digits:
            v = v * q + d
        return (v << len(self.digits)) | self.w

    def positions(self, q: int) -> Tuple[int, ...]:
        """The 1-based elements of V, one per block."""
        return tuple(j * q + d + 1 for j, d in enumerate(self.digits))

    @classmethod
    def from_ordinal(cls, ordinal: int, n: int, t: int) -> "ColumnIndex":
        q = n // t
        w = ordinal & ((1 << t) - 1)
        v = ordinal >> t
        digits = []
        for _ in range(t):
            digits.append(v % q)
            v //= q
        return cls(tuple(reversed(digits)), w)


@dataclass(frozen=True)
class PatternMatrixSpec:
    """(n, t, phi) with t | n, t < n; phi holds exact rationals (or floats)."""

    n: int
    t: int
    phi: Tuple

    def __post_init__(self):
        if self.t < 1 or self.n <= self.t or self.n % self.t:
            raise MalformedInputError(f"need 1 <= t < n with t | n, got n={self.n}, t={self.t}")
        phi = self.phi
        if isinstance(phi, BooleanFunction):
            if phi.t != self.t:
                raise MalformedInputError(f"phi has arity {phi.t}, expected {self.t}")
            phi = tuple(int(v) for v in phi.table)
        else:
            phi = tuple(v if isinstance(v, float) else to_exact(v) for v in phi)
        if len(phi) != 1 << self.t:
            raise MalformedInputError(f"phi needs {1 << self.t} entries, got {len(phi)}")
        object.__setattr__(self, "phi", phi)

    @property
    def q(self) -> int:
        return self.n // self.t

    @property
    def shape(self) -> Tuple[int, int]:
        return 1 << self.n, self.q ** self.t << self.t

    @property
    def is_exact(self) -> bool:
        return not any(isinstance(v, float) for v in self.phi)

    def fits(self) -> bool:
        return NumericPolicy.matrix_fits(*self.shape)

    def phi_sha256(self) -> str:
        text = ",".join(format_rational(v) if not isinstance(v, float) else repr(v) for v in self.phi)
        return hashlib.sha256(text.encode("utf-8")).hexdigest()

    def spectrum_of_phi(self) -> FourierSpectrum:
        if not self.is_exact:
            raise MalformedInputError("exact spectrum needs a rational phi")
        return fourier_table(self.phi, self.t)


def project(x: int, V: Union[ColumnIndex, Sequence[int]], q: int = None) -> int:
    """x|_V as a t-bit mask: bit j is x at the j-th element of V (1-based positions)."""
    positions = V.positions(q) if isinstance(V, ColumnIndex) else tuple(V)
    out = 0
    for j, pos in enumerate(positions):
        out |= ((x >> (pos - 1)) & 1) << j
    return out


def _phi_array(spec: PatternMatrixSpec) -> np.ndarray:
    if all(isinstance(v, int) or (isinstance(v, Fraction) and v.denominator == 1) for v in spec.phi):
        return np.array([int(v) for v in spec.phi], dtype=np.int64)
    if spec.is_exact:
        return np.array(spec.phi, dtype=object)
    return np.array(spec.phi, dtype=np.float64)


def _all_digits(q: int, t: int):
    for v in range(q ** t):
        digits = []
        for _ in range(t):
            digits.append(v % q)
            v //= q
        yield tuple(reversed(digits))


def build(spec: PatternMatrixSpec) -> DenseMatrix:
    rows, cols = spec.shape
    NumericPolicy.check_matrix_size(rows, cols)
    phi = _phi_array(spec)
    x = np.arange(rows, dtype=np.int64)
    w = np.arange(1 << spec.t, dtype=np.int64)
    blocks = []
    for digits in _all_digits(spec.q, spec.t):
        proj = np.zeros(rows, dtype=np.int64)
        for j, d in enumerate(digits):
            proj |= ((x >> (j * spec.q + d)) & 1) << j
        blocks.append(phi[proj[:, None] ^ w[None, :]])
    logger.debug("built %dx%d pattern matrix for n=%d t=%d", rows, cols, spec.n, spec.t)
    return DenseMatrix(np.hstack(blocks))


@dataclass(frozen=True)
class SingularSpectrum:
    """Distinct nonzero singular values as exact squares, descending, with multiplicities."""

    squares: Tuple[Tuple[Fraction, int], ...]

    def values(self) -> List[Tuple[float, int]]:
        return [(math.sqrt(s), m) for s, m in self.squares]

    @property
    def rank(self) -> int:
        return sum(m for _, m in self.squares)

    def top(self) -> float:
        return math.sqrt(self.squares[0][0]) if self.squares else 0.0

    def frobenius_sq(self) -> Fraction:
        return sum((s * m for s, m in self.squares), Fraction(0))

    def trace_norm(self) -> float:
        return sum(math.sqrt(s) * m for s, m in self.squares)


def spectrum_formula(spec: PatternMatrixSpec) -> SingularSpectrum:
    """
    Each S with phi_hat(S) != 0 contributes the value
    sqrt(2^{n+t} q^t) |phi_hat(S)| q^{-|S|/2}, repeated q^{|S|} times.
    """
    spectrum = spec.spectrum_of_phi()
    pc = popcounts(spec.t)
    scale = Fraction(1 << (spec.n + spec.t))
    groups: Dict[Fraction, int] = {}
    for S, c in spectrum.items():
        k = int(pc[S])
        square = scale * spec.q ** (spec.t - k) * c * c
        groups[square] = groups.get(square, 0) + spec.q ** k
    return SingularSpectrum(tuple(sorted(groups.items(), key=lambda item: -item[0])))


def spectral_norm(spec: PatternMatrixSpec) -> float:
    return spectrum_formula(spec).top()


def rank_exact(spec: PatternMatrixSpec) -> int:
    spectrum = spec.spectrum_of_phi()
    pc = popcounts(spec.t)
    return sum(spec.q ** int(pc[S]) for S in spectrum.support())


def frobenius_sq(spec: PatternMatrixSpec) -> Fraction:
    """||A||_F^2 = 2^n q^t sum_z phi(z)^2."""
    return (1 << spec.n) * spec.q ** spec.t * sum((v * v for v in spec.phi), Fraction(0))


def spectra_match(formula: Sequence[Tuple[float, int]], numeric: Sequence[Tuple[float, int]],
                  rel: float = NumericPolicy.COMPARISON_TOLERANCE) -> bool:
    """Same multiplicities and every value within ``rel`` of the formula value."""
    if len(formula) != len(numeric):
        return False
    for (v1, m1), (v2, m2) in zip(formula, numeric):
        if m1 != m2:
            return False
        bound = rel * abs(v1) if v1 else NumericPolicy.PIVOT_TOLERANCE
        if abs(v1 - v2) > bound:
            return False
    return True


def compare_with_svd(spec: PatternMatrixSpec) -> Dict[str, object]:
    """Grouped numerical SVD of build(spec) against the formula."""
    formula = spectrum_formula(spec).values()
    numeric = group_spectrum(singular_values(build(spec)))
    return {"formula": formula, "numeric": numeric, "match": spectra_match(formula, numeric)}


def witness_scale(n: int, t: int) -> Fraction:
    """2^{-n} (n/t)^{-t}."""
    return Fraction(1, (1 << n) * (n // t) ** t)


def _normalized(psi: Sequence):
    l1 = sum(abs(v) for v in psi)
    if any(isinstance(v, float) for v in psi):
        if abs(l1 - 1) > 1e-12:
            raise MalformedInputError(f"witness must have unit l1 mass, got {l1}")
    elif l1 != 1:
        raise MalformedInputError(f"witness must have unit l1 mass, got {l1}")
    return psi


def witness_spec(n: int, t: int, psi: Sequence) -> PatternMatrixSpec:
    psi = _normalized(tuple(psi))
    c = witness_scale(n, t)
    scaled = tuple(v * float(c) if isinstance(v, float) else to_exact(v) * c for v in psi)
    return PatternMatrixSpec(n, t, scaled)


def witness_matrix(n: int, t: int, psi: Sequence) -> DenseMatrix:
    """The (n, t, 2^{-n}(n/t)^{-t} psi) pattern matrix; psi must have unit l1 mass."""
    return build(witness_spec(n, t, psi))


def witness_norm(n: int, t: int, psi: Sequence) -> float:
    """Spectral norm of the witness matrix from the closed form."""
    spec = witness_spec(n, t, psi)
    if spec.is_exact:
        return spectral_norm(spec)
    # float psi: evaluate the same closed form numerically
    q = n // t
    coeffs = np.array(psi, dtype=np.float64)
    pc = popcounts(t)
    best = 0.0
    for S in range(1 << t):
        c = abs(float(characters(S, t) @ coeffs)) / (1 << t)
        best = max(best, c * (1.0 / q) ** (pc[S] / 2))
    return math.sqrt((1 << (n + t)) * q ** t) * float(witness_scale(n, t)) * best


def witness_norm_ceiling(n: int, t: int, d: int) -> float:
    """(t/n)^{d/2} (2^{n+t} (n/t)^t)^{-1/2}."""
    q = n // t
    return (1.0 / q) ** (d / 2) / math.sqrt((1 << (n + t)) * q ** t)


def verify_sum_lemma(S: int, T: int, n: int, t: int) -> bool:
    """A_S A_T^T = 0 and A_S^T A_T = 0 for the chi_S and chi_T pattern matrices."""
    if S == T:
        raise MalformedInputError("the block-orthogonality check needs S != T")
    if not (0 <= S < 1 << t and 0 <= T < 1 << t):
        raise MalformedInputError(f"masks must lie below 2^{t}")
    a = build(PatternMatrixSpec(n, t, tuple(int(v) for v in characters(S, t)))).array
    b = build(PatternMatrixSpec(n, t, tuple(int(v) for v in characters(T, t)))).array
    return bool(not np.any(a @ b.T) and not np.any(a.T @ b))


def check_buildable(spec: PatternMatrixSpec):
    if not spec.fits():
        rows, cols = spec.shape
        raise SizeLimitError(f"{rows}x{cols} pattern matrix exceeds the {NumericPolicy.MAX_MATRIX_ENTRIES}-entry gate")
