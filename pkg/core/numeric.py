"""
Exact scalars and dense matrices.

Rationals are ``fractions.Fraction`` (always in lowest terms with a positive
denominator). A ``DenseMatrix`` wraps a read-only numpy array: integer and
``object`` (Fraction) arrays form the exact variant, ``float64`` the floating one.
"""

import math
from fractions import Fraction
from numbers import Rational as RationalNumber
from typing import Iterable, Sequence, Union

import numpy as np

from core.policy import MalformedInputError

Rational = Fraction
Scalar = Union[int, Fraction, float]


def parse_rational(text, exact: bool = True) -> Fraction:
    """Parse "p/q" or an integer. Decimal strings are rejected in exact mode."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        if exact:
            raise MalformedInputError(f"float {text!r} is not accepted in exact mode; use p/q")
        return Fraction(text)
    s = str(text).strip()
    if exact and any(c in s for c in ".eE"):
        raise MalformedInputError(f"{s!r} is not an exact rational; use p/q")
    try:
        value = Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise MalformedInputError(f"cannot parse rational {s!r}") from exc
    return value


def format_rational(value) -> str:
    """Canonical "num/den" string (den may be 1)."""
    q = Fraction(value)
    return f"{q.numerator}/{q.denominator}"


def is_exact_scalar(value) -> bool:
    return isinstance(value, (RationalNumber, np.integer)) and not isinstance(value, bool)


def to_exact(value) -> Fraction:
    if isinstance(value, np.integer):
        return Fraction(int(value))
    if isinstance(value, RationalNumber):
        return Fraction(value)
    raise MalformedInputError(f"{value!r} is not an exact scalar")


def common_denominator(values: Iterable) -> int:
    den = 1
    for v in values:
        den = math.lcm(den, Fraction(v).denominator)
    return den


def log2(value) -> float:
    """Base-2 logarithm of a rational or float; log of infinity is infinity."""
    if value == math.inf:
        return math.inf
    if isinstance(value, Fraction):
        # exact rationals can exceed float range
        return math.log2(value.numerator) - math.log2(value.denominator)
    return math.log2(value)


def _exact_array(data) -> np.ndarray:
    arr = np.array(data, dtype=object)
    flat = arr.reshape(-1)
    if all(isinstance(v, (int, np.integer)) and not isinstance(v, bool) for v in flat):
        try:
            return arr.astype(np.int64)
        except OverflowError:
            return np.vectorize(int, otypes=[object])(arr)
    return np.vectorize(to_exact, otypes=[object])(arr)


class DenseMatrix:
    """Immutable dense matrix; exact when backed by int64 or Fraction entries."""

    __slots__ = ("_data",)

    def __init__(self, data, exact=None):
        arr = np.asarray(data)
        if arr.dtype.kind == "O" or exact:
            arr = _exact_array(arr)
        elif arr.dtype.kind == "b":
            arr = arr.astype(np.int64)
        elif arr.dtype.kind not in "iuf":
            raise MalformedInputError(f"unsupported matrix dtype {arr.dtype}")
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise MalformedInputError(f"matrix must be 2-dimensional and non-empty, got shape {arr.shape}")
        arr = arr.copy()
        arr.setflags(write=False)
        self._data = arr

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: Sequence):
        """Row-major construction; length must equal rows*cols."""
        if rows < 1 or cols < 1:
            raise MalformedInputError(f"dimensions must be positive, got {rows}x{cols}")
        entries = list(entries)
        if len(entries) != rows * cols:
            raise MalformedInputError(
                f"expected {rows * cols} entries for a {rows}x{cols} matrix, got {len(entries)}")
        exact = all(is_exact_scalar(e) for e in entries)
        arr = np.empty(rows * cols, dtype=object if exact else np.float64)
        arr[:] = entries
        return cls(arr.reshape(rows, cols), exact=exact)

    @classmethod
    def identity(cls, size: int):
        return cls(np.eye(size, dtype=np.int64))

    @property
    def array(self) -> np.ndarray:
        return self._data

    @property
    def rows(self) -> int:
        return self._data.shape[0]

    @property
    def cols(self) -> int:
        return self._data.shape[1]

    @property
    def shape(self):
        return self._data.shape

    @property
    def is_exact(self) -> bool:
        return self._data.dtype.kind in "iuO"

    def to_float(self) -> np.ndarray:
        if self._data.dtype.kind == "f":
            return self._data
        return np.array([[float(v) for v in row] for row in self._data], dtype=np.float64) \
            if self._data.dtype.kind == "O" else self._data.astype(np.float64)

    def entry(self, i: int, j: int):
        v = self._data[i, j]
        return int(v) if isinstance(v, np.integer) else v

    def transpose(self) -> "DenseMatrix":
        return DenseMatrix(self._data.T)

    T = property(transpose)

    def __matmul__(self, other: "DenseMatrix") -> "DenseMatrix":
        if self.cols != other.rows:
            raise MalformedInputError(f"cannot multiply {self.shape} by {other.shape}")
        return DenseMatrix(self._data.dot(other._data))

    def __add__(self, other: "DenseMatrix") -> "DenseMatrix":
        self._same_shape(other)
        return DenseMatrix(self._data + other._data)

    def __sub__(self, other: "DenseMatrix") -> "DenseMatrix":
        self._same_shape(other)
        return DenseMatrix(self._data - other._data)

    def scale(self, factor) -> "DenseMatrix":
        if is_exact_scalar(factor) and self.is_exact:
            return DenseMatrix(self._data.astype(object) * Fraction(factor), exact=True)
        return DenseMatrix(self.to_float() * float(factor))

    def hadamard(self, other: "DenseMatrix") -> "DenseMatrix":
        self._same_shape(other)
        return DenseMatrix(self._data * other._data)

    def inner(self, other: "DenseMatrix"):
        """<A, B> = sum of entrywise products (exact when both are exact)."""
        self._same_shape(other)
        if self.is_exact and other.is_exact:
            return _exact_sum(self._data * other._data)
        return float(np.sum(self.to_float() * other.to_float()))

    def l1_norm(self):
        if self.is_exact:
            return _exact_sum(np.abs(self._data))
        return float(np.sum(np.abs(self._data)))

    def max_abs(self):
        if self.is_exact:
            return max(to_exact(v) for v in np.abs(self._data).reshape(-1))
        return float(np.max(np.abs(self._data)))

    def frobenius_sq(self):
        if self.is_exact:
            return _exact_sum(self._data * self._data)
        return float(np.sum(self._data * self._data))

    def abs(self) -> "DenseMatrix":
        return DenseMatrix(np.abs(self._data))

    def is_zero(self) -> bool:
        return not np.any(self._data != 0)

    def _same_shape(self, other):
        if self.shape != other.shape:
            raise MalformedInputError(f"shape mismatch {self.shape} vs {other.shape}")

    def __eq__(self, other):
        if not isinstance(other, DenseMatrix) or self.shape != other.shape:
            return NotImplemented
        return bool(np.all(self._data == other._data))

    def __hash__(self):
        return hash((self.shape, tuple(map(str, self._data.reshape(-1)))))

    def __repr__(self):
        kind = "exact" if self.is_exact else "float"
        return f"DenseMatrix({self.rows}x{self.cols}, {kind})"


def _exact_sum(arr: np.ndarray) -> Fraction:
    total = sum((to_exact(v) for v in arr.reshape(-1)), Fraction(0))
    return total
