"""
Boolean functions on {0,1}^t with values in {-1,+1} (-1 is "true"), their
Fourier spectra, symmetric predicates and the named function catalog.

Input x is an integer mask: bit i-1 of x is variable x_i.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from core.numeric import common_denominator, to_exact
from core.policy import MalformedInputError, NumericPolicy, SizeLimitError

logger = logging.getLogger(__name__)


@lru_cache(maxsize=32)
def popcounts(t: int) -> np.ndarray:
    """popcount of every mask below 2^t."""
    pc = np.zeros(1, dtype=np.int64)
    for _ in range(t):
        pc = np.concatenate([pc, pc + 1])
    pc.setflags(write=False)
    return pc


def popcount(x: int) -> int:
    return bin(x).count("1")


def character(S: int, x: int) -> int:
    """chi_S(x) = (-1)^{|S & x|}."""
    return -1 if popcount(S & x) & 1 else 1


def characters(S: int, t: int) -> np.ndarray:
    """chi_S over all 2^t inputs."""
    idx = np.arange(1 << t, dtype=np.int64)
    return 1 - 2 * (popcounts(t)[idx & S] & 1)


def fwht(values: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform: out[S] = sum_x values[x] chi_S(x)."""
    a = np.array(values, copy=True)
    size = a.size
    if size & (size - 1):
        raise MalformedInputError(f"transform length must be a power of two, got {size}")
    h = 1
    while h < size:
        a = a.reshape(-1, 2, h)
        lo = a[:, 0, :].copy()
        hi = a[:, 1, :].copy()
        a[:, 0, :] = lo + hi
        a[:, 1, :] = lo - hi
        a = a.reshape(-1)
        h *= 2
    return a


class BooleanFunction:
    """Truth table of f: {0,1}^t -> {-1,+1}; immutable."""

    __slots__ = ("_t", "_table", "name")

    def __init__(self, t: int, table, name: Optional[str] = None):
        if t < 0:
            raise MalformedInputError(f"arity must be nonnegative, got {t}")
        if t > NumericPolicy.MAX_EVAL_ARITY:
            raise SizeLimitError(f"arity {t} exceeds evaluation limit {NumericPolicy.MAX_EVAL_ARITY}")
        arr = np.asarray(table, dtype=np.int64).reshape(-1)
        if arr.size != 1 << t:
            raise MalformedInputError(f"table of arity {t} needs {1 << t} entries, got {arr.size}")
        if not np.all(np.abs(arr) == 1):
            raise MalformedInputError("truth table values must be -1 or +1")
        arr = arr.astype(np.int8)
        arr.setflags(write=False)
        self._t = t
        self._table = arr
        self.name = name

    @classmethod
    def from_callable(cls, t: int, fn, name: Optional[str] = None) -> "BooleanFunction":
        return cls(t, [fn(x) for x in range(1 << t)], name=name)

    @classmethod
    def from_hex(cls, text: str, t: int, name: Optional[str] = None) -> "BooleanFunction":
        """Bit x of the integer is 1 iff f(x) = -1."""
        s = text.strip().lower()
        if s.startswith("0x"):
            s = s[2:]
        try:
            value = int(s, 16)
        except ValueError as exc:
            raise MalformedInputError(f"{text!r} is not a hex truth table") from exc
        size = 1 << t
        if value >> size:
            raise MalformedInputError(f"hex table {text!r} has bits beyond 2^{t} inputs")
        raw = value.to_bytes((size + 7) // 8, "little")
        bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[:size]
        return cls(t, 1 - 2 * bits.astype(np.int64), name=name)

    def to_hex(self) -> str:
        bits = (self._table < 0).astype(np.uint8)
        raw = np.packbits(bits, bitorder="little").tobytes()
        value = int.from_bytes(raw, "little")
        width = max(1, (1 << self._t) // 4)
        return format(value, "x").zfill(width)

    @property
    def t(self) -> int:
        return self._t

    @property
    def table(self) -> np.ndarray:
        return self._table

    def values(self) -> np.ndarray:
        return self._table.astype(np.int64)

    def __call__(self, x: int) -> int:
        return int(self._table[x])

    def __len__(self):
        return self._table.size

    def is_constant(self) -> bool:
        return bool(np.all(self._table == self._table[0]))

    def symmetric_levels(self) -> Optional[Tuple[int, ...]]:
        """D(k) for k = 0..t if f depends only on |x|, else None."""
        pc = popcounts(self._t)
        levels = [None] * (self._t + 1)
        for x, v in enumerate(self._table):
            k = pc[x]
            if levels[k] is None:
                levels[k] = int(v)
            elif levels[k] != v:
                return None
        return tuple(levels)

    def negate(self) -> "BooleanFunction":
        return BooleanFunction(self._t, -self.values())

    def __eq__(self, other):
        if not isinstance(other, BooleanFunction):
            return NotImplemented
        return self._t == other._t and bool(np.all(self._table == other._table))

    def __hash__(self):
        return hash((self._t, self._table.tobytes()))

    def __repr__(self):
        label = self.name or self.to_hex()
        return f"BooleanFunction(t={self._t}, {label})"


class FourierSpectrum:
    """
    f_hat(S) for every mask S, stored as integers over one common denominator
    so that every coefficient is an exact rational.
    """

    __slots__ = ("t", "scaled", "denominator")

    def __init__(self, t: int, scaled: np.ndarray, denominator: int):
        self.t = t
        self.scaled = scaled
        self.denominator = int(denominator)

    def coefficient(self, S: int) -> Fraction:
        return Fraction(int(self.scaled[S]), self.denominator)

    def __getitem__(self, S: int) -> Fraction:
        return self.coefficient(S)

    def support(self) -> List[int]:
        return [int(S) for S in np.nonzero(self.scaled != 0)[0]]

    def items(self) -> Iterable[Tuple[int, Fraction]]:
        for S in self.support():
            yield S, self.coefficient(S)

    def as_dict(self) -> Dict[int, Fraction]:
        return dict(self.items())

    def degree(self) -> int:
        support = self.support()
        if not support:
            return 0
        return int(max(popcounts(self.t)[support]))

    def max_abs(self) -> Fraction:
        return Fraction(int(max(abs(int(v)) for v in self.scaled)), self.denominator)

    def parseval_sum(self) -> Fraction:
        total = sum(int(v) * int(v) for v in self.scaled)
        return Fraction(total, self.denominator ** 2)

    def inverse(self) -> List[Fraction]:
        """Table reconstructed from the coefficients."""
        back = fwht(self.scaled)
        return [Fraction(int(v), self.denominator) for v in back]

    def levels(self) -> Dict[int, List[Tuple[int, Fraction]]]:
        """Nonzero coefficients grouped by |S|."""
        out: Dict[int, List[Tuple[int, Fraction]]] = {}
        pc = popcounts(self.t)
        for S, c in self.items():
            out.setdefault(int(pc[S]), []).append((S, c))
        return out


def fourier(f: BooleanFunction) -> FourierSpectrum:
    """Exact spectrum of a Boolean function; denominator 2^t."""
    return FourierSpectrum(f.t, fwht(f.values()), 1 << f.t)


def fourier_table(values: Sequence, t: int) -> FourierSpectrum:
    """Exact spectrum of a rational-valued table on {0,1}^t."""
    if len(values) != 1 << t:
        raise MalformedInputError(f"table of arity {t} needs {1 << t} entries, got {len(values)}")
    exact = [to_exact(v) for v in values]
    den = common_denominator(exact)
    ints = np.array([int(v * den) for v in exact], dtype=object)
    if all(abs(v) < (1 << (62 - t)) for v in ints):
        ints = ints.astype(np.int64)
    return FourierSpectrum(t, fwht(ints), den << t)


def degree(f: BooleanFunction) -> int:
    return fourier(f).degree()


@dataclass(frozen=True)
class Predicate:
    """D: {0..n} -> {-1,+1}."""

    n: int
    values: Tuple[int, ...]
    name: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if self.n < 1:
            raise MalformedInputError(f"predicate needs n >= 1, got {self.n}")
        if len(self.values) != self.n + 1:
            raise MalformedInputError(f"predicate on n={self.n} needs {self.n + 1} values, got {len(self.values)}")
        if any(v not in (-1, 1) for v in self.values):
            raise MalformedInputError("predicate values must be -1 or +1")

    def __call__(self, i: int) -> int:
        return self.values[i]

    def is_constant(self) -> bool:
        return len(set(self.values)) == 1

    def shift(self, k: int) -> "Predicate":
        """D_k(i) = D(k + i) on {0..n-k}."""
        if not 0 <= k < self.n:
            raise MalformedInputError(f"shift {k} out of range for n={self.n}")
        return Predicate(self.n - k, self.values[k:], name=f"{self.name or 'D'}>>{k}")

    def change_points(self) -> List[int]:
        """Every l with D(l) != D(l-1)."""
        return [l for l in range(1, self.n + 1) if self.values[l] != self.values[l - 1]]


def from_predicate(D: Predicate, t: int) -> BooleanFunction:
    """f(x) = D(|x|) on t <= D.n variables."""
    if t > D.n:
        raise MalformedInputError(f"arity {t} exceeds predicate range n={D.n}")
    NumericPolicy.check_arity(t)
    levels = np.array(D.values[:t + 1], dtype=np.int64)
    name = f"{D.name}_{t}" if D.name else None
    return BooleanFunction(t, levels[popcounts(t)], name=name)


def l0_l1(D: Predicate) -> Tuple[int, int]:
    """
    Smallest l0 <= floor(n/2) and l1 <= ceil(n/2) with D constant on
    [l0, n - l1]. Both ranges contain floor(n/2), so the pair always exists.
    """
    mid = D.n // 2
    target = D(mid)
    l0 = mid
    while l0 > 0 and D(l0 - 1) == target:
        l0 -= 1
    hi = mid
    while hi < D.n and D(hi + 1) == target:
        hi += 1
    return l0, D.n - hi


# name -> (description, parameters)
CATALOG = {
    "or": ("true iff some x_i = 1", ("t",)),
    "and": ("true iff every x_i = 1", ("t",)),
    "parity": ("chi_[t], true iff |x| is odd", ("t",)),
    "maj": ("true iff |x| > t/2", ("t",)),
    "thr-k": ("true iff |x| >= k", ("t", "k")),
    "mp": ("OR of m ANDs of fan-in k on m*k variables", ("m", "k")),
    "omb": ("sign(1 + sum_i (-2)^i x_i)", ("t",)),
    "const": ("constant value (default +1)", ("t", "value")),
    "chi": ("character chi_S for a mask S", ("t", "S")),
}

PREDICATES = {
    "disj": ("D(i) = +1 iff i = 0", ("n",)),
    "or": ("D(i) = -1 iff i >= 1", ("n",)),
    "and": ("D(i) = -1 iff i = n", ("n",)),
    "parity": ("D(i) = (-1)^i", ("n",)),
    "maj": ("D(i) = -1 iff i > n/2", ("n",)),
    "thr-k": ("D(i) = -1 iff i >= k", ("n", "k")),
}


def _split_param(name: str, k: Optional[int]) -> Tuple[str, Optional[int]]:
    if name.startswith("thr-") and name[4:].isdigit():
        return "thr-k", int(name[4:])
    if name == "thr":
        return "thr-k", k
    return name, k


def catalog(name: str, t: Optional[int] = None, k: Optional[int] = None, m: Optional[int] = None,
            S: Optional[int] = None, value: int = 1) -> BooleanFunction:
    """Build a named function; ``thr-3`` style names carry their threshold."""
    key, k = _split_param(name.lower(), k)
    if key not in CATALOG:
        raise MalformedInputError(f"unknown function {name!r}; known: {sorted(CATALOG)}")
    if key == "mp":
        if not m or not k or m < 1 or k < 1:
            raise MalformedInputError("mp needs positive m and k")
        t = m * k
    if t is None or t < 1:
        raise MalformedInputError(f"{name} needs a positive arity t")
    NumericPolicy.check_arity(t)
    pc = popcounts(t)
    idx = np.arange(1 << t, dtype=np.int64)

    if key == "or":
        table = np.where(idx != 0, -1, 1)
        label = f"OR_{t}"
    elif key == "and":
        table = np.where(idx == (1 << t) - 1, -1, 1)
        label = f"AND_{t}"
    elif key == "parity":
        table = 1 - 2 * (pc & 1)
        label = f"PARITY_{t}"
    elif key == "maj":
        table = np.where(2 * pc > t, -1, 1)
        label = f"MAJ_{t}"
    elif key == "thr-k":
        if k is None or not 0 <= k <= t + 1:
            raise MalformedInputError(f"thr-k needs 0 <= k <= t+1, got {k}")
        table = np.where(pc >= k, -1, 1)
        label = f"THR{k}_{t}"
    elif key == "mp":
        block = (1 << k) - 1
        hit = np.zeros(idx.size, dtype=bool)
        for j in range(m):
            hit |= ((idx >> (j * k)) & block) == block
        table = np.where(hit, -1, 1)
        label = f"MP({m},{k})"
    elif key == "omb":
        weights = np.array([(-2) ** i for i in range(1, t + 1)], dtype=np.int64)
        bits = (idx[:, None] >> np.arange(t)) & 1
        table = np.sign(1 + bits @ weights)
        label = f"OMB_{t}"
    elif key == "const":
        if value not in (-1, 1):
            raise MalformedInputError(f"const value must be -1 or +1, got {value}")
        table = np.full(idx.size, value)
        label = f"CONST{value:+d}_{t}"
    else:
        if S is None or not 0 <= S < (1 << t):
            raise MalformedInputError(f"chi needs a mask 0 <= S < 2^{t}, got {S}")
        table = characters(S, t)
        label = f"CHI{S}_{t}"
    return BooleanFunction(t, table, name=label)


def predicate(name: str, n: int, k: Optional[int] = None) -> Predicate:
    key, k = _split_param(name.lower(), k)
    if key not in PREDICATES:
        raise MalformedInputError(f"unknown predicate {name!r}; known: {sorted(PREDICATES)}")
    if n < 1:
        raise MalformedInputError(f"predicate needs n >= 1, got {n}")
    rng = range(n + 1)
    if key == "disj":
        values = [1 if i == 0 else -1 for i in rng]
    elif key == "or":
        values = [-1 if i >= 1 else 1 for i in rng]
    elif key == "and":
        values = [-1 if i == n else 1 for i in rng]
    elif key == "parity":
        values = [-1 if i & 1 else 1 for i in rng]
    elif key == "maj":
        values = [-1 if 2 * i > n else 1 for i in rng]
    else:
        if k is None or not 0 <= k <= n + 1:
            raise MalformedInputError(f"thr-k needs 0 <= k <= n+1, got {k}")
        values = [-1 if i >= k else 1 for i in rng]
    label = key if key != "thr-k" else f"thr-{k}"
    return Predicate(n, values, name=label)


def parse_predicate(text: str) -> Predicate:
    """Comma-separated D(0),...,D(n), e.g. "1,-1,-1"."""
    try:
        values = [int(v) for v in text.split(",")]
    except ValueError as exc:
        raise MalformedInputError(f"{text!r} is not a list of -1/+1 values") from exc
    return Predicate(len(values) - 1, values)


def random_function(t: int, rng: np.random.Generator) -> BooleanFunction:
    return BooleanFunction(t, 1 - 2 * rng.integers(0, 2, size=1 << t), name=None)


def all_functions(t: int) -> Iterable[BooleanFunction]:
    """Every Boolean function of arity t (2^(2^t) of them)."""
    size = 1 << t
    for code in range(1 << size):
        bits = (code >> np.arange(size)) & 1
        yield BooleanFunction(t, 1 - 2 * bits)


def monomials(t: int, d: int) -> List[int]:
    """Masks with |S| <= d, ordered by (|S|, S)."""
    pc = popcounts(t)
    masks = [S for S in range(1 << t) if pc[S] <= d]
    return sorted(masks, key=lambda S: (int(pc[S]), S))


def num_monomials(t: int, d: int) -> int:
    return sum(math.comb(t, i) for i in range(0, min(d, t) + 1))
