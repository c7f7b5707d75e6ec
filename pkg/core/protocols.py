"""
Two-party protocols for the (n, t, f)-pattern matrix.

Alice holds x in {0,1}^n, Bob holds (V, w). The deterministic protocol walks
a decision tree for f; the randomized one samples a monomial of an integer
sign-representation with probability |lambda_S| / W from shared randomness.
"""

import json
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

import numpy as np

from core.boolfn import BooleanFunction, popcounts
from core.dtree import DecisionTree, Leaf, computes, min_depth_tree
from core.pattern import ColumnIndex, project
from core.policy import MalformedInputError, NumericPolicy, SizeLimitError
from core.weight import WeightCertificate

logger = logging.getLogger(__name__)

ALICE = "A"
BOB = "B"


@dataclass(frozen=True)
class ProtocolInput:
    n: int
    t: int
    x: int
    column: ColumnIndex

    def __post_init__(self):
        if self.t < 1 or self.n <= self.t or self.n % self.t:
            raise MalformedInputError(f"need 1 <= t < n with t | n, got n={self.n}, t={self.t}")
        if not 0 <= self.x < 1 << self.n:
            raise MalformedInputError(f"x must be an {self.n}-bit mask")
        if len(self.column.digits) != self.t or any(not 0 <= d < self.q for d in self.column.digits):
            raise MalformedInputError(f"V needs {self.t} digits in [0, {self.q})")
        if not 0 <= self.column.w < 1 << self.t:
            raise MalformedInputError(f"w must be a {self.t}-bit mask")

    @property
    def q(self) -> int:
        return self.n // self.t

    def z(self) -> int:
        """x|_V xor w, the point at which f is evaluated."""
        return project(self.x, self.column, self.q) ^ self.column.w


@dataclass(frozen=True)
class Message:
    speaker: str
    bits: str


@dataclass(frozen=True)
class Transcript:
    messages: Tuple[Message, ...]
    output: int

    @property
    def cost(self) -> int:
        return sum(len(m.bits) for m in self.messages)

    def to_json(self, inp: Optional[ProtocolInput] = None) -> str:
        record = {
            "messages": [[m.speaker, m.bits] for m in self.messages],
            "output": self.output,
            "cost": self.cost,
        }
        if inp is not None:
            record["input"] = {"x": inp.x, "V": list(inp.column.digits), "w": inp.column.w}
        return json.dumps(record, sort_keys=True, separators=(",", ":"))


def _field(value: int, width: int) -> str:
    return format(value, f"0{width}b") if width else ""


def index_width(q: int) -> int:
    """ceil(log2 q) bits."""
    return (q - 1).bit_length()


def det_cost_ceiling(depth: int, q: int) -> int:
    return depth * (index_width(q) + 2)


def det_protocol(tree: DecisionTree, inp: ProtocolInput) -> Transcript:
    """
    At a node querying z_i Bob sends the digit of V in block i and the bit
    w_i; Alice answers with x at that position. Both then know z_i.
    """
    width = index_width(inp.q)
    messages = []
    node = tree
    while not isinstance(node, Leaf):
        i = node.var - 1
        if not 0 <= i < inp.t:
            raise MalformedInputError(f"tree queries variable {node.var} outside [1, {inp.t}]")
        digit = inp.column.digits[i]
        w_bit = inp.column.w >> i & 1
        messages.append(Message(BOB, _field(digit, width) + str(w_bit)))
        x_bit = inp.x >> (i * inp.q + digit) & 1
        messages.append(Message(ALICE, str(x_bit)))
        node = node.one if x_bit ^ w_bit else node.zero
    return Transcript(tuple(messages), node.value)


@dataclass(frozen=True)
class DetRun:
    total: int
    correct: int
    max_cost: int
    ceiling: int


def _all_inputs(n: int, t: int):
    q = n // t
    for ordinal in range(q ** t << t):
        column = ColumnIndex.from_ordinal(ordinal, n, t)
        for x in range(1 << n):
            yield ProtocolInput(n, t, x, column)


def exhaustive_det_run(f: BooleanFunction, n: int, t: int, tree: Optional[DecisionTree] = None) -> DetRun:
    """Run the tree protocol on every input pair and count correct outputs."""
    if f.t != t:
        raise MalformedInputError(f"function has arity {f.t}, expected {t}")
    q = n // t
    if (1 << n) * (q ** t << t) > 1 << 16:
        raise SizeLimitError("exhaustive protocol runs are limited to 2^16 input pairs")
    if tree is None:
        tree = min_depth_tree(f).tree
    if not computes(tree, f):
        raise MalformedInputError("decision tree does not compute f")
    total = correct = max_cost = 0
    for inp in _all_inputs(n, t):
        transcript = det_protocol(tree, inp)
        total += 1
        correct += transcript.output == f(inp.z())
        max_cost = max(max_cost, transcript.cost)
    run = DetRun(total=total, correct=correct, max_cost=max_cost, ceiling=det_cost_ceiling(tree.depth(), q))
    logger.info("deterministic protocol for %r: %d/%d correct, cost %d (ceiling %d)",
                f, correct, total, max_cost, run.ceiling)
    return run


def _check_certificate(cert: WeightCertificate):
    if not cert.lambdas:
        raise MalformedInputError("certificate has no monomials")
    if any(not isinstance(v, int) for v in cert.lambdas.values()):
        raise MalformedInputError("certificate coefficients must be integers")


def _cumulative(cert: WeightCertificate):
    masks = sorted(cert.lambdas)
    weights = np.array([abs(cert.lambdas[S]) for S in masks], dtype=np.int64)
    return masks, np.cumsum(weights)


def rand_cost_ceiling(d: int, q: int) -> int:
    """Bob's block of indices, Alice's parity bit and Bob's output bit."""
    return index_width(q ** d) + 2


def rand_weight_protocol(cert: WeightCertificate, inp: ProtocolInput, seed: int) -> Transcript:
    """
    Shared randomness picks S with probability |lambda_S| / W. Bob sends the
    elements of V in the blocks of S as one base-q number, Alice returns
    chi_S(x|_V) and Bob announces sign(lambda_S) chi_S(x|_V) chi_S(w).
    """
    _check_certificate(cert)
    if cert.t != inp.t:
        raise MalformedInputError(f"certificate arity {cert.t} differs from t={inp.t}")
    masks, cumulative = _cumulative(cert)
    rng = np.random.Generator(np.random.PCG64(seed))
    draw = int(rng.integers(int(cumulative[-1])))
    S = masks[int(np.searchsorted(cumulative, draw, side="right"))]
    blocks = [i for i in range(inp.t) if S >> i & 1]
    index = 0
    for i in blocks:
        index = index * inp.q + inp.column.digits[i]
    bob_index = _field(index, index_width(inp.q ** len(blocks)))
    proj = project(inp.x, inp.column, inp.q)
    alice_bit = bin(S & proj).count("1") & 1
    chi_w = -1 if bin(S & inp.column.w).count("1") & 1 else 1
    sign = 1 if cert.lambdas[S] > 0 else -1
    output = sign * (-1 if alice_bit else 1) * chi_w
    messages = (Message(BOB, bob_index), Message(ALICE, str(alice_bit)),
                Message(BOB, "1" if output < 0 else "0"))
    return Transcript(messages, output)


def expected_output(cert: WeightCertificate, z: int) -> Fraction:
    """E[output] at a point z = x|_V xor w, which is p(z) / W."""
    p = sum(v * (-1 if bin(S & z).count("1") & 1 else 1) for S, v in cert.lambdas.items())
    return Fraction(p, cert.weight)


def exact_advantage(cert: WeightCertificate, f: BooleanFunction, n: int, t: int) -> Fraction:
    """min over inputs of f * E[output] = min_z |p(z)| / W."""
    _check_certificate(cert)
    if f.t != t or cert.t != t:
        raise MalformedInputError(f"arity mismatch: f has {f.t}, certificate {cert.t}, t={t}")
    if t < 1 or n <= t or n % t:
        raise MalformedInputError(f"need 1 <= t < n with t | n, got n={n}, t={t}")
    if not cert.sign_represents(f):
        raise MalformedInputError("certificate does not sign-represent f")
    return min(int(f(z)) * expected_output(cert, z) for z in range(1 << t))


@dataclass(frozen=True)
class SimulationStats:
    trials: int
    seed: int
    weight: int
    success_floor: Fraction
    exact_success: Fraction
    empirical_success: Optional[float]
    sigma: Optional[float]
    max_cost: int
    cost_ceiling: int

    @property
    def within_band(self) -> Optional[bool]:
        if self.empirical_success is None:
            return None
        slack = NumericPolicy.MONTE_CARLO_SIGMAS * self.sigma
        return abs(self.empirical_success - float(self.exact_success)) <= slack


def simulate_weight_protocol(cert: WeightCertificate, f: BooleanFunction, n: int, t: int,
                             trials: int, seed: int) -> SimulationStats:
    """
    Monte-Carlo run over uniform inputs and shared randomness, compared with
    the exact mean success (1 + E_z |p(z)| / W) / 2 over uniform z.
    """
    advantage = exact_advantage(cert, f, n, t)
    if trials < 0:
        raise MalformedInputError(f"trials must be nonnegative, got {trials}")
    W = cert.weight
    q = n // t
    pc = popcounts(t)
    mean_abs = sum((abs(int(f(z)) * expected_output(cert, z)) for z in range(1 << t)), Fraction(0)) / (1 << t)
    exact_success = (1 + mean_abs) / 2
    d = max(int(pc[S]) for S in cert.lambdas)
    ceiling = rand_cost_ceiling(d, q)
    if trials == 0:
        return SimulationStats(trials=0, seed=seed, weight=W, success_floor=(1 + advantage) / 2,
                               exact_success=exact_success, empirical_success=None, sigma=None,
                               max_cost=0, cost_ceiling=ceiling)

    rng = np.random.Generator(np.random.PCG64(seed))
    x = rng.integers(1 << n, size=trials, dtype=np.int64)
    digits = rng.integers(q, size=(trials, t), dtype=np.int64)
    w = rng.integers(1 << t, size=trials, dtype=np.int64)
    masks, cumulative = _cumulative(cert)
    picks = np.searchsorted(cumulative, rng.integers(int(cumulative[-1]), size=trials), side="right")
    S = np.array(masks, dtype=np.int64)[picks]
    signs = np.array([1 if cert.lambdas[m] > 0 else -1 for m in masks], dtype=np.int64)[picks]

    proj = np.zeros(trials, dtype=np.int64)
    for j in range(t):
        proj |= ((x >> (j * q + digits[:, j])) & 1) << j
    z = proj ^ w
    outputs = signs * (1 - 2 * (pc[S & z] & 1))
    success = float(np.mean(outputs == f.values()[z]))
    sizes = pc[S]
    costs = np.array([index_width(q ** int(k)) + 2 for k in range(t + 1)])[sizes]

    p = float(exact_success)
    sigma = math.sqrt(p * (1 - p) / trials)
    stats = SimulationStats(trials=trials, seed=seed, weight=W, success_floor=(1 + advantage) / 2,
                            exact_success=exact_success, empirical_success=success, sigma=sigma,
                            max_cost=int(costs.max()), cost_ceiling=ceiling)
    if not stats.within_band:
        logger.warning("Monte-Carlo success %.6f is outside %.1f sigma of exact %.6f",
                       success, NumericPolicy.MONTE_CARLO_SIGMAS, p)
    return stats
