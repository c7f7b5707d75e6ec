"""
Decision trees for Boolean functions: exact minimum depth by memoized search
over restrictions, with an influence-greedy fallback for larger arities.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple, Union

import numpy as np

from core.boolfn import BooleanFunction
from core.policy import MalformedInputError, NumericPolicy

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Leaf:
    value: int

    def depth(self) -> int:
        return 0

    def evaluate(self, x: int) -> int:
        return self.value


@dataclass(frozen=True)
class Node:
    """Query x_{var} (1-based); follow ``zero`` or ``one``."""

    var: int
    zero: "DecisionTree"
    one: "DecisionTree"

    def depth(self) -> int:
        return 1 + max(self.zero.depth(), self.one.depth())

    def evaluate(self, x: int) -> int:
        branch = self.one if (x >> (self.var - 1)) & 1 else self.zero
        return branch.evaluate(x)


DecisionTree = Union[Leaf, Node]


@dataclass(frozen=True)
class TreeResult:
    tree: DecisionTree
    depth: int
    optimal: bool


def computes(tree: DecisionTree, f: BooleanFunction) -> bool:
    return all(tree.evaluate(x) == f(x) for x in range(1 << f.t))


def paths_are_simple(tree: DecisionTree, seen: Tuple[int, ...] = ()) -> bool:
    """No variable is queried twice on one root-to-leaf path."""
    if isinstance(tree, Leaf):
        return True
    if tree.var in seen:
        return False
    seen = seen + (tree.var,)
    return paths_are_simple(tree.zero, seen) and paths_are_simple(tree.one, seen)


def _restrict(table: np.ndarray, pos: int, bit: int) -> np.ndarray:
    """Fix local variable ``pos`` of a flattened table to ``bit``."""
    return table.reshape(-1, 2, 1 << pos)[:, bit, :].reshape(-1)


def _search(f: BooleanFunction):
    @lru_cache(maxsize=None)
    def best(free: Tuple[int, ...], key: bytes):
        table = np.frombuffer(key, dtype=np.int8)
        if np.all(table == table[0]):
            return 0, Leaf(int(table[0]))
        best_depth, best_tree = None, None
        for pos, var in enumerate(free):
            rest = free[:pos] + free[pos + 1:]
            d0, t0 = best(rest, _restrict(table, pos, 0).tobytes())
            if best_depth is not None and d0 + 1 >= best_depth:
                continue
            d1, t1 = best(rest, _restrict(table, pos, 1).tobytes())
            depth = 1 + max(d0, d1)
            if best_depth is None or depth < best_depth:
                best_depth, best_tree = depth, Node(var, t0, t1)
        return best_depth, best_tree

    return best


def _greedy(free: Tuple[int, ...], table: np.ndarray) -> DecisionTree:
    if np.all(table == table[0]):
        return Leaf(int(table[0]))
    influence = [np.count_nonzero(_restrict(table, pos, 0) != _restrict(table, pos, 1))
                 for pos in range(len(free))]
    pos = int(np.argmax(influence))
    rest = free[:pos] + free[pos + 1:]
    return Node(free[pos],
                _greedy(rest, _restrict(table, pos, 0)),
                _greedy(rest, _restrict(table, pos, 1)))


def min_depth_tree(f: BooleanFunction) -> TreeResult:
    """Exact for t <= MAX_EXACT_TREE_ARITY; greedy (flagged non-optimal) above."""
    if f.t < 0:
        raise MalformedInputError("arity must be nonnegative")
    free = tuple(range(1, f.t + 1))
    table = np.ascontiguousarray(f.table, dtype=np.int8)
    if f.t <= NumericPolicy.MAX_EXACT_TREE_ARITY:
        depth, tree = _search(f)(free, table.tobytes())
        return TreeResult(tree=tree, depth=depth, optimal=True)
    logger.warning("arity %d exceeds exact decision-tree limit %d; using greedy tree",
                   f.t, NumericPolicy.MAX_EXACT_TREE_ARITY)
    tree = _greedy(free, table)
    return TreeResult(tree=tree, depth=tree.depth(), optimal=False)
