"""
Symmetric eigenvalues by cyclic Jacobi rotations, and the singular values,
norms and numerical rank derived from them.

Each sweep visits every (p, q) pair once, in round-robin order, so the
rotations of one round act on disjoint index pairs and are applied together.
"""

import logging
from functools import lru_cache
from typing import List, Tuple

import numpy as np

from core.numeric import DenseMatrix
from core.policy import MalformedInputError, NumericPolicy

logger = logging.getLogger(__name__)


@lru_cache(maxsize=32)
def _round_robin(size: int) -> Tuple[Tuple[np.ndarray, np.ndarray], ...]:
    players = list(range(size)) + ([-1] if size % 2 else [])
    k = len(players)
    rounds = []
    for _ in range(k - 1):
        pairs = [(players[i], players[k - 1 - i]) for i in range(k // 2)]
        pairs = [(min(a, b), max(a, b)) for a, b in pairs if a >= 0 and b >= 0]
        if pairs:
            p, q = zip(*pairs)
            rounds.append((np.array(p, dtype=np.intp), np.array(q, dtype=np.intp)))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def _as_float(m) -> np.ndarray:
    if isinstance(m, DenseMatrix):
        return np.array(m.to_float(), dtype=np.float64)
    arr = np.asarray(m)
    if arr.dtype.kind == "O":
        arr = np.vectorize(float, otypes=[np.float64])(arr)
    return np.array(arr, dtype=np.float64)


def sym_eigenvalues(m) -> np.ndarray:
    """Eigenvalues of a symmetric matrix, sorted descending."""
    a = _as_float(m)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise MalformedInputError(f"eigenvalues need a square matrix, got shape {a.shape}")
    scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
    if np.max(np.abs(a - a.T), initial=0.0) > NumericPolicy.SYMMETRY_TOLERANCE * scale:
        raise MalformedInputError("matrix is not symmetric within tolerance")
    size = a.shape[0]
    a = (a + a.T) / 2
    norm = float(np.sqrt(np.sum(a * a)))
    if size == 1 or norm == 0.0:
        return np.sort(np.diag(a))[::-1].copy()

    rounds = _round_robin(size)
    target = NumericPolicy.JACOBI_TOLERANCE * norm
    for sweep in range(1, NumericPolicy.JACOBI_MAX_SWEEPS + 1):
        for p, q in rounds:
            _rotate(a, p, q)
        off = float(np.sqrt(max(np.sum(a * a) - np.sum(np.diag(a) ** 2), 0.0)))
        logger.debug("jacobi sweep %d: off-diagonal mass %.3e", sweep, off)
        if off < target:
            break
    else:
        logger.warning("jacobi did not converge in %d sweeps (off-diagonal %.3e)",
                       NumericPolicy.JACOBI_MAX_SWEEPS, off)
    return np.sort(np.diag(a))[::-1].copy()


def _rotate(a: np.ndarray, p: np.ndarray, q: np.ndarray):
    apq = a[p, q]
    active = np.abs(apq) > 0.0
    if not np.any(active):
        return
    p, q, apq = p[active], q[active], apq[active]
    theta = (a[q, q] - a[p, p]) / (2.0 * apq)
    sign = np.where(theta >= 0.0, 1.0, -1.0)
    t = sign / (np.abs(theta) + np.hypot(theta, 1.0))
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c

    cols_p, cols_q = a[:, p].copy(), a[:, q].copy()
    a[:, p] = c * cols_p - s * cols_q
    a[:, q] = s * cols_p + c * cols_q
    rows_p, rows_q = a[p, :].copy(), a[q, :].copy()
    a[p, :] = c[:, None] * rows_p - s[:, None] * rows_q
    a[q, :] = s[:, None] * rows_p + c[:, None] * rows_q
    a[p, q] = 0.0
    a[q, p] = 0.0


def singular_values(m) -> np.ndarray:
    """Singular values (descending), min(rows, cols) of them, via the smaller Gram matrix."""
    a = _as_float(m)
    if a.ndim != 2:
        raise MalformedInputError(f"expected a matrix, got shape {a.shape}")
    gram = a @ a.T if a.shape[0] <= a.shape[1] else a.T @ a
    eig = sym_eigenvalues(gram)
    return np.sqrt(np.clip(eig, 0.0, None))


def spectral_norm(m) -> float:
    return float(singular_values(m)[0])


def trace_norm(m) -> float:
    return float(np.sum(singular_values(m)))


def numerical_rank(values) -> int:
    """Count of singular values above RANK_THRESHOLD times the largest."""
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0 or values[0] <= 0.0:
        return 0
    return int(np.sum(values > NumericPolicy.RANK_THRESHOLD * values[0]))


def group_spectrum(values) -> List[Tuple[float, int]]:
    """Collapse nonzero singular values into (value, multiplicity), descending."""
    values = np.asarray(values, dtype=np.float64)
    rank = numerical_rank(values)
    groups: List[Tuple[float, int]] = []
    for v in values[:rank]:
        if groups and abs(groups[-1][0] - v) <= NumericPolicy.SPECTRUM_GROUPING_GAP * groups[-1][0]:
            value, mult = groups[-1]
            groups[-1] = (value, mult + 1)
        else:
            groups.append((float(v), 1))
    return groups
