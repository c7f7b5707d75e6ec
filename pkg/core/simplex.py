"""
Two-phase tableau simplex returning primal values, row duals and, when the
program is infeasible, a Farkas ray.

Exact mode runs on numpy ``object`` arrays of ``Fraction`` and pivots with
Bland's rule, so it always terminates. Float mode runs on ``float64`` with
block partial pricing and falls back to Bland's rule after a run of
degenerate pivots.

Dual sign convention: ``y`` is the sensitivity of the optimum to the row's
right-hand side. For a minimization, rows ``>=`` carry ``y >= 0`` and rows
``<=`` carry ``y <= 0``; for a maximization the signs are reversed.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Tuple

import numpy as np

from core.numeric import parse_rational
from core.policy import MalformedInputError, NumericPolicy, SolverError

logger = logging.getLogger(__name__)

RELATIONS = ("<=", "=", ">=")

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

# consecutive degenerate pivots tolerated in float mode before switching to Bland
_DEGENERATE_RUN = 50


@dataclass(frozen=True)
class Constraint:
    coeffs: Tuple
    relation: str
    rhs: object

    def __post_init__(self):
        if self.relation not in RELATIONS:
            raise MalformedInputError(f"relation must be one of {RELATIONS}, got {self.relation!r}")
        object.__setattr__(self, "coeffs", tuple(self.coeffs))


@dataclass(frozen=True)
class LPProblem:
    """
    Optimize ``objective . x`` subject to ``constraints`` and per-variable
    ``bounds``. A bound is ``(lo, hi)`` with ``None`` meaning unbounded on
    that side; the default for every variable is ``(0, None)``.
    """

    objective: Tuple
    constraints: Tuple[Constraint, ...]
    bounds: Optional[Tuple[Tuple[object, object], ...]] = None
    maximize: bool = False

    def __post_init__(self):
        object.__setattr__(self, "objective", tuple(self.objective))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        n = len(self.objective)
        if n == 0:
            raise MalformedInputError("objective must have at least one variable")
        for i, row in enumerate(self.constraints):
            if len(row.coeffs) != n:
                raise MalformedInputError(
                    f"constraint {i} has {len(row.coeffs)} coefficients, objective has {n}")
        if self.bounds is None:
            object.__setattr__(self, "bounds", ((0, None),) * n)
        else:
            object.__setattr__(self, "bounds", tuple(tuple(b) for b in self.bounds))
            if len(self.bounds) != n:
                raise MalformedInputError(f"expected {n} bounds, got {len(self.bounds)}")
            for j, (lo, hi) in enumerate(self.bounds):
                if lo is not None and hi is not None and hi < lo:
                    raise MalformedInputError(f"variable {j} has empty bound range [{lo}, {hi}]")

    @property
    def num_vars(self) -> int:
        return len(self.objective)

    @property
    def bound_rows(self) -> Tuple[Tuple[int, object], ...]:
        """(variable, hi) for every variable bounded on both sides; these rows follow the constraints."""
        return tuple((j, hi) for j, (lo, hi) in enumerate(self.bounds)
                     if lo is not None and hi is not None)


@dataclass(frozen=True)
class LPSolution:
    status: str
    mode: str
    primal: Tuple = ()
    duals: Tuple = ()
    objective: object = None
    dual_objective: object = None
    farkas: Tuple = ()
    ray: Tuple = ()
    iterations: int = 0

    @property
    def is_optimal(self) -> bool:
        return self.status == OPTIMAL


@dataclass
class _Tableau:
    T: np.ndarray
    basis: list
    art_start: int
    exact: bool
    iterations: int = 0
    degenerate_run: int = 0
    price_from: int = 0
    identity: list = field(default_factory=list)


class _StandardForm:
    """Maps the user's variables onto nonnegative standard-form columns."""

    def __init__(self, problem: LPProblem, conv):
        self.columns = []
        self.offset = []
        self.extra = []
        ncols = 0
        for lo, hi in problem.bounds:
            if lo is None and hi is None:
                self.columns.append(((ncols, 1), (ncols + 1, -1)))
                self.offset.append(conv(0))
                ncols += 2
            elif lo is None:
                self.columns.append(((ncols, -1),))
                self.offset.append(conv(hi))
                ncols += 1
            else:
                self.columns.append(((ncols, 1),))
                self.offset.append(conv(lo))
                if hi is not None:
                    self.extra.append((ncols, conv(hi) - conv(lo)))
                ncols += 1
        self.ncols = ncols

    def lift_row(self, coeffs, conv):
        row = [conv(0)] * self.ncols
        shift = conv(0)
        for a, cols, off in zip(coeffs, self.columns, self.offset):
            a = conv(a)
            if a == 0:
                continue
            for c, s in cols:
                row[c] += a * s
            shift += a * off
        return row, shift

    def recover(self, values):
        out = []
        for cols, off in zip(self.columns, self.offset):
            v = off
            for c, s in cols:
                v = v + s * values[c]
            out.append(v)
        return tuple(out)


def _converter(mode: str):
    if mode == "exact":
        return lambda v: parse_rational(v, exact=True)
    return float


def lp_solve(problem: LPProblem, mode: Optional[str] = None) -> LPSolution:
    """Solve ``problem``; exact mode never raises for well-formed input."""
    mode = NumericPolicy.resolve_mode(mode)
    exact = mode == "exact"
    conv = _converter(mode)
    form = _StandardForm(problem, conv)

    rows, rhs, rels = [], [], []
    for con in problem.constraints:
        row, shift = form.lift_row(con.coeffs, conv)
        rows.append(row)
        rhs.append(conv(con.rhs) - shift)
        rels.append(con.relation)
    for col, hi in form.extra:
        row = [conv(0)] * form.ncols
        row[col] = conv(1)
        rows.append(row)
        rhs.append(hi)
        rels.append("<=")

    sense = -1 if problem.maximize else 1
    cost, const = form.lift_row(problem.objective, conv)
    cost = [sense * c for c in cost]

    m = len(rows)
    flip = [1] * m
    for i in range(m):
        if rhs[i] < 0:
            rows[i] = [-a for a in rows[i]]
            rhs[i] = -rhs[i]
            rels[i] = {"<=": ">=", ">=": "<=", "=": "="}[rels[i]]
            flip[i] = -1

    n_slack = sum(1 for r in rels if r != "=")
    n_art = sum(1 for r in rels if r != "<=")
    art_start = form.ncols + n_slack
    width = art_start + n_art + 1
    dtype = object if exact else np.float64
    zero = Fraction(0) if exact else 0.0
    one = Fraction(1) if exact else 1.0

    T = np.full((m + 1, width), zero, dtype=dtype)
    basis, identity = [], []
    s_col, a_col = form.ncols, art_start
    for i in range(m):
        T[i, :form.ncols] = rows[i]
        T[i, -1] = rhs[i]
        if rels[i] == "<=":
            T[i, s_col] = one
            basis.append(s_col)
            identity.append(s_col)
            s_col += 1
        else:
            if rels[i] == ">=":
                T[i, s_col] = -one
                s_col += 1
            T[i, a_col] = one
            basis.append(a_col)
            identity.append(a_col)
            a_col += 1
    tab = _Tableau(T=T, basis=basis, art_start=art_start, exact=exact, identity=identity)
    cap = NumericPolicy.FLOAT_ITERATION_FACTOR * (m + width)

    if n_art:
        art_rows = [i for i in range(m) if basis[i] >= art_start]
        T[m, :] = zero
        for i in art_rows:
            T[m, :] -= T[i, :]
        T[m, art_start:width - 1] = zero
        status, _ = _run(tab, art_start, cap)
        phase1 = -T[m, -1]
        tol = 0 if exact else NumericPolicy.FEASIBILITY_TOLERANCE * max(1.0, float(max(rhs, default=0)))
        if phase1 > tol:
            y = [(one if identity[i] >= art_start else zero) - T[m, identity[i]] for i in range(m)]
            farkas = tuple(_out(flip[i] * y[i], exact) for i in range(m))
            logger.info("LP infeasible after %d pivots (phase-one residual %s)", tab.iterations, phase1)
            return LPSolution(status=INFEASIBLE, mode=mode, farkas=farkas, iterations=tab.iterations)
        _drive_out_artificials(tab)

    c_ext = np.full(width, zero, dtype=dtype)
    c_ext[:form.ncols] = cost
    cb = c_ext[tab.basis]
    T[m, :] = c_ext - cb.dot(T[:m, :]) if m else c_ext
    status, entering = _run(tab, art_start, cap)

    if status == UNBOUNDED:
        direction = [zero] * width
        direction[entering] = one
        for i in range(m):
            direction[tab.basis[i]] = -T[i, entering]
        ray = tuple(_out(v - off, exact) for v, off in zip(form.recover(direction), form.offset))
        logger.info("LP unbounded after %d pivots", tab.iterations)
        return LPSolution(status=UNBOUNDED, mode=mode, ray=ray, iterations=tab.iterations)

    values = [zero] * width
    for i in range(m):
        values[tab.basis[i]] = T[i, -1]
    primal = form.recover(values)
    y_std = [-T[m, identity[i]] for i in range(m)]
    duals = [sense * flip[i] * y_std[i] for i in range(m)]
    objective = sense * (-T[m, -1]) + const
    shifted = [flip[i] * rhs[i] for i in range(m)]
    dual_objective = sum((y * b for y, b in zip(duals, shifted)), zero) + const

    logger.debug("LP optimal after %d pivots: objective=%s", tab.iterations, objective)
    return LPSolution(
        status=OPTIMAL,
        mode=mode,
        primal=tuple(_out(v, exact) for v in primal),
        duals=tuple(_out(v, exact) for v in duals),
        objective=_out(objective, exact),
        dual_objective=_out(dual_objective, exact),
        iterations=tab.iterations,
    )


def _out(v, exact):
    return Fraction(v) if exact else float(v)


def _run(tab: _Tableau, limit: int, cap: int):
    """Pivot until optimal or unbounded; entering columns are drawn from [0, limit)."""
    T = tab.T
    m = T.shape[0] - 1
    while True:
        k = _entering(tab, limit)
        if k is None:
            return OPTIMAL, None
        r = _leaving(tab, k)
        if r is None:
            return UNBOUNDED, k
        if not tab.exact:
            if tab.iterations >= cap:
                raise SolverError(f"float simplex exceeded {cap} pivots on a {m}-row tableau")
            degenerate = abs(T[r, -1]) <= NumericPolicy.PIVOT_TOLERANCE
            tab.degenerate_run = tab.degenerate_run + 1 if degenerate else 0
        _pivot(tab, r, k)


def _entering(tab: _Tableau, limit: int):
    obj = tab.T[-1, :limit]
    if tab.exact or tab.degenerate_run >= _DEGENERATE_RUN:
        tol = 0 if tab.exact else NumericPolicy.FEASIBILITY_TOLERANCE
        neg = np.nonzero(obj < -tol)[0]
        return int(neg[0]) if neg.size else None
    block = NumericPolicy.FLOAT_PRICING_BLOCK
    start = tab.price_from if tab.price_from < limit else 0
    # cyclic order from start; every column is priced once before giving up
    order = np.r_[start:limit, 0:start]
    for lo in range(0, limit, block):
        cols = order[lo:lo + block]
        chunk = obj[cols]
        j = int(np.argmin(chunk))
        if chunk[j] < -NumericPolicy.FEASIBILITY_TOLERANCE:
            k = int(cols[j])
            tab.price_from = k + 1
            return k
    return None


def _leaving(tab: _Tableau, k: int):
    T = tab.T
    m = T.shape[0] - 1
    col = T[:m, k]
    if tab.exact:
        cand = [i for i in np.nonzero(col > 0)[0]]
        if not cand:
            return None
        best = None
        for i in cand:
            ratio = T[i, -1] / T[i, k]
            key = (ratio, tab.basis[i])
            if best is None or key < best[0]:
                best = (key, i)
        return int(best[1])
    cand = np.nonzero(col > NumericPolicy.PIVOT_TOLERANCE)[0]
    if not cand.size:
        return None
    ratios = T[cand, -1] / col[cand]
    lowest = ratios.min()
    ties = cand[ratios <= lowest + NumericPolicy.PIVOT_TOLERANCE]
    return int(min(ties, key=lambda i: tab.basis[i]))


def _pivot(tab: _Tableau, r: int, k: int):
    T = tab.T
    T[r, :] = T[r, :] / T[r, k]
    col = T[:, k].copy()
    col[r] = 0
    touched = np.nonzero(col != 0)[0]
    if touched.size:
        T[touched, :] -= np.outer(col[touched], T[r, :])
    tab.basis[r] = k
    tab.iterations += 1


def _drive_out_artificials(tab: _Tableau):
    T = tab.T
    m = T.shape[0] - 1
    tol = 0 if tab.exact else NumericPolicy.PIVOT_TOLERANCE
    for i in range(m):
        if tab.basis[i] < tab.art_start:
            continue
        nz = np.nonzero(np.abs(T[i, :tab.art_start]) > tol)[0]
        if nz.size:
            _pivot(tab, i, int(nz[0]))
        else:
            logger.debug("row %d is redundant; its artificial stays basic at zero", i)


def check_certificate(problem: LPProblem, solution: LPSolution, tol=None) -> dict:
    """
    Re-derive the optimality conditions of ``solution`` from ``problem`` alone.

    Returns a map invariant -> bool: primal feasibility, dual sign
    feasibility, reduced-cost feasibility and equality of the two objectives.
    """
    exact = solution.mode == "exact"
    conv = _converter(solution.mode)
    if tol is None:
        tol = 0 if exact else NumericPolicy.FEASIBILITY_TOLERANCE
    x = solution.primal
    y = solution.duals
    sense = -1 if problem.maximize else 1
    rows = [Constraint(tuple(conv(a) for a in row.coeffs), row.relation, conv(row.rhs))
            for row in problem.constraints]
    rows += [Constraint(tuple(1 if k == j else 0 for k in range(problem.num_vars)), "<=", conv(hi))
             for j, hi in problem.bound_rows]
    bounds = [(None if lo is None else conv(lo), None if hi is None else conv(hi))
              for lo, hi in problem.bounds]

    def lhs(row):
        return sum((a * v for a, v in zip(row.coeffs, x)), Fraction(0) if exact else 0.0)

    primal_ok = True
    for row in rows:
        gap = lhs(row) - row.rhs
        if row.relation == "<=" and gap > tol or row.relation == ">=" and gap < -tol \
                or row.relation == "=" and abs(gap) > tol:
            primal_ok = False
    for v, (lo, hi) in zip(x, bounds):
        if lo is not None and v < lo - tol or hi is not None and v > hi + tol:
            primal_ok = False

    dual_sign_ok = True
    for yi, row in zip(y, rows):
        s = sense * yi
        if row.relation == ">=" and s < -tol or row.relation == "<=" and s > tol:
            dual_sign_ok = False

    reduced_ok = True
    for j, (c, (lo, hi)) in enumerate(zip(problem.objective, bounds)):
        d = sense * (conv(c) - sum((yi * row.coeffs[j] for yi, row in zip(y, rows)), 0))
        if lo is None and hi is None:
            ok = abs(d) <= tol
        elif lo is None:
            ok = d <= tol
        else:
            ok = d >= -tol
        reduced_ok = reduced_ok and ok

    gap = abs(solution.objective - solution.dual_objective)
    scale = max(1.0, abs(float(solution.objective)))
    duality_ok = gap == 0 if exact else gap <= NumericPolicy.FEASIBILITY_TOLERANCE * scale
    return {
        "primal-feasible": primal_ok,
        "dual-sign": dual_sign_ok,
        "reduced-cost": reduced_ok,
        "strong-duality": duality_ok,
    }
