import logging
import os

logger = logging.getLogger(__name__)


class PatmatError(Exception):
    """Base class for every error raised by the pattern matrix engine."""

    TAG = "PATMAT"

    def __init__(self, message: str):
        super().__init__(f"{self.TAG}: {message}")


class MalformedInputError(PatmatError, ValueError):
    TAG = "MALFORMED_INPUT"


class SizeLimitError(PatmatError):
    TAG = "SIZE_LIMIT"


class DegenerateInputError(PatmatError):
    TAG = "DEGENERATE"


class SolverError(PatmatError):
    TAG = "SOLVER"


class NumericPolicy:
    """Tolerances, caps and gates shared by every module."""

    # Simplex
    PIVOT_TOLERANCE = 1e-10
    FEASIBILITY_TOLERANCE = 1e-9
    FLOAT_PRICING_BLOCK = 16
    FLOAT_ITERATION_FACTOR = 50

    # Spectral
    JACOBI_TOLERANCE = 1e-14
    JACOBI_MAX_SWEEPS = 100
    SYMMETRY_TOLERANCE = 1e-12
    RANK_THRESHOLD = 1e-6
    SPECTRUM_GROUPING_GAP = 1e-7
    COMPARISON_TOLERANCE = 1e-9

    # Sizes
    MAX_EVAL_ARITY = 24
    MAX_LP_ARITY = 12
    MAX_EXACT_LP_ARITY = 8
    MAX_MATRIX_ENTRIES = 1 << 20
    MAX_EXACT_TREE_ARITY = 5
    MAX_BRUTEFORCE_MONOMIALS = 10
    MAX_BRUTEFORCE_CAP = 12
    BOUND_BRUTEFORCE_MONOMIALS = 5
    MAX_DISC_SIDE = 16

    # Reports
    PATURI_BAND = (0.3, 3.0)
    MONTE_CARLO_SIGMAS = 4.0

    MODES = ("exact", "float")
    MODE_ENV = "PATMAT_MODE"
    LOG_LEVEL_ENV = "PATMAT_LOG_LEVEL"

    @staticmethod
    def resolve_mode(mode=None) -> str:
        """Explicit mode wins over PATMAT_MODE; default exact."""
        if mode is None:
            mode = os.environ.get(NumericPolicy.MODE_ENV, "exact")
        mode = mode.strip().lower()
        if mode not in NumericPolicy.MODES:
            raise MalformedInputError(f"mode must be one of {NumericPolicy.MODES}, got {mode!r}")
        return mode

    @staticmethod
    def lp_mode_for_arity(t: int, mode=None) -> str:
        """Exact LPs are capped at MAX_EXACT_LP_ARITY; larger arities drop to float."""
        mode = NumericPolicy.resolve_mode(mode)
        if t > NumericPolicy.MAX_LP_ARITY:
            raise SizeLimitError(f"LP work is limited to arity {NumericPolicy.MAX_LP_ARITY}, got {t}")
        if mode == "exact" and t > NumericPolicy.MAX_EXACT_LP_ARITY:
            logger.warning("arity %d exceeds exact LP cap %d; switching to float mode",
                           t, NumericPolicy.MAX_EXACT_LP_ARITY)
            return "float"
        return mode

    @staticmethod
    def check_arity(t: int, limit: int = MAX_EVAL_ARITY):
        if t < 1:
            raise MalformedInputError(f"arity must be positive, got {t}")
        if t > limit:
            raise SizeLimitError(f"arity {t} exceeds limit {limit}")

    @staticmethod
    def check_matrix_size(rows: int, cols: int):
        if rows * cols > NumericPolicy.MAX_MATRIX_ENTRIES:
            raise SizeLimitError(
                f"{rows}x{cols} matrix exceeds the {NumericPolicy.MAX_MATRIX_ENTRIES}-entry gate")

    @staticmethod
    def matrix_fits(rows: int, cols: int) -> bool:
        return rows * cols <= NumericPolicy.MAX_MATRIX_ENTRIES


class WeightProvenance:
    """
    Which estimates of the threshold weight W a bound formula may consume.

    A lower bound that grows with W, or an upper bound that shrinks with W,
    stays valid when fed a lower estimate (the real relaxation). The other
    two combinations need an upper estimate (rounding certificate).
    """

    EXACT = "exact"
    LOWER = "lower"
    UPPER = "upper"

    @staticmethod
    def admissible(side: str, direction: str):
        if side not in ("lower", "upper") or direction not in ("increasing", "decreasing"):
            raise MalformedInputError(f"unknown bound shape side={side!r} direction={direction!r}")
        conservative_low = (side == "lower") == (direction == "increasing")
        if conservative_low:
            return WeightProvenance.EXACT, WeightProvenance.LOWER
        return WeightProvenance.EXACT, WeightProvenance.UPPER

    @staticmethod
    def require(kind: str, side: str, direction: str, formula: str):
        allowed = WeightProvenance.admissible(side, direction)
        if kind not in allowed:
            raise MalformedInputError(
                f"{formula} is a {side} bound {direction} in W and cannot use a {kind} estimate of W")
