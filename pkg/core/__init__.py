"""
Core pattern matrix engine.

Boolean functions and predicates, exact linear programming for approximate
and threshold degree, threshold weight, pattern matrix spectra, bound
reports with their consistency ledgers, and the communication protocols.
"""
__all__ = [
    "approx",
    "boolfn",
    "bounds",
    "consistency",
    "dtree",
    "evaluator",
    "numeric",
    "pattern",
    "policy",
    "protocols",
    "razborov",
    "simplex",
    "spectral",
    "symmetric",
    "weight",
]
