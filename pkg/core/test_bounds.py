"""
Bound reports on desk-sized instances: every check attached to a report
must hold, and the values are pinned where they are exact.
"""

import math
import unittest
from fractions import Fraction

import numpy as np

from core.boolfn import catalog
from core.bounds import (Rectangle, WeightEstimate, constructed_distribution, disc_bruteforce, disc_lower_weight,
                         disc_spectral, disc_upper_adeg, disc_upper_weight, gdm_bound, logrank_check,
                         q_lower_adeg, q_lower_weight, rank_bounds, rank_lower_adeg, rank_lower_weight,
                         rank_upper_construction, trace_norm_lower, uniform_distribution, weight_estimate)
from core.evaluator import BoundReport
from core.numeric import DenseMatrix
from core.pattern import PatternMatrixSpec, build
from core.policy import MalformedInputError, SizeLimitError, WeightProvenance

OR2 = catalog("or", t=2)
PARITY2 = catalog("parity", t=2)
CHI1 = catalog("chi", t=1, S=1)
THIRD = Fraction(1, 3)
SEVENTH = Fraction(1, 7)
INSTANCES = [(OR2, 4, 2), (PARITY2, 4, 2), (CHI1, 2, 1)]


class TestCommunicationBounds(unittest.TestCase):

    def test_main_bound_value_and_checks(self):
        report = q_lower_adeg(OR2, 4, 2, THIRD, SEVENTH, "exact")
        self.assertAlmostEqual(report.value, 0.5 - math.log2(63) / 2, places=12)
        self.assertEqual(report.details["degree"], 2)
        self.assertAlmostEqual(report.details["simplified"], -2.5)
        self.assertTrue(report.passed(), [c for c in report.checks if not c.passed])
        self.assertEqual(report.status, BoundReport.VACUOUS)
        self.assertTrue(report.check("gdm-matrix").passed)

    def test_main_bound_on_every_instance(self):
        for f, n, t in INSTANCES:
            report = q_lower_adeg(f, n, t, THIRD, SEVENTH, "exact")
            self.assertTrue(report.passed(), (f, [c for c in report.checks if not c.passed]))
            self.assertTrue(report.check("norm-ceiling").passed)

    def test_main_bound_constant_function(self):
        report = q_lower_adeg(catalog("const", t=2), 4, 2, THIRD, SEVENTH, "exact")
        self.assertEqual(report.details["degree"], 0)
        self.assertTrue(report.vacuous)
        self.assertTrue(report.check("degree-zero").passed)

    def test_delta_must_stay_below_half_eps(self):
        with self.assertRaises(MalformedInputError):
            q_lower_adeg(OR2, 4, 2, THIRD, Fraction(1, 6), "exact")

    def test_small_bias_bound(self):
        report = q_lower_weight(OR2, 4, 2, 1, Fraction(1, 2), "exact")
        self.assertAlmostEqual(report.value, 0.25 - math.log2(6) / 2, places=12)
        self.assertTrue(report.passed(), [c for c in report.checks if not c.passed])
        self.assertEqual(report.details["weight_kind"], WeightProvenance.EXACT)

    def test_gdm_vacuous_when_correlation_too_small(self):
        report = gdm_bound(DenseMatrix([[-1]]), DenseMatrix([[1]]), THIRD)
        self.assertEqual(report.value, -math.inf)
        self.assertTrue(report.vacuous)


class TestDiscrepancy(unittest.TestCase):

    def test_bruteforce_on_two_by_two(self):
        P = uniform_distribution(2, 2)
        F = DenseMatrix([[1, 1], [1, -1]])
        value, rect = disc_bruteforce(P, F)
        self.assertEqual(value, Fraction(1, 2))
        self.assertEqual(abs(rect.mass(P.hadamard(F))), Fraction(1, 2))
        self.assertLessEqual(value, disc_spectral(P, F) + 1e-12)

    def test_bruteforce_rejects_non_distribution(self):
        with self.assertRaises(MalformedInputError):
            disc_bruteforce(DenseMatrix([[1, 1]]), DenseMatrix([[1, -1]]))

    def test_bruteforce_size_gate(self):
        spec = PatternMatrixSpec(6, 2, OR2)
        F = build(spec)
        with self.assertRaises(SizeLimitError):
            disc_bruteforce(uniform_distribution(*spec.shape), F)

    def test_rectangle_bounds(self):
        with self.assertRaises(MalformedInputError):
            Rectangle(row_mask=4, col_mask=1, rows=2, cols=2)

    def test_lower_bound_from_weight(self):
        report = disc_lower_weight(OR2, 4, 2, 1, "exact")
        self.assertEqual(report.exact, Fraction(1, 48))
        self.assertTrue(report.passed(), [c for c in report.checks if not c.passed])
        self.assertEqual(report.status, BoundReport.VERIFIED)

    def test_lower_bound_without_sign_representation(self):
        report = disc_lower_weight(OR2, 4, 2, 0, "exact")
        self.assertEqual(report.value, 0)
        self.assertEqual(report.status, BoundReport.VACUOUS)

    def test_upper_bound_from_weight(self):
        report = disc_upper_weight(OR2, 4, 2, "exact")
        self.assertAlmostEqual(report.value, math.sqrt(0.5), places=12)
        self.assertEqual(report.details["degree"], 1)
        self.assertTrue(report.passed(), [c for c in report.checks if not c.passed])

    def test_upper_bound_from_approximate_degree(self):
        report = disc_upper_adeg(PARITY2, 4, 2, Fraction(1, 2), "exact")
        self.assertEqual(report.exact, 1)
        self.assertTrue(report.vacuous)
        self.assertTrue(report.passed(), [c for c in report.checks if not c.passed])

    def test_sandwich(self):
        for f, n, t in INSTANCES:
            F = build(PatternMatrixSpec(n, t, f))
            P = constructed_distribution(f, n, t, 1, "exact")
            brute, _ = disc_bruteforce(P, F)
            self.assertLessEqual(brute, disc_spectral(P, F) + 1e-9)
            upper = disc_upper_weight(f, n, t, "exact")
            self.assertTrue(upper.passed(), f)
            lower = disc_lower_weight(f, n, t, t, "exact")
            self.assertLessEqual(lower.value, brute + 1e-12)

    def test_gamma_range(self):
        with self.assertRaises(MalformedInputError):
            disc_upper_adeg(OR2, 4, 2, 1, "exact")


class TestRankBounds(unittest.TestCase):

    def test_bounded_error_rank(self):
        report = rank_lower_adeg(OR2, 4, 2, THIRD, 0, "exact")
        self.assertEqual(report.exact, Fraction(4, 9))
        self.assertEqual(report.details["rank"], 9)
        self.assertTrue(report.passed(), [c for c in report.checks if not c.passed])
        self.assertEqual(report.status, BoundReport.VERIFIED)

    def test_small_bias_rank(self):
        report = rank_lower_weight(PARITY2, 4, 2, 2, Fraction(1, 2), "exact")
        self.assertEqual(report.exact, Fraction(4, 9))
        self.assertTrue(report.passed(), [c for c in report.checks if not c.passed])

    def test_rank_bounds_dispatch(self):
        reports = rank_bounds(OR2, 4, 2, eps=THIRD, gamma=Fraction(1, 2), d=1, mode="exact")
        self.assertEqual([r.name for r in reports], ["rank-bounded-error", "rank-small-bias"])
        with self.assertRaises(MalformedInputError):
            rank_bounds(OR2, 4, 2)

    def test_construction_is_within_eps(self):
        construction = rank_upper_construction(OR2, 4, 2, Fraction(1, 2))
        self.assertEqual(construction.d, 1)
        self.assertLessEqual(construction.deviation, Fraction(1, 2))
        F = build(PatternMatrixSpec(4, 2, OR2)).to_float()
        A = construction.matrix().to_float()
        self.assertLessEqual(float(np.max(np.abs(F - A))), 0.5 + 1e-12)

    def test_trace_norm_lower(self):
        F = build(PatternMatrixSpec(4, 2, PARITY2))
        value = trace_norm_lower(F, F, 0)
        # <F, F> / ||F|| = 256 / 8
        self.assertAlmostEqual(value, 32.0, places=9)

    def test_delta_range(self):
        with self.assertRaises(MalformedInputError):
            rank_lower_adeg(OR2, 4, 2, THIRD, Fraction(1, 2), "exact")


class TestLogRankAndWeights(unittest.TestCase):

    def test_logrank(self):
        for name, t, n in [("or", 2, 4), ("parity", 2, 4), ("maj", 3, 6), ("mp", 4, 8)]:
            f = catalog(name, t=t, m=2, k=2) if name == "mp" else catalog(name, t=t)
            report = logrank_check(f, n, t)
            self.assertTrue(report.passed(), name)
            self.assertGreaterEqual(report.details["rank"], report.value)

    def test_logrank_runs_protocol(self):
        report = logrank_check(OR2, 4, 2)
        self.assertEqual(report.value, 4)
        self.assertEqual(report.details["rank"], 9)
        self.assertLessEqual(report.details["det_cost"], 6)

    def test_weight_estimate_provenance(self):
        f = catalog("maj", t=4)
        exact = weight_estimate(f, 1, "lower", "increasing", "exact")
        self.assertEqual(exact.kind, WeightProvenance.EXACT)
        low = weight_estimate(f, 2, "lower", "increasing", "exact")
        high = weight_estimate(f, 2, "lower", "decreasing", "exact")
        self.assertEqual(low.kind, WeightProvenance.LOWER)
        self.assertEqual(high.kind, WeightProvenance.UPPER)
        self.assertLessEqual(low.value, high.value)

    def test_infinite_weight_is_exact(self):
        estimate = weight_estimate(OR2, 0, "upper", "decreasing", "exact")
        self.assertEqual(estimate, WeightEstimate(0, math.inf, WeightProvenance.EXACT))
        self.assertFalse(estimate.finite)


if __name__ == "__main__":
    unittest.main()
