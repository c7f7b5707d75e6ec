import json
import math
import unittest
from fractions import Fraction

from core.consistency import ConsistencyLedger
from core.evaluator import BoundReport


class TestConsistencyLedger(unittest.TestCase):

    def test_exact_comparisons_have_no_slack(self):
        ledger = ConsistencyLedger()
        self.assertTrue(ledger.at_most("a", Fraction(1, 3), Fraction(1, 3)))
        self.assertFalse(ledger.at_most("b", Fraction(1, 3) + Fraction(1, 10 ** 12), Fraction(1, 3)))
        self.assertFalse(ledger.close("c", Fraction(1, 2), Fraction(1, 2) + Fraction(1, 10 ** 15)))
        self.assertEqual([c.passed for c in ledger.checks], [True, False, False])

    def test_float_comparisons_use_tolerance(self):
        ledger = ConsistencyLedger(tolerance=1e-9)
        self.assertTrue(ledger.at_most("a", 1.0 + 1e-12, 1.0))
        self.assertTrue(ledger.at_least("b", 1.0 - 1e-12, 1.0))
        self.assertFalse(ledger.at_least("c", 0.9, 1.0))
        self.assertTrue(ledger.close("d", 2.0, 2.0 + 1e-10))

    def test_infinite_upper_side(self):
        ledger = ConsistencyLedger()
        self.assertTrue(ledger.at_most("w", 5, math.inf))
        self.assertEqual(ledger.checks[0].detail, "5 <= inf")

    def test_names_are_unique(self):
        ledger = ConsistencyLedger()
        ledger.record("x", True)
        with self.assertRaises(ValueError):
            ledger.record("x", True)

    def test_merge_prefixes(self):
        ledger = ConsistencyLedger()
        ledger.merge("cert", {"sign-represents": True, "degree-bounded": False})
        self.assertEqual([c.name for c in ledger.checks], ["cert:sign-represents", "cert:degree-bounded"])
        self.assertFalse(ledger.all_passed())
        self.assertEqual(len(ledger), 2)


class TestBoundReport(unittest.TestCase):

    def _ledger(self, *results):
        ledger = ConsistencyLedger()
        for i, passed in enumerate(results):
            ledger.record(f"check-{i}", passed)
        return ledger

    def test_status_precedence(self):
        failed = BoundReport.from_ledger("b", "lower", -1, {}, self._ledger(True, False), vacuous=True)
        self.assertEqual(failed.status, BoundReport.FAILED)
        vacuous = BoundReport.from_ledger("b", "lower", -1, {}, self._ledger(True), vacuous=True)
        self.assertEqual(vacuous.status, BoundReport.VACUOUS)
        formula = BoundReport.from_ledger("b", "lower", 3, {}, ConsistencyLedger())
        self.assertEqual(formula.status, BoundReport.FORMULA_ONLY)
        self.assertTrue(formula.formula_only)
        verified = BoundReport.from_ledger("b", "lower", 3, {}, self._ledger(True))
        self.assertEqual(verified.status, BoundReport.VERIFIED)

    def test_exact_value_is_kept(self):
        report = BoundReport.from_ledger("b", "upper", Fraction(1, 48), {}, self._ledger(True))
        self.assertEqual(report.exact, Fraction(1, 48))
        self.assertEqual(report.value, 1 / 48)
        floating = BoundReport.from_ledger("b", "upper", 0.25, {}, self._ledger(True))
        self.assertIsNone(floating.exact)

    def test_payload_is_json(self):
        report = BoundReport.from_ledger(
            "b", "lower", Fraction(4, 9), {"eps": Fraction(1, 3), "n": 4}, self._ledger(True),
            details={"weight": math.inf, "profile": (Fraction(1), Fraction(1, 2))})
        payload = json.loads(json.dumps(report.to_payload(), sort_keys=True))
        self.assertEqual(payload["exact"], "4/9")
        self.assertEqual(payload["inputs"], {"eps": "1/3", "n": 4})
        self.assertEqual(payload["details"]["weight"], "inf")
        self.assertEqual(payload["details"]["profile"], ["1/1", "1/2"])
        self.assertEqual(payload["status"], "VERIFIED")

    def test_fingerprint_is_stable(self):
        a = BoundReport.from_ledger("b", "lower", 1, {"n": 4}, self._ledger(True))
        b = BoundReport.from_ledger("b", "lower", 1, {"n": 4}, self._ledger(True))
        self.assertEqual(a.fingerprint(), b.fingerprint())
        self.assertEqual(len(a.fingerprint()), 64)

    def test_missing_check(self):
        report = BoundReport.from_ledger("b", "lower", 1, {}, self._ledger(True))
        with self.assertRaises(KeyError):
            report.check("nope")


if __name__ == "__main__":
    unittest.main()
