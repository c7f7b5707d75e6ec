"""
Integration test to verify core components work together:
- approximate degree and dual witness (core/approx.py)
- pattern matrix spectrum (core/pattern.py)
- bound reports (core/bounds.py)
- certificates and the independent verifier (certificates/, audit/)
"""

import json
import unittest
from fractions import Fraction

from audit.verify import verify_certificate
from certificates.certificate import bound_certificate, dual_witness_certificate, spectrum_certificate
from core.approx import dual_witness
from core.boolfn import catalog
from core.bounds import q_lower_adeg, rank_lower_adeg
from core.evaluator import BoundReport
from core.pattern import PatternMatrixSpec, witness_norm, witness_norm_ceiling


class TestIntegration(unittest.TestCase):
    """End-to-end flow on majority of three bits"""

    def setUp(self):
        self.f = catalog("maj", t=3)
        self.n = 6
        self.eps = Fraction(1, 3)

    def test_complete_workflow(self):
        """Witness -> spectrum -> bound -> certificate -> verification"""
        # Step 1: dual witness
        witness = dual_witness(self.f, self.eps, "exact")
        self.assertTrue(all(witness.check(self.f).values()))

        # Step 2: its pattern matrix norm respects the closed-form ceiling
        norm = witness_norm(self.n, 3, witness.values)
        self.assertLessEqual(norm, witness_norm_ceiling(self.n, 3, witness.d) * (1 + 1e-9))

        # Step 3: bound reports carry passing checks
        report = q_lower_adeg(self.f, self.n, 3, self.eps, Fraction(1, 7), "exact")
        self.assertTrue(report.passed())
        self.assertEqual(report.details["degree"], witness.d)

        # Step 4: certificates verify from their payload alone
        for cert in (dual_witness_certificate(self.f, witness),
                     spectrum_certificate(PatternMatrixSpec(self.n, 3, self.f)),
                     bound_certificate(report, "exact")):
            result = verify_certificate(json.loads(cert.to_json()))
            self.assertTrue(result.passed, (cert.kind, result.failed()))

    def test_rank_bound_is_verified(self):
        """The rank bound is not vacuous and its checks pass"""
        report = rank_lower_adeg(self.f, self.n, 3, self.eps, Fraction(0), "exact")
        self.assertEqual(report.status, BoundReport.VERIFIED)
        self.assertGreater(report.value, 0)


if __name__ == "__main__":
    unittest.main()
