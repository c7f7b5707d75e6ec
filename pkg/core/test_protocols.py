import json
import unittest
from fractions import Fraction

from core.boolfn import catalog
from core.dtree import min_depth_tree
from core.pattern import ColumnIndex
from core.policy import MalformedInputError, SizeLimitError
from core.protocols import (ALICE, BOB, ProtocolInput, det_cost_ceiling, det_protocol, exact_advantage,
                            exhaustive_det_run, expected_output, index_width, rand_cost_ceiling,
                            rand_weight_protocol, simulate_weight_protocol)
from core.weight import WeightCertificate, weight_bruteforce

OR2 = catalog("or", t=2)


class TestDeterministicProtocol(unittest.TestCase):
    """Decision-tree protocol on the pattern matrix."""

    def test_index_width(self):
        self.assertEqual([index_width(q) for q in (1, 2, 3, 4, 5, 8)], [0, 1, 2, 2, 3, 3])
        self.assertEqual(det_cost_ceiling(2, 2), 6)

    def test_parity_is_always_correct(self):
        run = exhaustive_det_run(catalog("parity", t=2), 4, 2)
        self.assertEqual(run.correct, run.total)
        self.assertEqual(run.total, 16 * 16)
        self.assertLessEqual(run.max_cost, 6)

    def test_catalog_instances(self):
        for name, t, n in [("or", 2, 4), ("maj", 3, 6), ("omb", 2, 6)]:
            run = exhaustive_det_run(catalog(name, t=t), n, t)
            self.assertEqual(run.correct, run.total, name)
            self.assertLessEqual(run.max_cost, run.ceiling, name)

    def test_transcript_shape(self):
        tree = min_depth_tree(OR2).tree
        inp = ProtocolInput(4, 2, x=0b0100, column=ColumnIndex((0, 1), 0))
        transcript = det_protocol(tree, inp)
        self.assertEqual(transcript.output, OR2(inp.z()))
        self.assertEqual(transcript.messages[0].speaker, BOB)
        self.assertEqual(transcript.messages[1].speaker, ALICE)
        record = json.loads(transcript.to_json(inp))
        self.assertEqual(record["cost"], transcript.cost)
        self.assertEqual(record["input"]["V"], [0, 1])

    def test_projection(self):
        # V picks x_1 from block 1 and x_4 from block 2
        inp = ProtocolInput(4, 2, x=0b1000, column=ColumnIndex((0, 1), 0b01))
        self.assertEqual(inp.z(), 0b11)

    def test_bad_inputs(self):
        with self.assertRaises(MalformedInputError):
            ProtocolInput(4, 2, x=16, column=ColumnIndex((0, 0), 0))
        with self.assertRaises(MalformedInputError):
            ProtocolInput(4, 2, x=0, column=ColumnIndex((0, 2), 0))
        with self.assertRaises(MalformedInputError):
            ProtocolInput(5, 2, x=0, column=ColumnIndex((0, 0), 0))

    def test_exhaustive_gate(self):
        with self.assertRaises(SizeLimitError):
            exhaustive_det_run(catalog("or", t=2), 12, 2)


class TestWeightProtocol(unittest.TestCase):

    def setUp(self):
        self.cert = weight_bruteforce(OR2, 1).certificate

    def test_advantage_is_at_least_reciprocal_weight(self):
        advantage = exact_advantage(self.cert, OR2, 4, 2)
        self.assertGreaterEqual(advantage, Fraction(1, self.cert.weight))
        for z in range(4):
            self.assertEqual(abs(expected_output(self.cert, z)) * self.cert.weight % 1, 0)

    def test_exact_only_mode(self):
        stats = simulate_weight_protocol(self.cert, OR2, 4, 2, trials=0, seed=7)
        self.assertIsNone(stats.empirical_success)
        self.assertIsNone(stats.within_band)
        self.assertGreaterEqual(stats.success_floor, Fraction(2, 3))
        self.assertGreaterEqual(stats.exact_success, stats.success_floor)

    def test_monte_carlo_within_band(self):
        stats = simulate_weight_protocol(self.cert, OR2, 4, 2, trials=100000, seed=7)
        self.assertTrue(stats.within_band)
        self.assertGreaterEqual(stats.empirical_success, 2 / 3 - 4 * stats.sigma)
        self.assertLessEqual(stats.max_cost, stats.cost_ceiling)

    def test_seeded_runs_repeat(self):
        a = simulate_weight_protocol(self.cert, OR2, 4, 2, trials=2000, seed=3)
        b = simulate_weight_protocol(self.cert, OR2, 4, 2, trials=2000, seed=3)
        self.assertEqual(a, b)

    def test_single_run_transcript(self):
        inp = ProtocolInput(4, 2, x=0b0110, column=ColumnIndex((1, 0), 0b10))
        transcript = rand_weight_protocol(self.cert, inp, seed=11)
        self.assertIn(transcript.output, (-1, 1))
        self.assertEqual([m.speaker for m in transcript.messages], [BOB, ALICE, BOB])
        self.assertEqual(transcript.messages[-1].bits, "1" if transcript.output < 0 else "0")
        self.assertLessEqual(transcript.cost, rand_cost_ceiling(1, 2))

    def test_certificate_must_sign_represent(self):
        wrong = WeightCertificate(t=2, d=1, lambdas={0: 1})
        with self.assertRaises(MalformedInputError):
            exact_advantage(wrong, OR2, 4, 2)

    def test_negative_trials(self):
        with self.assertRaises(MalformedInputError):
            simulate_weight_protocol(self.cert, OR2, 4, 2, trials=-1, seed=0)


if __name__ == "__main__":
    unittest.main()
