import unittest
from fractions import Fraction

import numpy as np
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from core.boolfn import (BooleanFunction, Predicate, all_functions, catalog, character, degree, fourier,
                         fourier_table, from_predicate, l0_l1, num_monomials, parse_predicate, predicate)
from core.dtree import computes, min_depth_tree, paths_are_simple
from core.policy import MalformedInputError, SizeLimitError


class TestCatalog(unittest.TestCase):
    """Named functions, hex tables and Fourier coefficients."""

    def test_or_table_and_hex(self):
        f = catalog("or", t=2)
        self.assertEqual(list(f.values()), [1, -1, -1, -1])
        self.assertEqual(f.to_hex(), "e")
        self.assertEqual(BooleanFunction.from_hex("e", 2), f)

    def test_or_fourier(self):
        spectrum = fourier(catalog("or", t=2))
        self.assertEqual(spectrum[0], Fraction(-1, 2))
        self.assertEqual(spectrum[1], Fraction(1, 2))
        self.assertEqual(spectrum[3], Fraction(1, 2))
        self.assertEqual(spectrum.parseval_sum(), 1)
        self.assertEqual(degree(catalog("or", t=2)), 2)

    def test_parity_is_top_character(self):
        for t in range(1, 6):
            spectrum = fourier(catalog("parity", t=t))
            self.assertEqual(spectrum.support(), [(1 << t) - 1])

    def test_mp_arity(self):
        f = catalog("mp", m=2, k=2)
        self.assertEqual(f.t, 4)
        self.assertEqual(f(0b0011), -1)
        self.assertEqual(f(0b0101), 1)

    def test_threshold_name_carries_k(self):
        self.assertEqual(catalog("thr-2", t=3), catalog("thr", t=3, k=2))

    def test_omb_signs(self):
        f = catalog("omb", t=3)
        # 1 + (-2)x1 + 4x2 - 8x3
        self.assertEqual(f(0), 1)
        self.assertEqual(f(0b001), -1)
        self.assertEqual(f(0b011), 1)

    def test_unknown_name(self):
        with self.assertRaises(MalformedInputError):
            catalog("xor3", t=3)

    def test_bad_table(self):
        with self.assertRaises(MalformedInputError):
            BooleanFunction(2, [1, 0, 1, 1])
        with self.assertRaises(MalformedInputError):
            BooleanFunction.from_hex("1ff", 2)

    def test_arity_gate(self):
        with self.assertRaises(SizeLimitError):
            catalog("or", t=30)

    def test_symmetric_levels(self):
        self.assertEqual(catalog("maj", t=3).symmetric_levels(), (1, 1, -1, -1))
        self.assertIsNone(catalog("chi", t=2, S=1).symmetric_levels())

    def test_monomial_count(self):
        self.assertEqual(num_monomials(4, 2), 11)

    def test_fourier_inversion(self):
        f = catalog("maj", t=3)
        spectrum = fourier(f)
        for x in range(8):
            value = sum(spectrum[S] * character(S, x) for S in range(8))
            self.assertEqual(value, f(x))
        self.assertEqual(character(0b101, 0b100), -1)
        self.assertEqual(character(0b101, 0b101), 1)

    @seed(3)
    @settings(max_examples=60, deadline=None)
    @given(st.integers(min_value=1, max_value=4).flatmap(
        lambda t: st.tuples(st.just(t), st.integers(min_value=0, max_value=(1 << (1 << t)) - 1))))
    def test_parseval(self, case):
        t, bits = case
        f = BooleanFunction(t, [1 - 2 * (bits >> x & 1) for x in range(1 << t)])
        self.assertEqual(fourier(f).parseval_sum(), 1)
        self.assertEqual(BooleanFunction.from_hex(f.to_hex(), t), f)

    @seed(4)
    @settings(max_examples=60, deadline=None)
    @given(st.integers(min_value=1, max_value=4).flatmap(
        lambda t: st.tuples(st.just(t), st.lists(st.integers(min_value=-9, max_value=9),
                                                  min_size=1 << t, max_size=1 << t))))
    def test_coefficients_bounded_by_mean_magnitude(self, case):
        t, values = case
        spectrum = fourier_table(values, t)
        top = max(abs(spectrum[S]) for S in range(1 << t))
        self.assertLessEqual(top, Fraction(sum(abs(v) for v in values), 1 << t))

    def test_unit_coefficient_only_for_characters(self):
        for t in range(1, 4):
            for f in all_functions(t):
                spectrum = fourier(f)
                top = max(abs(spectrum[S]) for S in range(1 << t))
                self.assertEqual(top == 1, len(spectrum.support()) == 1, f.to_hex())


class TestPredicates(unittest.TestCase):

    def test_disjointness_change_points(self):
        D = predicate("disj", 8)
        self.assertEqual(D.change_points(), [1])
        self.assertEqual(l0_l1(D), (1, 0))

    def test_and_predicate(self):
        self.assertEqual(l0_l1(predicate("and", 8)), (0, 1))

    def test_parity_predicate_is_never_stable(self):
        self.assertEqual(l0_l1(predicate("parity", 6)), (3, 3))

    def test_shift(self):
        D = parse_predicate("1,1,-1,-1,1")
        shifted = D.shift(2)
        self.assertEqual(shifted.values, (-1, -1, 1))
        with self.assertRaises(MalformedInputError):
            D.shift(4)

    def test_from_predicate(self):
        self.assertEqual(from_predicate(predicate("disj", 8), 2), catalog("or", t=2))

    def test_from_predicate_ignores_variable_order(self):
        rng = np.random.Generator(np.random.PCG64(17))
        t = 6
        D = Predicate(t, tuple(int(v) for v in 1 - 2 * rng.integers(0, 2, size=t + 1)))
        f = from_predicate(D, t)
        for _ in range(50):
            perm = rng.permutation(t)
            for x in range(1 << t):
                moved = sum(((x >> i) & 1) << int(perm[i]) for i in range(t))
                self.assertEqual(f(moved), f(x))

    def test_bad_predicate(self):
        with self.assertRaises(MalformedInputError):
            Predicate(2, (1, 1))
        with self.assertRaises(MalformedInputError):
            parse_predicate("1,x")


class TestDecisionTrees(unittest.TestCase):

    def test_known_depths(self):
        self.assertEqual(min_depth_tree(catalog("or", t=3)).depth, 3)
        self.assertEqual(min_depth_tree(catalog("chi", t=3, S=0b010)).depth, 1)
        self.assertEqual(min_depth_tree(catalog("const", t=3)).depth, 0)

    def test_tree_computes_function(self):
        for name in ("maj", "parity", "omb"):
            f = catalog(name, t=4)
            result = min_depth_tree(f)
            self.assertTrue(result.optimal)
            self.assertTrue(computes(result.tree, f))
            self.assertTrue(paths_are_simple(result.tree))

    def test_depth_at_least_degree(self):
        for name in ("or", "maj", "parity", "omb"):
            f = catalog(name, t=4)
            self.assertGreaterEqual(min_depth_tree(f).depth, degree(f))

    def test_depth_at_most_twice_degree_to_the_fourth(self):
        for t in range(1, 4):
            for f in all_functions(t):
                self.assertLessEqual(min_depth_tree(f).depth, 2 * degree(f) ** 4, f.to_hex())

    @seed(9)
    @settings(max_examples=60, deadline=None)
    @given(st.integers(min_value=0, max_value=(1 << 16) - 1))
    def test_depth_bound_at_arity_four(self, bits):
        f = BooleanFunction(4, [1 - 2 * (bits >> x & 1) for x in range(16)])
        result = min_depth_tree(f)
        self.assertTrue(result.optimal)
        self.assertLessEqual(result.depth, 2 * degree(f) ** 4)


if __name__ == "__main__":
    unittest.main()
