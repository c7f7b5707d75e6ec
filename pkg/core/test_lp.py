"""
Exact arithmetic, the simplex solver and the Jacobi singular values.
"""

import unittest
from fractions import Fraction

import numpy as np
from hypothesis import given, seed, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from core.approx import _approx_program
from core.boolfn import catalog
from core.numeric import DenseMatrix, format_rational, log2, parse_rational
from core.policy import MalformedInputError
from core.simplex import INFEASIBLE, OPTIMAL, UNBOUNDED, Constraint, LPProblem, check_certificate, lp_solve
from core.spectral import (group_spectrum, numerical_rank, singular_values, spectral_norm, sym_eigenvalues,
                           trace_norm)


def _production_problem() -> LPProblem:
    # maximize x + y, x + 2y <= 4, 3x + y <= 6
    return LPProblem(objective=(1, 1),
                     constraints=(Constraint((1, 2), "<=", 4), Constraint((3, 1), "<=", 6)),
                     maximize=True)


class TestRationals(unittest.TestCase):

    def test_parse_fraction_string(self):
        self.assertEqual(parse_rational("1/3"), Fraction(1, 3))
        self.assertEqual(parse_rational(" -2 "), Fraction(-2))

    def test_decimal_rejected_in_exact_mode(self):
        with self.assertRaises(MalformedInputError):
            parse_rational("0.5")
        self.assertEqual(parse_rational("0.5", exact=False), Fraction(1, 2))

    def test_garbage_is_malformed(self):
        with self.assertRaises(MalformedInputError) as ctx:
            parse_rational("one third")
        self.assertIn("MALFORMED_INPUT", str(ctx.exception))

    def test_format_is_canonical(self):
        self.assertEqual(format_rational(Fraction(2, 4)), "1/2")
        self.assertEqual(format_rational(3), "3/1")

    def test_log2_of_huge_rational(self):
        self.assertAlmostEqual(log2(Fraction(2 ** 2000, 2 ** 1990)), 10.0)

    def test_dense_matrix_exact_norms(self):
        m = DenseMatrix([[Fraction(1, 2), Fraction(-1, 4)], [0, Fraction(1, 4)]], exact=True)
        self.assertTrue(m.is_exact)
        self.assertEqual(m.l1_norm(), 1)
        self.assertEqual(m.inner(m.abs()), Fraction(1, 4) + Fraction(-1, 16) + Fraction(1, 16))

    def test_empty_matrix_rejected(self):
        with self.assertRaises(MalformedInputError):
            DenseMatrix(np.zeros((0, 3)))


class TestSimplex(unittest.TestCase):

    def test_exact_optimum_and_certificate(self):
        problem = _production_problem()
        sol = lp_solve(problem, "exact")
        self.assertEqual(sol.status, OPTIMAL)
        self.assertEqual(sol.objective, Fraction(14, 5))
        self.assertEqual(tuple(sol.primal), (Fraction(8, 5), Fraction(6, 5)))
        self.assertTrue(all(check_certificate(problem, sol).values()))

    def test_float_mode_agrees(self):
        sol = lp_solve(_production_problem(), "float")
        self.assertEqual(sol.status, OPTIMAL)
        self.assertAlmostEqual(sol.objective, 2.8, places=9)

    def test_infeasible(self):
        problem = LPProblem(objective=(1,), constraints=(Constraint((1,), ">=", 2), Constraint((1,), "<=", 1)))
        self.assertEqual(lp_solve(problem, "exact").status, INFEASIBLE)

    def test_unbounded(self):
        problem = LPProblem(objective=(1,), constraints=(Constraint((1,), ">=", 0),), maximize=True)
        self.assertEqual(lp_solve(problem, "exact").status, UNBOUNDED)

    def test_dimension_mismatch(self):
        with self.assertRaises(MalformedInputError):
            LPProblem(objective=(1, 1), constraints=(Constraint((1,), "<=", 1),))

    def test_bad_relation(self):
        with self.assertRaises(MalformedInputError):
            Constraint((1,), "<", 1)

    def test_float_pricing_wraps_to_leading_columns(self):
        # the optimum needs a column that sits behind the pricing cursor
        problem, _ = _approx_program(catalog("maj", t=3), 1)
        sol = lp_solve(problem, "float")
        self.assertEqual(sol.status, OPTIMAL)
        self.assertAlmostEqual(sol.objective, 0.5, places=9)
        self.assertTrue(all(check_certificate(problem, sol).values()))

    @seed(11)
    @settings(max_examples=40, deadline=None)
    @given(st.integers(min_value=17, max_value=40).flatmap(lambda n: st.tuples(
        st.lists(st.integers(min_value=-4, max_value=6), min_size=n, max_size=n),
        st.lists(st.lists(st.integers(min_value=-3, max_value=5), min_size=n, max_size=n), min_size=1, max_size=5),
        st.lists(st.integers(min_value=0, max_value=12), min_size=5, max_size=5))))
    def test_float_solutions_certify(self, case):
        objective, matrix, rhs = case
        # the origin is feasible and the unit box keeps the program bounded
        problem = LPProblem(objective=tuple(objective),
                            constraints=tuple(Constraint(tuple(row), "<=", b) for row, b in zip(matrix, rhs)),
                            bounds=((0, 1),) * len(objective),
                            maximize=True)
        sol = lp_solve(problem, "float")
        self.assertEqual(sol.status, OPTIMAL)
        self.assertEqual(check_certificate(problem, sol),
                         {"primal-feasible": True, "dual-sign": True, "reduced-cost": True,
                          "strong-duality": True})
        self.assertAlmostEqual(sol.objective, float(lp_solve(problem, "exact").objective), places=7)


class TestSingularValues(unittest.TestCase):

    def test_diagonal(self):
        values = singular_values(np.diag([3.0, 4.0]))
        np.testing.assert_allclose(values, [4.0, 3.0], atol=1e-12)

    def test_grouping_and_rank(self):
        values = singular_values(np.eye(4) * 2.0)
        groups = group_spectrum(values)
        self.assertEqual(len(groups), 1)
        self.assertAlmostEqual(groups[0][0], 2.0)
        self.assertEqual(groups[0][1], 4)
        self.assertEqual(numerical_rank(values), 4)

    def test_non_symmetric_input_rejected(self):
        with self.assertRaises(MalformedInputError):
            sym_eigenvalues(np.array([[0.0, 1.0], [0.0, 0.0]]))

    @seed(1)
    @settings(max_examples=40, deadline=None)
    @given(arrays(np.int64, (3, 5), elements=st.integers(min_value=-5, max_value=5)))
    def test_matches_numpy_svd(self, a):
        ours = singular_values(a.astype(np.float64))
        reference = np.linalg.svd(a.astype(np.float64), compute_uv=False)
        np.testing.assert_allclose(ours, reference, atol=1e-5)

    @seed(2)
    @settings(max_examples=40, deadline=None)
    @given(st.tuples(st.integers(min_value=1, max_value=8), st.integers(min_value=1, max_value=8),
                     st.integers(min_value=1, max_value=8)).flatmap(lambda dims: st.tuples(
                         arrays(np.int64, (dims[0], dims[1]), elements=st.integers(min_value=-5, max_value=5)),
                         arrays(np.int64, (dims[1], dims[2]), elements=st.integers(min_value=-5, max_value=5)))))
    def test_trace_norm_of_product(self, pair):
        a, b = (m.astype(np.float64) for m in pair)
        bound = np.linalg.norm(a) * np.linalg.norm(b)
        # rank-deficient products pick up square-root noise from the Gram eigenvalues
        self.assertLessEqual(trace_norm(a @ b), bound + 1e-6 * max(1.0, bound))

    @seed(12)
    @settings(max_examples=40, deadline=None)
    @given(st.tuples(st.integers(min_value=1, max_value=8), st.integers(min_value=1, max_value=8)).flatmap(
        lambda shape: st.tuples(arrays(np.int64, shape, elements=st.integers(min_value=-5, max_value=5)),
                                arrays(np.int64, shape, elements=st.integers(min_value=-5, max_value=5)))))
    def test_inner_product_below_norm_times_trace_norm(self, pair):
        a, b = (m.astype(np.float64) for m in pair)
        bound = spectral_norm(a) * trace_norm(b)
        self.assertLessEqual(float(np.sum(a * b)), bound + 1e-9 * max(1.0, bound))


if __name__ == "__main__":
    unittest.main()
