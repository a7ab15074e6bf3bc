"""Tests for the three-norm inequality and the nested bisection solver."""
import math
import unittest

import numpy as np
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from app.tools.kolmogorov.errors import ArgumentError, InfeasibleTripleError
from app.tools.kolmogorov.extremal_family import norm_table, scale_params, value_at_origin, value_at_origin_from_gap
from app.tools.kolmogorov.models import ExtremalParams, SolveRequest
from app.tools.kolmogorov.solver import (
    check_olov, olov_bound, olov_constant, outer_norm, solve_b_zero, solve_inner_a, solve_inner_gap,
    solve_outer_b,
)
from app.tools.kolmogorov.utils.test_logging_utils import setup_test_logging

setup_test_logging()


def sampled_request(rng):
    """Admissible request read off a random extremal spline."""
    r = int(rng.integers(3, 9))
    j2 = int(rng.integers(1, r - 1))
    j1 = int(rng.integers(0, j2))
    a = float(np.exp(rng.uniform(np.log(0.1), np.log(10.0))))
    params = ExtremalParams(r, a, float(rng.uniform(0.0, 0.9 * a)), float(np.exp(rng.uniform(np.log(0.1), np.log(10.0)))))
    table = norm_table(params)
    return SolveRequest.from_values(r, j1, j2, table[j1], table[j2], table[r]), params


class TestInequality(unittest.TestCase):
    def test_second_order_example(self):
        self.assertEqual(check_olov(2, 0, 1, 1.0, 1.0, 1.0), 0.5)

    def test_equality_case(self):
        self.assertAlmostEqual(olov_constant(4, 0, 2), 1.0 / 6.0, places=15)
        self.assertAlmostEqual(check_olov(4, 0, 2, 1.0 / 6.0, 1.0, 1.0), 0.0, places=15)

    def test_grows_with_first_norm(self):
        self.assertGreater(check_olov(5, 1, 3, 1e12, 1.0, 1.0), 1e11)

    def test_invalid_orders(self):
        for orders in ((3, 1, 1), (3, 2, 1), (3, 0, 3), (3, -1, 1)):
            with self.assertRaises(ArgumentError):
                check_olov(*orders, 1.0, 1.0, 1.0)

    def test_invalid_targets(self):
        with self.assertRaises(ArgumentError):
            check_olov(4, 0, 2, 1.0, 0.0, 1.0)
        with self.assertRaises(ArgumentError):
            check_olov(4, 0, 2, float('nan'), 1.0, 1.0)

    @seed(77)
    @settings(max_examples=150, deadline=None)
    @given(
        r=st.integers(min_value=3, max_value=8),
        a=st.floats(min_value=0.1, max_value=10.0),
        fraction=st.floats(min_value=0.0, max_value=0.9),
        l=st.floats(min_value=0.1, max_value=10.0),
    )
    def test_extremal_splines_satisfy_inequality(self, r, a, fraction, l):
        table = norm_table(ExtremalParams(r, a, fraction * a, l))
        for j2 in range(1, r):
            for j1 in range(j2):
                self.assertGreaterEqual(check_olov(r, j1, j2, table[j1], table[j2], table[r]), -1e-10 * table[j1])


class TestClosedForm(unittest.TestCase):
    def test_second_order(self):
        params = solve_b_zero(2, 1, 1.0, 1.0)
        self.assertAlmostEqual(params.a, 1.0, places=15)
        self.assertAlmostEqual(norm_table(params)[0], 0.5, places=15)

    def test_fourth_order(self):
        params = solve_b_zero(4, 2, 1.0, 1.0)
        self.assertAlmostEqual(params.a, math.sqrt(2.0), places=15)
        self.assertAlmostEqual(norm_table(params)[0], 1.0 / 6.0, places=14)

    def test_matches_target(self):
        for r, j in ((3, 0), (5, 2), (7, 6)):
            params = solve_b_zero(r, j, 2.5, 0.3)
            self.assertEqual(params.b, 0.0)
            self.assertAlmostEqual(norm_table(params)[j] / 2.5, 1.0, delta=1e-13)

    def test_equality_at_zero_peak(self):
        rng = np.random.default_rng(21)
        for _ in range(100):
            r = int(rng.integers(3, 9))
            k2 = int(rng.integers(1, r))
            k1 = int(rng.integers(0, k2))
            params = ExtremalParams(r, float(rng.uniform(0.1, 10.0)), 0.0, float(rng.uniform(0.1, 10.0)))
            table = norm_table(params)
            expected = olov_bound(r, k1, k2, table[k2], params.l)
            self.assertAlmostEqual(table[k1] / expected, 1.0, delta=1e-10)

    def test_commutes_with_scaling(self):
        r, j, lam, mu = 5, 2, 2.0, 10.0
        base = solve_b_zero(r, j, 0.7, 1.3)
        scaled = solve_b_zero(r, j, mu * lam ** (r - j) * 0.7, mu * 1.3)
        expected = scale_params(base, lam, mu)
        self.assertAlmostEqual(scaled.a / expected.a, 1.0, delta=1e-14)
        self.assertAlmostEqual(scaled.l / expected.l, 1.0, delta=1e-14)


class TestInnerSolve(unittest.TestCase):
    def test_zero_peak(self):
        self.assertAlmostEqual(solve_inner_a(3, 1, 0.0, 1.0, 1.0) / math.sqrt(2.0), 1.0, delta=1e-12)

    def test_positive_peak(self):
        a = solve_inner_a(3, 1, 1.0, 1.0, 1.0)
        self.assertGreater(a, 1.0)
        self.assertAlmostEqual(value_at_origin(ExtremalParams(3, a, 1.0, 1.0), 1), 1.0, delta=1e-12)
        self.assertAlmostEqual(norm_table(ExtremalParams(3, a, 1.0, 1.0))[1], 1.0, delta=1e-11)

    def test_single_crossing(self):
        grid = np.linspace(1.0, 4.0, 3000)[1:]
        values = np.array([value_at_origin(ExtremalParams(3, a, 1.0, 1.0), 1) for a in grid])
        self.assertTrue(np.all(np.diff(values) > 0))
        self.assertEqual(int(np.sum(np.diff(np.sign(values - 1.0)) != 0)), 1)

    def test_vanishes_at_peak(self):
        near = value_at_origin(ExtremalParams(4, 1.0 + 1e-9, 1.0, 1.0), 1)
        self.assertLess(near, 1e-15)

    def test_root_on_first_doubling(self):
        # d = 1 gives psi = 1 exactly
        self.assertEqual(solve_inner_a(3, 1, 1.0, 1.0, 1.0), 2.0)
        self.assertEqual(solve_inner_gap(3, 1, 1.0, 1.0, 1.0), 1.0)

    def test_gap_resolved_far_from_origin(self):
        for b, d in ((1e6, 0.1), (1e3, 1e-4), (50.0, 1e-5)):
            target = value_at_origin_from_gap(4, 1, d, b, 1.0)
            self.assertAlmostEqual(solve_inner_gap(4, 1, b, target, 1.0) / d, 1.0, delta=1e-10, msg=f"b={b}")

    def test_order_limit(self):
        with self.assertRaises(ArgumentError):
            solve_inner_a(4, 3, 0.5, 1.0, 1.0)


class TestOuterSolve(unittest.TestCase):
    def test_boundary_uses_zero_peak(self):
        result = solve_outer_b(SolveRequest.from_values(4, 0, 2, 1.0 / 6.0, 1.0, 1.0))
        self.assertEqual(result.params.b, 0.0)
        self.assertAlmostEqual(result.params.a, math.sqrt(2.0), places=14)

    def test_interior_solution(self):
        result = solve_outer_b(SolveRequest.from_values(4, 0, 2, 1.0, 1.0, 1.0))
        self.assertGreater(result.params.b, 0.0)
        for k in (0, 2, 4):
            self.assertAlmostEqual(result.achieved[k], 1.0, delta=1e-9)
            self.assertLessEqual(result.residuals[k], 1e-9)
        self.assertGreater(result.iterations['outer'], 0)
        self.assertGreater(result.iterations['inner'], 0)

    def test_hand_targets(self):
        result = solve_outer_b(SolveRequest.from_values(4, 1, 2, 1.0, 1.0, 1.0))
        self.assertAlmostEqual(result.params.a, 2.0, delta=1e-9)
        self.assertAlmostEqual(result.params.b, 1.0, delta=1e-9)

    def test_peak_offset_much_larger_than_gap(self):
        r, j1, j2, b, d = 5, 1, 3, 1e3, 1e-3
        targets = {k: value_at_origin_from_gap(r, k, d, b, 1.0) for k in (j1, j2)}
        result = solve_outer_b(SolveRequest.from_values(r, j1, j2, targets[j1], targets[j2], 1.0))
        self.assertAlmostEqual(result.params.b / b, 1.0, delta=1e-6)
        self.assertAlmostEqual(result.params.gap / d, 1.0, delta=1e-6)
        for k in (j1, j2):
            self.assertLessEqual(result.residuals[k], 1e-9)

    def test_infeasible_triple(self):
        with self.assertRaises(InfeasibleTripleError) as ctx:
            solve_outer_b(SolveRequest.from_values(4, 0, 2, 0.1, 1.0, 1.0))
        self.assertLess(ctx.exception.slack, 0.0)

    def test_request_validation(self):
        with self.assertRaises(ArgumentError):
            SolveRequest.from_values(4, 0, 3, 1.0, 1.0, 1.0)
        with self.assertRaises(ArgumentError):
            SolveRequest.from_values(4, 0, 2, 1.0, -1.0, 1.0)

    def test_scaled_request(self):
        r, j1, j2 = 5, 1, 3
        base = solve_outer_b(SolveRequest.from_values(r, j1, j2, 1.0, 0.5, 2.0))
        for lam in (0.5, 2.0):
            for mu in (0.1, 10.0):
                targets = {k: mu * lam ** (r - k) * v for k, v in ((j1, 1.0), (j2, 0.5), (r, 2.0))}
                scaled = solve_outer_b(SolveRequest.from_values(r, j1, j2, targets[j1], targets[j2], targets[r]))
                expected = scale_params(base.params, lam, mu)
                self.assertAlmostEqual(scaled.params.a / expected.a, 1.0, delta=1e-9)
                self.assertAlmostEqual(scaled.params.b / expected.b, 1.0, delta=1e-9)
                self.assertAlmostEqual(scaled.params.l / expected.l, 1.0, delta=1e-12)

    def test_roundtrip(self):
        rng = np.random.default_rng(2024)
        for _ in range(100):
            request, params = sampled_request(rng)
            result = solve_outer_b(request)
            for k in (request.j1, request.j2, request.r):
                self.assertLessEqual(abs(result.achieved[k] / request.targets[k] - 1.0), 1e-8, msg=str(params))

    def test_outer_curve_starts_at_closed_form(self):
        rng = np.random.default_rng(22)
        for _ in range(30):
            r = int(rng.integers(3, 9))
            j2 = int(rng.integers(1, r - 1))
            j1 = int(rng.integers(0, j2))
            M2, l = float(rng.uniform(0.1, 10.0)), float(rng.uniform(0.1, 10.0))
            self.assertAlmostEqual(outer_norm(r, j1, j2, 0.0, M2, l) / olov_bound(r, j1, j2, M2, l), 1.0, delta=1e-10)

    def test_bracket_contains_root(self):
        r, j1, j2, M1 = 6, 1, 3, 2.0
        result = solve_outer_b(SolveRequest.from_values(r, j1, j2, M1, 1.0, 1.0))
        lo, hi = result.bracket
        self.assertLess(lo, result.params.b)
        self.assertLess(result.params.b, hi)
        self.assertLess(outer_norm(r, j1, j2, lo, 1.0, 1.0) - M1, 0.0)
        self.assertGreater(outer_norm(r, j1, j2, hi, 1.0, 1.0) - M1, 0.0)

    def test_outer_curve_diverges(self):
        values = [outer_norm(5, 0, 2, 2.0 ** i, 1.0, 1.0) for i in range(12)]
        self.assertTrue(all(later > earlier for earlier, later in zip(values[4:], values[5:])))
        self.assertGreater(values[-1], 1e3 * values[0])


if __name__ == '__main__':
    unittest.main()
