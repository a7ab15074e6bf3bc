"""Tests for the quadrature norm oracle, class members and the sweep."""
import json
import math
import unittest

import numpy as np

from app.tools.kolmogorov.errors import ArgumentError, InternalCheckError
from app.tools.kolmogorov.extremal_family import build_phi_r, norm_table
from app.tools.kolmogorov.models import ExtremalParams, NormProfile, TruncatedPower
from app.tools.kolmogorov.poly_core import PiecewisePolynomial, add_constant, evaluate_grid, scale
from app.tools.kolmogorov.solver import solve_b_zero
from app.tools.kolmogorov.verify import (
    assert_member, lemma3_slacks, measure_profile, member_from_atoms, membership_defect,
    property_sweep, quad_norm, random_member, trial_seed,
)
from app.tools.kolmogorov.utils.test_logging_utils import log_test_result, setup_test_logging

setup_test_logging()


class TestQuadNorm(unittest.TestCase):
    def test_hand_values(self):
        self.assertAlmostEqual(quad_norm(build_phi_r(ExtremalParams(2, 2.0, 1.0, 1.0)), 0, 2), 1.0, delta=1e-13)
        phi3 = build_phi_r(ExtremalParams(3, 2.0, 1.0, 1.0))
        for k in range(4):
            self.assertAlmostEqual(quad_norm(phi3, k, 3), 1.0, delta=1e-12)

    def test_zero_and_constant(self):
        self.assertEqual(quad_norm(PiecewisePolynomial.constant(0.0), 0, 3), 0.0)
        self.assertEqual(quad_norm(PiecewisePolynomial.constant(-2.5), 0, 3), 2.5)
        self.assertEqual(quad_norm(PiecewisePolynomial.constant(-2.5), 1, 3), 0.0)

    def test_truncated_power(self):
        p = PiecewisePolynomial.truncated_power(1.5, 2.0, 5)
        for k in range(5):
            expected = 2.0 * 1.5 ** (5 - k) / math.factorial(5 - k)
            self.assertAlmostEqual(quad_norm(p, k, 5) / expected, 1.0, delta=1e-12)
        self.assertAlmostEqual(quad_norm(p, 5, 5), 2.0, delta=1e-14)

    def test_agrees_with_norm_table(self):
        rng = np.random.default_rng(41)
        for _ in range(40):
            r = int(rng.integers(2, 9))
            a = float(np.exp(rng.uniform(np.log(0.1), np.log(10.0))))
            params = ExtremalParams(r, a, float(rng.uniform(0.0, 0.9 * a)), float(rng.uniform(0.1, 10.0)))
            p = build_phi_r(params)
            table = norm_table(params)
            for k in range(r + 1):
                self.assertAlmostEqual(quad_norm(p, k, r) / table[k], 1.0, delta=1e-9, msg=f"order {k} of {params}")

    def test_invalid_orders(self):
        p = build_phi_r(ExtremalParams(3, 2.0, 1.0, 1.0))
        with self.assertRaises(ArgumentError):
            quad_norm(p, 4, 3)
        with self.assertRaises(ArgumentError):
            quad_norm(p, 0, 2)


class TestMembers(unittest.TestCase):
    def test_deterministic(self):
        first = random_member(5, seed=3)
        again = random_member(5, seed=3)
        self.assertEqual(first.realized, again.realized)
        self.assertEqual(first.to_json_dict(), again.to_json_dict())
        self.assertNotEqual(first.realized, random_member(5, seed=4).realized)

    def test_members_in_class(self):
        for seed in range(20):
            member = random_member(3 + seed % 6, seed=seed)
            self.assertGreaterEqual(len(member.atoms), 1)
            self.assertGreaterEqual(membership_defect(member.realized, member.r), -1e-10)

    def test_no_atoms_gives_constant(self):
        member = random_member(4, atoms=0, seed=1)
        self.assertEqual(member.atoms, ())
        self.assertEqual(member.realized.segments, ())
        profile = measure_profile(member.realized, 4)
        self.assertEqual(profile[0], member.offset)
        self.assertTrue(all(profile[k] == 0.0 for k in range(1, 5)))
        min_slack, worst_pair, skipped = lemma3_slacks(profile, 4)
        self.assertIsNone(min_slack)
        self.assertIsNone(worst_pair)
        self.assertEqual(skipped, 6)

    def test_single_atom_is_extremal_spline(self):
        params = ExtremalParams(4, 2.0, 1.0, 1.0)
        member = member_from_atoms(4, [params])
        ts = np.linspace(-3.0, 0.0, 301)
        np.testing.assert_allclose(
            evaluate_grid(member.realized, ts), evaluate_grid(build_phi_r(params), ts), rtol=1e-14, atol=1e-15,
        )

    def test_mixed_atoms(self):
        member = member_from_atoms(3, [ExtremalParams(3, 2.0, 1.0, 1.0), TruncatedPower(1.0, 6.0)], offset=0.5)
        profile = measure_profile(member.realized, 3)
        self.assertAlmostEqual(profile[0], 1.0 + 1.0 + 0.5, delta=1e-13)
        self.assertAlmostEqual(profile[1], 1.0 + 3.0, delta=1e-13)
        # overlapping cubic pieces: 6 * (1 - 1/6) on [-1, 0]
        self.assertAlmostEqual(profile[3], 5.0, delta=1e-13)

    def test_outside_class_rejected(self):
        flipped = add_constant(scale(build_phi_r(ExtremalParams(3, 2.0, 1.0, 1.0)), -1.0), 5.0)
        self.assertLess(membership_defect(flipped, 3), -0.1)
        with self.assertRaises(InternalCheckError):
            assert_member(flipped, 3)

    def test_invalid_arguments(self):
        with self.assertRaises(ArgumentError):
            member_from_atoms(1, [])
        with self.assertRaises(ArgumentError):
            random_member(4, atoms=-1)
        with self.assertRaises(ArgumentError):
            member_from_atoms(3, [], offset=-1.0)


class TestMeasureProfile(unittest.TestCase):
    def test_matches_norm_table(self):
        params = ExtremalParams(5, 3.0, 1.0, 2.0)
        measured = measure_profile(build_phi_r(params), 5)
        table = norm_table(params)
        for k in range(6):
            self.assertAlmostEqual(measured[k] / table[k], 1.0, delta=1e-12)

    def test_matches_quadrature_on_members(self):
        rng = np.random.default_rng(43)
        for _ in range(10):
            r = int(rng.integers(3, 8))
            member = random_member(r, seed=int(rng.integers(0, 2 ** 32)))
            measured = measure_profile(member.realized, r)
            for k in range(r + 1):
                expected = quad_norm(member.realized, k, r)
                self.assertAlmostEqual(measured[k], expected, delta=1e-9 * max(1.0, expected), msg=f"order {k}")


class TestLemmaSweep(unittest.TestCase):
    def test_zero_peak_is_sharp(self):
        profile = norm_table(ExtremalParams(5, 2.0, 0.0, 1.0))
        min_slack, worst_pair, skipped = lemma3_slacks(profile, 5)
        self.assertLess(abs(min_slack), 1e-12)
        self.assertEqual(skipped, 0)
        self.assertIsNotNone(worst_pair)

    def test_positive_peak_has_room(self):
        min_slack, _, _ = lemma3_slacks(norm_table(ExtremalParams(3, 2.0, 1.0, 1.0)), 3)
        self.assertGreater(min_slack, 0.0)

    def test_slack_relative_to_measured_norm(self):
        # bound at (0, 1) is 4/3, so the slack is (1 - 4/3) / 1
        profile = NormProfile({0: 1.0, 1: 2.0, 2: 1.0, 3: 1.0})
        min_slack, worst_pair, skipped = lemma3_slacks(profile, 3)
        self.assertAlmostEqual(min_slack, -1.0 / 3.0, delta=1e-12)
        self.assertEqual(worst_pair, (0, 1))
        self.assertEqual(skipped, 0)

    def test_zero_peak_spline_is_lower_bound(self):
        rng = np.random.default_rng(44)
        for _ in range(20):
            r = int(rng.integers(3, 8))
            member = random_member(r, seed=int(rng.integers(0, 2 ** 32)))
            profile = measure_profile(member.realized, r)
            for k2 in range(1, r):
                matched = norm_table(solve_b_zero(r, k2, profile[k2], profile[r]))
                for k1 in range(k2):
                    self.assertLessEqual(matched[k1], profile[k1] * (1.0 + 1e-9), msg=f"orders ({k1}, {k2}, {r})")

    def test_trial_seeds_distinct(self):
        seeds = {trial_seed(0, r, trial) for r in range(3, 9) for trial in range(50)}
        self.assertEqual(len(seeds), 300)
        self.assertEqual(trial_seed(7, 4, 2), trial_seed(7, 4, 2))

    def test_small_sweep(self):
        report = property_sweep((3, 5), trials=8, seed=11, threads=1)
        log_test_result('small sweep', f"min slack {report.min_slack}")
        self.assertTrue(report.passed)
        self.assertEqual(report.failing_seeds, [])
        self.assertEqual(len(report.records), 24)
        self.assertGreaterEqual(report.min_slack, -1e-9)

    def test_independent_of_thread_count(self):
        single = property_sweep((3, 4), trials=6, seed=5, threads=1)
        pooled = property_sweep((3, 4), trials=6, seed=5, threads=4)
        self.assertEqual(single.to_json_lines(), pooled.to_json_lines())

    def test_report_lines(self):
        lines = property_sweep((3, 3), trials=3, seed=2, threads=2).to_json_lines().splitlines()
        rows = [json.loads(line) for line in lines]
        self.assertEqual([row['kind'] for row in rows], ['header', 'trial', 'trial', 'trial', 'summary'])
        self.assertEqual(rows[0]['r_range'], [3, 3])
        self.assertEqual(rows[-1]['trials'], 3)

    def test_invalid_sweep(self):
        with self.assertRaises(ArgumentError):
            property_sweep((3, 4), trials=0)
        with self.assertRaises(ArgumentError):
            property_sweep((5, 4), trials=1)


if __name__ == '__main__':
    unittest.main()
