"""Unit tests for the channel-estimation simulator."""

import unittest
from functools import partial

import numpy as np
import pytest

from crosszone.core.baselines import random_regular_matrix
from crosszone.core.errors import LengthMismatchError, RankDeficiencyError, TrainingMatrixError
from crosszone.core.known_pairs import TABLE_PAIRS
from crosszone.core.models import ChannelModel, SimConfig, TrainingMatrix
from crosszone.core.simulator import (
    LsEstimator, ls_estimate, multipath_sweep, noise_variance, observe, report_to_csv, run_sweep, sample_channel,
    theoretical_mse, transmit_with_cyclic_prefix, trial_generator
)
from crosszone.core.training import assemble_x, normalize_energy, training_matrix_from_pair
from crosszone.tests.test_utils import CrosszoneTestCase


def _proposed(energy: float = 32.0) -> TrainingMatrix:
    return normalize_energy(training_matrix_from_pair(TABLE_PAIRS[16].pair, n_t=4, j=2, label="proposed"), energy)


class ChannelTest(CrosszoneTestCase):
    """Channel draws, the receive model and the LS estimator."""

    def test_noise_variance(self):
        self.assertAlmostEqual(noise_variance(0), 1.0)
        self.assertAlmostEqual(noise_variance(10), 0.1)

    def test_channel_size(self):
        h = sample_channel(ChannelModel(n_t=4, lam=0), self.rng)
        self.assertEqual(h.h.shape, (4,))
        self.assertEqual(sample_channel(ChannelModel(n_t=4, lam=3), self.rng).h.shape, (16,))

    def test_trial_streams_are_reproducible(self):
        first = trial_generator(5, 0, 1, 2).standard_normal(4)
        again = trial_generator(5, 0, 1, 2).standard_normal(4)
        other = trial_generator(5, 0, 1, 3).standard_normal(4)
        np.testing.assert_array_equal(first, again)
        self.assertFalse(np.array_equal(first, other))

    def test_scalar_channel(self):
        omega = TrainingMatrix(entries=np.array([[2.0 + 0j]]))
        x = assemble_x(omega, 0)
        y = observe(x, np.array([0.5 - 1j]), 0.0, self.rng)
        np.testing.assert_allclose(y, [1.0 - 2j])

    def test_noiseless_estimate_is_exact(self):
        x = assemble_x(_proposed(), 4)
        h = sample_channel(ChannelModel(n_t=4, lam=4), self.rng)
        y = observe(x, h, 0.0, self.rng)
        np.testing.assert_allclose(LsEstimator(x).estimate(y), h.h, atol=1e-12)
        np.testing.assert_allclose(ls_estimate(x, y), h.h, atol=1e-12)

    def test_observe_length_mismatch(self):
        x = assemble_x(_proposed(), 2)
        with self.assertRaises(LengthMismatchError):
            observe(x, np.zeros(5, dtype=complex), 0.0, self.rng)

    def test_cyclic_prefix_matches_circulant_model(self):
        omega = _proposed()
        for lam in (0, 3, 8):
            with self.subTest(lam=lam):
                h = sample_channel(ChannelModel(n_t=4, lam=lam), self.rng)
                expected = assemble_x(omega, lam).x @ h.h
                np.testing.assert_allclose(transmit_with_cyclic_prefix(omega, h, lam), expected, atol=1e-12)
        with self.assertRaises(LengthMismatchError):
            transmit_with_cyclic_prefix(omega, np.zeros(7, dtype=complex), 1)

    def test_rank_deficient_matrix(self):
        omega = TrainingMatrix(entries=np.array([[1, 0], [0, 1]], dtype=complex))
        with self.assertRaises(RankDeficiencyError):
            LsEstimator(assemble_x(omega, 1))

    def test_theory_for_optimal_matrix(self):
        x = assemble_x(_proposed(), 8)
        self.assertAlmostEqual(theoretical_mse(x, 0.1), 0.1 / 32)

    def test_closed_form_estimate_for_optimal_matrix(self):
        # X^H X = E I, so the LS solution reduces to X^H y / E
        x = assemble_x(_proposed(), 4)
        for _ in range(20):
            h = sample_channel(ChannelModel(n_t=4, lam=4), self.rng)
            y = observe(x, h, 0.7, self.rng)
            np.testing.assert_allclose(x.x.conj().T @ y / 32, ls_estimate(x, y), atol=1e-10)

    def test_noise_variance_without_channel(self):
        x = assemble_x(_proposed(), 4)
        h = np.zeros(20, dtype=complex)
        sigma2 = 0.5
        samples = np.concatenate([observe(x, h, np.sqrt(sigma2), self.rng) for _ in range(2000)])
        self.assertLess(abs(np.abs(samples.mean())), 0.02)
        self.assertLess(abs(np.mean(np.abs(samples) ** 2) / sigma2 - 1), 0.03)

    def test_ls_estimate_is_unbiased(self):
        x = assemble_x(_proposed(), 4)
        estimator = LsEstimator(x)
        h = sample_channel(ChannelModel(n_t=4, lam=4), self.rng).h
        estimates = np.array([estimator.estimate(observe(x, h, 1.0, self.rng)) for _ in range(4000)])
        self.assertLess(np.max(np.abs(estimates.mean(axis=0) - h)), 0.02)

    @pytest.mark.slow
    def test_tap_variance(self):
        model = ChannelModel(n_t=4, lam=4)
        draws = np.array([sample_channel(model, self.rng).h for _ in range(100_000)])
        variances = np.mean(np.abs(draws) ** 2, axis=0)
        self.assertTrue(np.all((variances >= 0.98) & (variances <= 1.02)), variances)
        self.assertLess(np.max(np.abs(draws.mean(axis=0))), 0.02)


class SweepTest(CrosszoneTestCase):
    """Monte-Carlo sweeps."""

    def test_records_per_point(self):
        config = SimConfig(ebno_grid=[0, 10], trials=20, paths=3)
        report = run_sweep(_proposed(), config)
        self.assertEqual([r.ebno_db for r in report.records], [0, 10])
        self.assertTrue(all(r.paths == 3 and r.matrix == "proposed" for r in report.records))
        self.assertTrue(all(r.trials == 20 and r.failures == 0 for r in report.records))
        self.assertAlmostEqual(report.records[1].mse_min, 0.1 / 32)
        self.assertAlmostEqual(report.records[1].mse_theory, report.records[1].mse_min)

    def test_same_result_for_any_worker_count(self):
        factory = partial(random_regular_matrix, 4, 8)
        serial = run_sweep(factory, SimConfig(ebno_grid=[5], trials=30, paths=2, workers=1))
        parallel = run_sweep(factory, SimConfig(ebno_grid=[5], trials=30, paths=2, workers=3))
        self.assertEqual(serial.records, parallel.records)

    def test_streams_separate_sweeps(self):
        config = SimConfig(ebno_grid=[5], trials=10, paths=2)
        first = run_sweep(_proposed(), config, stream=0).records[0]
        second = run_sweep(_proposed(), config, stream=1).records[0]
        self.assertNotEqual(first.mse_empirical, second.mse_empirical)

    def test_delay_longer_than_matrix(self):
        omega = TrainingMatrix(entries=np.array([[1, 0], [0, 1]], dtype=complex))
        with self.assertRaises(TrainingMatrixError):
            run_sweep(omega, SimConfig(trials=1), lam=2)

    def test_multipath_requires_normalized_energy(self):
        raw = training_matrix_from_pair(TABLE_PAIRS[8].pair, n_t=4, j=2)
        with self.assertRaises(TrainingMatrixError):
            multipath_sweep({"raw": raw}, SimConfig(trials=1), path_counts=[1])

    def test_multipath_records(self):
        report = multipath_sweep({"proposed": _proposed()}, SimConfig(trials=10), path_counts=[1, 5, 9])
        self.assertEqual([r.paths for r in report.for_matrix("proposed")], [1, 5, 9])

    def test_csv(self):
        report = run_sweep(_proposed(), SimConfig(ebno_grid=[16], trials=5, paths=1))
        lines = report_to_csv(report).splitlines()
        self.assertEqual(lines[0], "ebno_db,paths,matrix,mse_empirical,mse_min,gap_db,trials")
        self.assertTrue(lines[1].startswith("16,1,proposed,"))
        self.assertTrue(lines[1].endswith(",5"))

    def test_optimal_matrix_reaches_bound(self):
        report = run_sweep(_proposed(), SimConfig(ebno_grid=[10], trials=1000, paths=5))
        record = report.records[0]
        self.assertLess(abs(record.mse_empirical / record.mse_min - 1), 0.05)

    @pytest.mark.slow
    def test_optimal_matrix_reaches_bound_at_full_trial_count(self):
        report = run_sweep(_proposed(), SimConfig(ebno_grid=[0, 10, 20], trials=10_000, paths=5))
        for record in report.records:
            with self.subTest(ebno=record.ebno_db):
                self.assertLess(abs(record.mse_empirical / record.mse_min - 1), 0.03)

    @pytest.mark.slow
    def test_trace_formula_for_random_matrices(self):
        factory = partial(random_regular_matrix, 4, 32)
        report = run_sweep(factory, SimConfig(ebno_grid=[10], trials=4000, paths=5))
        record = report.records[0]
        self.assertGreater(record.mse_theory, record.mse_min)
        self.assertLess(abs(record.mse_empirical / record.mse_theory - 1), 0.1)


if __name__ == "__main__":
    unittest.main()
