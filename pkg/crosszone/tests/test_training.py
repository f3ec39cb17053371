"""Unit tests for training-matrix construction and optimality."""

import unittest

import numpy as np

from crosszone.core.czcp import canonicalize
from crosszone.core.errors import TrainingMatrixError
from crosszone.core.known_pairs import TABLE_PAIRS
from crosszone.core.models import SeedVariant, SequencePair, TrainingMatrix, TrainingParams
from crosszone.core.training import (
    assemble_x, expand_omega, expand_psi, matrix_metadata, normalize_energy, omega_to_psi, psi_to_omega,
    seed_conditions, seed_psi, single_block_matrix, training_matrix_from_pair, verify_optimal
)
from crosszone.tests.test_utils import CrosszoneTestCase


class OptimalityTest(CrosszoneTestCase):
    """Matrices built from CZCPs are optimal up to lambda = Z."""

    def test_gram_is_scaled_identity(self):
        for n in (8, 16):
            pair, z = TABLE_PAIRS[n].pair, TABLE_PAIRS[n].z
            for variant in SeedVariant:
                for n_t in (2, 4, 8):
                    for j in (2, 6, 18):
                        with self.subTest(n=n, variant=variant.value, n_t=n_t, j=j):
                            omega = training_matrix_from_pair(pair, variant, n_t=n_t, j=j)
                            report = verify_optimal(omega, z)
                            self.assertTrue(report.optimal, report.violations[:3])
                            self.assertEqual(report.energy, j * n)

    def test_non_perfect_pair_up_to_its_width(self):
        entry = TABLE_PAIRS[18]
        for variant in SeedVariant:
            omega = training_matrix_from_pair(entry.pair, variant, n_t=4, j=2)
            for lam in range(entry.z + 1):
                self.assertTrue(verify_optimal(omega, lam).optimal)

    def test_checks_agree(self):
        omega = training_matrix_from_pair(TABLE_PAIRS[8].pair, SeedVariant.PSI2, n_t=4, j=2)
        report = verify_optimal(omega, 4)
        self.assertEqual(report.gram_optimal, report.pcc_optimal)
        np.testing.assert_array_equal(report.gram, 16 * np.eye(20))

    def test_single_block_matrix_is_not_optimal(self):
        pair = TABLE_PAIRS[8].pair
        omega = single_block_matrix([pair.a, pair.b])
        self.assertTrue(verify_optimal(omega, 0).optimal)
        for lam in (1, 2, 3):
            report = verify_optimal(omega, lam)
            self.assertFalse(report.optimal)
            self.assertTrue(report.violations)

    def test_single_block_needs_equal_lengths(self):
        with self.assertRaises(TrainingMatrixError):
            single_block_matrix([self.random_sequence(4), self.random_sequence(5)])

    def test_support_has_one_antenna_per_slot(self):
        omega = training_matrix_from_pair(TABLE_PAIRS[8].pair, n_t=4, j=2)
        self.assertEqual(omega.support[:8].tolist(), [0] * 8)
        self.assertEqual(omega.support[8:16].tolist(), [1] * 8)
        self.assertEqual(omega.support[32:40].tolist(), [0] * 8)

    def test_column_with_two_entries_is_rejected(self):
        with self.assertRaises(ValueError):
            TrainingMatrix(entries=np.array([[1, 1], [1, 0]], dtype=complex))


class SeedTest(CrosszoneTestCase):
    """The 2 x 2 seed matrices and their correlation conditions."""

    def test_conditions_hold_up_to_width(self):
        for n, entry in TABLE_PAIRS.items():
            seed_pair = canonicalize(entry.pair)
            for variant in SeedVariant:
                with self.subTest(n=n, variant=variant.value):
                    report = seed_conditions(seed_psi(seed_pair, variant), entry.z)
                    self.assertEqual(len(report), 6)
                    self.assertTrue(all(c.holds for c in report), [c.name for c in report if not c.holds])

    def test_condition_names(self):
        report = seed_conditions(seed_psi(canonicalize(self.random_pair(8)), SeedVariant.PSI1), 3)
        self.assertEqual({c.name for c in report}, {
            "front_zacz_row1", "front_zacz_row2", "tail_zacz_row1", "tail_zacz_row2", "adjacent_cross", "wrap_cross",
        })

    def test_all_plus_pair_fails(self):
        flat = seed_psi(SequencePair.binary("+" * 8, "+" * 8), SeedVariant.PSI1)
        report = {c.name: c for c in seed_conditions(flat, 2)}
        self.assertFalse(report["front_zacz_row1"].holds)
        self.assertEqual(report["front_zacz_row1"].failing_shifts, [1, 2])

    def test_lambda_must_be_below_block_length(self):
        seed = seed_psi(TABLE_PAIRS[4].pair, SeedVariant.PSI1)
        with self.assertRaises(TrainingMatrixError):
            seed_conditions(seed, 4)

    def test_second_seed_rows(self):
        seed = seed_psi(TABLE_PAIRS[4].pair, SeedVariant.PSI2)
        a, b = TABLE_PAIRS[4].pair.a, TABLE_PAIRS[4].pair.b
        self.assertEqual(seed.blocks[0], (a, b))
        self.assertEqual(len(seed.blocks[1][0]), 4)
        self.assertEqual(seed.q, 2)


class LayoutTest(CrosszoneTestCase):
    """Replication, layout and the stacked convolution matrix."""

    def test_expand_psi(self):
        seed = seed_psi(TABLE_PAIRS[8].pair, SeedVariant.PSI2)
        psi = expand_psi(seed, 6)
        self.assertEqual((psi.n_t, psi.j, psi.theta), (6, 2, 8))
        self.assertEqual(psi.row(2), seed.blocks[0])
        self.assertEqual(psi.row(3), seed.blocks[1])

    def test_expand_psi_errors(self):
        seed = seed_psi(TABLE_PAIRS[8].pair, SeedVariant.PSI1)
        with self.assertRaises(TrainingMatrixError):
            expand_psi(seed, 3)
        with self.assertRaises(TrainingMatrixError):
            expand_psi(expand_psi(seed, 4), 8)

    def test_layout_round_trip(self):
        psi = expand_psi(seed_psi(TABLE_PAIRS[10].pair, SeedVariant.PSI2), 4)
        omega = psi_to_omega(psi)
        self.assertEqual(omega.entries.shape, (4, 80))
        self.assertEqual(omega_to_psi(omega, 2), psi)

    def test_layout_rejects_mismatched_params(self):
        psi = expand_psi(seed_psi(TABLE_PAIRS[8].pair, SeedVariant.PSI1), 4)
        with self.assertRaises(TrainingMatrixError):
            psi_to_omega(psi, TrainingParams(n_t=4, j=3, theta=8))

    def test_expand_omega(self):
        omega = training_matrix_from_pair(TABLE_PAIRS[8].pair, n_t=2, j=2)
        wide = expand_omega(omega, 6)
        self.assertEqual(wide.params.j, 6)
        np.testing.assert_array_equal(wide.entries[:, 32:64], omega.entries)
        with self.assertRaises(TrainingMatrixError):
            expand_omega(omega, 5)
        with self.assertRaises(TrainingMatrixError):
            expand_omega(wide, 12)

    def test_normalize_energy(self):
        omega = training_matrix_from_pair(TABLE_PAIRS[8].pair, n_t=4, j=2)
        scaled = normalize_energy(omega, 32)
        np.testing.assert_allclose(scaled.row_energies(), [32.0] * 4)
        self.assertFalse(scaled.is_gaussian_integer)
        self.assertTrue(verify_optimal(scaled, 4).optimal)

    def test_normalize_needs_equal_rows(self):
        omega = TrainingMatrix(entries=np.array([[1, 0], [0, 2]], dtype=complex))
        with self.assertRaises(TrainingMatrixError):
            normalize_energy(omega, 1)

    def test_assemble_x(self):
        omega = training_matrix_from_pair(TABLE_PAIRS[8].pair, n_t=4, j=2)
        x = assemble_x(omega, 3)
        self.assertEqual(x.shape, (64, 16))
        np.testing.assert_array_equal(x.x[:, 1], np.roll(omega.entries[0], 1))
        np.testing.assert_array_equal(x.x[:, 4], omega.entries[1])
        with self.assertRaises(TrainingMatrixError):
            assemble_x(omega, -1)

    def test_metadata(self):
        omega = training_matrix_from_pair(TABLE_PAIRS[16].pair, SeedVariant.PSI2, n_t=4, j=6, label="demo")
        meta = matrix_metadata(omega, 8, "psi2")
        self.assertEqual(meta, {
            "n_t": 4, "j": 6, "theta": 16, "lambda": 8, "seed_kind": "psi2", "E": 96.0, "label": "demo",
        })


if __name__ == "__main__":
    unittest.main()
