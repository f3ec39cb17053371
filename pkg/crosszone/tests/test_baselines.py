"""Unit tests for the baseline sequences and matrices."""

import unittest

import numpy as np

from crosszone.core.baselines import (
    GOLD_TAPS, baseline_matrix, barker_matrix, gold_sequences, lfsr, random_regular_matrix, zadoff_chu
)
from crosszone.core.models import BaselineKind, QarySequence
from crosszone.core.sequences import pcc
from crosszone.core.training import verify_optimal
from crosszone.tests.test_utils import CrosszoneTestCase


def _periodic_values(a: QarySequence, b: QarySequence, skip_peak: bool) -> set:
    start = 1 if skip_peak else 0
    return {round(pcc(a, b, tau).complex.real) for tau in range(start, len(a))}


class SequenceTest(CrosszoneTestCase):
    """m-sequences, Gold and Zadoff-Chu sequences."""

    def test_lfsr_gives_m_sequences(self):
        for taps in GOLD_TAPS:
            bits = lfsr(taps, [1, 1, 1, 1, 1])
            self.assertEqual(len(bits), 31)
            self.assertEqual(int(bits.sum()), 16)
            seq = QarySequence(q=2, phases=bits.astype(int))
            self.assertEqual(_periodic_values(seq, seq, skip_peak=True), {-1})

    def test_gold_correlations_are_three_valued(self):
        gold = gold_sequences(4)
        for i, a in enumerate(gold):
            for j, b in enumerate(gold):
                with self.subTest(i=i, j=j):
                    self.assertTrue(_periodic_values(a, b, skip_peak=i == j) <= {-1, 7, -9})

    def test_gold_offsets(self):
        self.assertEqual(gold_sequences(2, offset=3)[0], gold_sequences(4)[3])
        with self.assertRaises(ValueError):
            gold_sequences(4, offset=28)

    def test_zadoff_chu_is_cazac(self):
        zc = zadoff_chu(32, 3)
        self.assertEqual(zc.q, 64)
        for tau in range(1, 32):
            self.assertLess(abs(pcc(zc, zc, tau).complex), 1e-9)

    def test_zadoff_chu_arguments(self):
        with self.assertRaises(ValueError):
            zadoff_chu(31)
        with self.assertRaises(ValueError):
            zadoff_chu(32, 2)


class MatrixTest(CrosszoneTestCase):
    """Baseline training matrices."""

    def test_energies_are_normalized(self):
        for kind in BaselineKind:
            with self.subTest(kind=kind.value):
                omega = baseline_matrix(kind, rng=self.rng)
                self.assertEqual(omega.n_t, 4)
                np.testing.assert_allclose(omega.row_energies(), [32.0] * 4)
                self.assertEqual(omega.label, kind.value)

    def test_natural_energy(self):
        self.assertEqual(baseline_matrix(BaselineKind.MSEQ31, energy=None).energy, 31)

    def test_barker_layout(self):
        omega = barker_matrix()
        self.assertEqual(omega.entries.shape, (4, 104))
        self.assertEqual(omega.params.theta, 13)
        report = verify_optimal(omega, 1)
        self.assertFalse(report.optimal)
        self.assertTrue(report.violations)

    def test_random_regular_structure(self):
        omega = random_regular_matrix(4, 32, self.rng)
        self.assertEqual(omega.entries.shape, (4, 128))
        np.testing.assert_array_equal(np.count_nonzero(omega.entries, axis=1), [32] * 4)
        np.testing.assert_array_equal(np.count_nonzero(omega.entries, axis=0), [1] * 128)
        self.assertTrue(set(omega.entries[omega.entries != 0].real.tolist()) <= {1.0, -1.0})

    def test_random_regular_is_seeded(self):
        first = random_regular_matrix(4, 8, np.random.default_rng(7))
        second = random_regular_matrix(4, 8, np.random.default_rng(7))
        np.testing.assert_array_equal(first.entries, second.entries)

    def test_unknown_kind(self):
        with self.assertRaises(ValueError):
            baseline_matrix("hadamard")


if __name__ == "__main__":
    unittest.main()
