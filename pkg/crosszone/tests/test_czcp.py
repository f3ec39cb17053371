"""Unit tests for CZCP checks, equivalences and constructions."""

import unittest

import pytest

from crosszone.core.czcp import (
    binary_perfect_czcp, canonicalize, certificate_document, construction1, construction2, construction2_count,
    czcp_width, czcs_check, czcs_from_czcp, czcs_width, golay_doubling, has_canonical_pattern, is_czcp, is_gcp,
    is_strengthened_gcp, mutually_orthogonal, mutually_orthogonal_mate, p2_cross_identities, p2_transforms,
    p3_check, perfect_binary_lengths
)
from crosszone.core.errors import AlphabetError, ConstructionError, LengthMismatchError
from crosszone.core.gbf import davis_jedwab_parameters
from crosszone.core.known_pairs import (
    EXAMPLE3, EXAMPLE5, EXAMPLE5_SEED, EXAMPLE6, EXAMPLE6_PARAMS, PRINTED_PAIRS, TABLE_PAIRS
)
from crosszone.core.models import CorrelationKind, CzcSet, DJParams, QarySequence, SequencePair
from crosszone.core.sequences import acc, pair_profile
from crosszone.tests.test_utils import CrosszoneTestCase


class PrintedPairTest(CrosszoneTestCase):
    """Every published pair has its stated width and profiles."""

    def test_widths(self):
        for name, entry in PRINTED_PAIRS.items():
            with self.subTest(pair=name):
                self.assertEqual(czcp_width(entry.pair).z, entry.z)

    def test_profiles(self):
        for name, entry in PRINTED_PAIRS.items():
            with self.subTest(pair=name):
                p = entry.pair
                self.assertEqual(pair_profile(p.a, p.b, CorrelationKind.AAC_SUM).squared_magnitudes(), entry.aac_sum)
                self.assertEqual(pair_profile(p.a, p.b, CorrelationKind.ACC_SUM).squared_magnitudes(), entry.acc_sum)

    def test_perfect_table_pairs_are_strengthened_gcps(self):
        for n, entry in TABLE_PAIRS.items():
            cert = czcp_width(entry.pair)
            with self.subTest(n=n):
                self.assertEqual(cert.perfect, entry.z == n // 2)
                if cert.perfect:
                    self.assertTrue(is_gcp(entry.pair))
                    self.assertTrue(is_strengthened_gcp(entry.pair))

    def test_example3_is_not_perfect(self):
        cert = czcp_width(EXAMPLE3.pair)
        self.assertEqual((cert.n, cert.z, cert.perfect), (9, 3, False))
        self.assertTrue(is_czcp(EXAMPLE3.pair, 3))
        self.assertFalse(is_czcp(EXAMPLE3.pair, 4))

    def test_flipped_sign_lowers_width(self):
        p = TABLE_PAIRS[8].pair
        phases = list(p.a.phases)
        phases[0] ^= 1
        broken = SequencePair(a=QarySequence(q=2, phases=phases), b=p.b)
        self.assertLess(czcp_width(broken).z, 4)

    def test_certificate_document(self):
        doc = certificate_document(TABLE_PAIRS[8].pair)
        self.assertEqual(doc["n"], 8)
        self.assertEqual(doc["z"], 4)
        self.assertTrue(doc["perfect"])
        self.assertEqual(doc["a"], "+++-++-+")
        self.assertEqual(doc["aac_sum_profile"], [256] + [0] * 7)


class PropertyTest(CrosszoneTestCase):
    """Width bound, canonical pattern, equivalences and the binary length condition."""

    def test_width_bound(self):
        for _ in range(1000):
            n = int(self.rng.integers(1, 14))
            cert = czcp_width(self.random_pair(n, int(self.rng.choice([2, 4]))))
            self.assertLessEqual(cert.z, n // 2)

    def test_canonical_pattern(self):
        for name, entry in PRINTED_PAIRS.items():
            with self.subTest(pair=name):
                self.assertTrue(has_canonical_pattern(canonicalize(entry.pair), entry.z))

    def test_random_czcps_have_canonical_pattern(self):
        found = 0
        for _ in range(1000):
            p = self.random_pair(2 * int(self.rng.integers(1, 5)))
            z = czcp_width(p).z
            if z:
                found += 1
                self.assertTrue(has_canonical_pattern(canonicalize(p), z))
        self.assertGreater(found, 0)

    def construction_outputs(self, count: int):
        """Perfect CZCPs drawn alternately from both constructions, q in {2, 4}."""
        pairs = []
        for k in range(count):
            q = int(self.rng.choice([2, 4]))
            if k % 2 == 0:
                seed = self.random_gcp(q, int(self.rng.integers(1, 4)))
                u1 = int(self.rng.integers(0, q))
                u2 = (u1 + int(self.rng.choice([0, q // 2]))) % q
                pairs.append(construction1(
                    seed.a, seed.b, u1=u1, u2=u2, u=int(self.rng.integers(0, q)),
                    variant=int(self.rng.integers(1, 5)),
                ))
            else:
                params = self.random_dj_params(q, int(self.rng.integers(1, 5)), pi1_mu=True)
                params = params.model_copy(update={"w_prime": int(self.rng.choice([0, q // 2]))})
                pairs.append(construction2(params))
        return pairs

    def test_transforms_preserve_width(self):
        pairs = [entry.pair for entry in PRINTED_PAIRS.values()] + self.construction_outputs(1000)
        for p in pairs:
            z = czcp_width(p).z
            c1, c2 = int(self.rng.integers(0, p.q)), int(self.rng.integers(0, p.q))
            for t in p2_transforms(p, c1, c2):
                self.assertEqual(czcp_width(t).z, z)

    def test_canonicalize_preserves_binary_width(self):
        for _ in range(1000):
            p = self.random_pair(int(self.rng.integers(1, 13)))
            self.assertEqual(czcp_width(canonicalize(p)).z, czcp_width(p).z)

    def test_canonicalize_preserves_constructed_width(self):
        for p in self.construction_outputs(1000):
            self.assertEqual(czcp_width(canonicalize(p)).z, p.n // 2)

    def test_canonicalize_can_widen_quaternary_non_czcp(self):
        # a_0 = j b_0: no zone before, Z = 1 after
        p = SequencePair.from_phases(4, [1, 1], [0, 2])
        self.assertEqual(czcp_width(p).z, 0)
        self.assertEqual(czcp_width(canonicalize(p)).z, 1)

    def test_transform_scale_as_complex_root(self):
        p = EXAMPLE3.pair
        for t in p2_transforms(p, 1j, -1j):
            self.assertEqual(czcp_width(t).z, 3)

    def test_cross_identities(self):
        for name, entry in PRINTED_PAIRS.items():
            with self.subTest(pair=name):
                self.assertEqual(p2_cross_identities(entry.pair), (True, True))

    def test_cross_identities_on_constructed_pairs(self):
        for p in self.construction_outputs(1000):
            c = canonicalize(p)
            self.assertTrue(has_canonical_pattern(c, c.n // 2))
            self.assertEqual(p2_cross_identities(c, c.n // 2), (True, True))

    def test_cross_identities_on_random_binary_czcps(self):
        found = 0
        for _ in range(1000):
            p = canonicalize(self.random_pair(2 * int(self.rng.integers(1, 6))))
            z = czcp_width(p).z
            if z:
                found += 1
                self.assertEqual(p2_cross_identities(p, z), (True, True))
        self.assertGreater(found, 0)

    def test_mate_is_orthogonal(self):
        for _ in range(100):
            p = self.random_pair(int(self.rng.integers(1, 10)), 4)
            self.assertTrue(mutually_orthogonal(p, mutually_orthogonal_mate(p)))

    def test_binary_pairs_satisfy_plus_minus_two(self):
        for n, entry in TABLE_PAIRS.items():
            with self.subTest(n=n):
                self.assertTrue(p3_check(entry.pair))

    def test_plus_minus_two_on_random_binary_czcps(self):
        pairs = [p for p in self.construction_outputs(1000) if p.q == 2]
        pairs += [self.random_pair(2 * int(self.rng.integers(1, 6))) for _ in range(1000)]
        checked = 0
        for p in pairs:
            if czcp_width(p).z:
                checked += 1
                self.assertTrue(p3_check(p), f"+-2 condition fails for {p}")
        self.assertGreater(checked, 300)

    def test_odd_binary_lengths_have_no_zone(self):
        for _ in range(300):
            n = int(self.rng.choice([3, 5, 7, 9, 11]))
            p = self.random_pair(n)
            self.assertEqual(czcp_width(p).z, 0)
            self.assertFalse(p3_check(p))

    def test_plus_minus_two_needs_binary(self):
        with self.assertRaises(AlphabetError):
            p3_check(EXAMPLE3.pair)


class ConstructionTest(CrosszoneTestCase):
    """Perfect CZCPs from Golay pairs."""

    def test_example5(self):
        p = construction1(EXAMPLE5_SEED.a, EXAMPLE5_SEED.b, u=1)
        self.assertEqual(p, EXAMPLE5.pair)

    def test_example6(self):
        self.assertEqual(construction2(EXAMPLE6_PARAMS), EXAMPLE6.pair)

    def test_construction1_random_seeds(self):
        for _ in range(500):
            q = int(self.rng.choice([2, 4]))
            mu = int(self.rng.integers(1, 4))
            seed = self.random_gcp(q, mu)
            u1 = int(self.rng.integers(0, q))
            u2 = (u1 + int(self.rng.choice([0, q // 2]))) % q
            u = int(self.rng.integers(0, q))
            for variant in (1, 2, 3, 4):
                p = construction1(seed.a, seed.b, u1=u1, u2=u2, u=u, variant=variant)
                cert = czcp_width(p)
                self.assertTrue(cert.perfect, f"variant {variant} of {seed} gave Z={cert.z}")

    def test_construction1_rejects_non_gcp(self):
        with self.assertRaises(ConstructionError):
            construction1(QarySequence.binary("++"), QarySequence.binary("++"))

    def test_construction1_rejects_bad_offsets(self):
        e, f = QarySequence(q=4, phases=[0, 0]), QarySequence(q=4, phases=[0, 2])
        with self.assertRaises(ConstructionError):
            construction1(e, f, u1=0, u2=1)
        with self.assertRaises(ConstructionError):
            construction1(e, f, variant=5)

    def test_construction1_rejects_odd_alphabet(self):
        with self.assertRaises(ConstructionError):
            construction1(QarySequence(q=3, phases=[0]), QarySequence(q=3, phases=[0]))

    def test_construction2_needs_path_ending(self):
        with self.assertRaises(ConstructionError):
            construction2(DJParams(q=2, mu=3, pi=(1, 2, 3), w=(0, 0, 0)))

    def test_construction2_sweep_binary(self):
        for mu in (2, 3, 4):
            params = list(davis_jedwab_parameters(2, mu, require_pi1_mu=True))
            self.assertEqual(len(params), construction2_count(2, mu))
            for p in params:
                self.assertTrue(czcp_width(construction2(p)).perfect)

    @pytest.mark.slow
    def test_construction2_sweep_quaternary(self):
        for mu in (2, 3, 4):
            params = list(davis_jedwab_parameters(4, mu, require_pi1_mu=True, w_prime_values=(0, 2)))
            self.assertEqual(len(params), 2 * construction2_count(4, mu))
            for p in params:
                self.assertTrue(czcp_width(construction2(p)).perfect)

    def test_count_formula(self):
        self.assertEqual(construction2_count(2, 3), 32)
        self.assertEqual(construction2_count(4, 4), 6 * 4**5)

    def test_doubling_keeps_gcp(self):
        p = TABLE_PAIRS[10].pair
        doubled = golay_doubling(p)
        self.assertEqual(doubled.n, 20)
        self.assertTrue(is_gcp(doubled))

    def test_perfect_lengths(self):
        self.assertEqual(perfect_binary_lengths(64), [2, 4, 8, 16, 20, 32, 40, 52, 64])

    def test_binary_perfect_pairs(self):
        for n in (2, 4, 8, 16, 20, 40, 52):
            with self.subTest(n=n):
                p = binary_perfect_czcp(n)
                self.assertEqual(p.q, 2)
                cert = czcp_width(p)
                self.assertEqual((cert.n, cert.z, cert.perfect), (n, n // 2, True))

    def test_unsupported_perfect_length(self):
        for n in (6, 7, 520):
            with self.assertRaises(ConstructionError):
                binary_perfect_czcp(n)


class CzcsTest(CrosszoneTestCase):
    """Cross Z-complementary sets."""

    def test_set_from_pair(self):
        s = czcs_from_czcp(TABLE_PAIRS[8].pair, 4)
        self.assertEqual((s.m, s.n, s.z), (4, 8, 4))
        self.assertTrue(czcs_check(s))
        self.assertEqual(czcs_width(list(s.members)), 4)

    def test_sets_from_every_table_pair(self):
        for n, entry in TABLE_PAIRS.items():
            for m in (2, 4, 6):
                with self.subTest(n=n, m=m):
                    self.assertTrue(czcs_check(czcs_from_czcp(entry.pair, m)))

    def test_cross_sum_closed_form(self):
        for _ in range(1000):
            n = int(self.rng.integers(2, 9))
            m = int(self.rng.choice([2, 4, 6]))
            p = self.random_pair(n, 4)
            members = [p.a if i % 2 == 0 else p.b for i in range(m)]
            tau = int(self.rng.integers(-(n - 1), n))
            total = acc(members[0], members[1], tau)
            for i in range(1, m):
                total = total + acc(members[i], members[(i + 1) % m], tau)
            pair_sum = acc(p.a, p.b, tau) + acc(p.b, p.a, tau)
            self.assertEqual((total.re, total.im), (m // 2 * pair_sum.re, m // 2 * pair_sum.im))

    def test_odd_member_count(self):
        with self.assertRaises(ConstructionError):
            czcs_from_czcp(TABLE_PAIRS[8].pair, 3)

    def test_set_needs_a_czcp(self):
        p = SequencePair.binary("+++", "+++")
        self.assertEqual(czcp_width(p).z, 0)
        with self.assertRaises(ConstructionError):
            czcs_from_czcp(p, 4)

    def test_copies_of_one_sequence_are_not_a_set(self):
        a = QarySequence.binary("+++")
        self.assertFalse(czcs_check(CzcSet(members=(a, a, a), z=1)))
        self.assertEqual(czcs_width([a, a, a]), 0)

    def test_length_mismatch(self):
        with self.assertRaises(LengthMismatchError):
            czcs_check(CzcSet(members=(QarySequence.binary("++"), QarySequence.binary("+++")), z=1))

    def test_width_above_half(self):
        members = czcs_from_czcp(TABLE_PAIRS[8].pair, 2).members
        self.assertFalse(czcs_check(CzcSet(members=members, z=5)))


if __name__ == "__main__":
    unittest.main()
