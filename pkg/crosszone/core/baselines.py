"""Baseline seed sequences and the training matrices built from them."""

import logging
from typing import List, Optional, Sequence

import numpy as np

from crosszone.core.config import DEFAULT_SEED, TARGET_ENERGY
from crosszone.core.known_pairs import BARKER_13, GCP16, M_SEQUENCE_31
from crosszone.core.models import BaselineKind, CharacteristicMatrix, QarySequence, SeedVariant, TrainingMatrix, TrainingParams
from crosszone.core.training import normalize_energy, psi_to_omega, single_block_matrix, training_matrix_from_pair

logger = logging.getLogger(__name__)

# LFSR taps of the preferred pair x^5 + x^2 + 1 and x^5 + x^4 + x^3 + x^2 + 1
GOLD_TAPS = ([2], [2, 3, 4])
ZC_ROOTS = (1, 3, 5, 7)


def lfsr(taps: Sequence[int], init: Sequence[int]) -> np.ndarray:
    """Maximal-length sequence from a Fibonacci shift register.

    Args:
        taps: Exponents of the non-zero terms other than 1 and x^n
        init: Initial register contents (0/1)

    Returns:
        Bit array of length 2^n - 1
    """
    nbits = len(init)
    seq = np.zeros(2**nbits - 1, dtype=bool)
    seq[:nbits] = np.asarray(init, dtype=bool)
    for i in range(nbits, len(seq)):
        seq[i] = seq[i - nbits]
        for tap in taps:
            seq[i] ^= seq[i - nbits + tap]
    return seq


def _bits_to_sequence(bits: np.ndarray) -> QarySequence:
    return QarySequence(q=2, phases=bits.astype(np.int64))


def gold_sequences(count: int = 4, offset: int = 0) -> List[QarySequence]:
    """Gold sequences u XOR T^(-k) v for k = offset .. offset+count-1."""
    if offset < 0 or offset + count > 31:
        raise ValueError(f"Gold offsets must lie in 0..30, got {offset}..{offset + count - 1}")
    init = np.ones(5, dtype=bool)
    u = lfsr(GOLD_TAPS[0], init)
    v = lfsr(GOLD_TAPS[1], init)
    return [_bits_to_sequence(np.logical_xor(u, np.roll(v, -k))) for k in range(offset, offset + count)]


def m_sequence31() -> QarySequence:
    return M_SEQUENCE_31


def barker13() -> QarySequence:
    return BARKER_13


def zadoff_chu(length: int = 32, root: int = 1) -> QarySequence:
    """Even-length Zadoff-Chu sequence exp(-j*pi*u*n^2/N) over A_(2N)."""
    if length % 2:
        raise ValueError(f"only even Zadoff-Chu lengths are supported, got {length}")
    if np.gcd(root, length) != 1:
        raise ValueError(f"root {root} is not coprime with {length}")
    n = np.arange(length, dtype=np.int64)
    return QarySequence(q=2 * length, phases=(-root * n * n) % (2 * length))


def random_regular_matrix(n_t: int, q_per_row: int, rng: np.random.Generator) -> TrainingMatrix:
    """Random +-1 matrix: each row q_per_row non-zeros, each column exactly one."""
    owners = rng.permutation(np.repeat(np.arange(n_t), q_per_row))
    values = rng.choice(np.array([1.0, -1.0]), size=owners.size)
    entries = np.zeros((n_t, owners.size), dtype=complex)
    entries[owners, np.arange(owners.size)] = values
    return TrainingMatrix(entries=entries, label="random")


def random_block_sequences(count: int, length: int, rng: np.random.Generator) -> List[QarySequence]:
    return [QarySequence(q=2, phases=rng.integers(0, 2, size=length)) for _ in range(count)]


def barker_matrix(n_t: int = 4) -> TrainingMatrix:
    """Every row carries the Barker sequence in both sub-blocks."""
    row = (BARKER_13, BARKER_13)
    psi = CharacteristicMatrix(blocks=(row,) * n_t)
    return psi_to_omega(psi, TrainingParams(n_t=n_t, j=2, theta=13), label="barker13")


def baseline_matrix(
    kind: BaselineKind,
    n_t: int = 4,
    energy: Optional[float] = TARGET_ENERGY,
    rng: Optional[np.random.Generator] = None,
    q_per_row: int = 32,
) -> TrainingMatrix:
    """Build a baseline training matrix.

    Args:
        kind: Which baseline
        n_t: Transmit antennas
        energy: Target row energy; None keeps the natural energy
        rng: Generator for the random baselines
        q_per_row: Non-zeros per row of the random regular baseline

    Returns:
        The baseline training matrix

    Raises:
        ValueError: For an unknown kind
    """
    kind = BaselineKind(kind)
    if rng is None:
        rng = np.random.default_rng(DEFAULT_SEED)
    if kind == BaselineKind.GCP16:
        omega = training_matrix_from_pair(GCP16, SeedVariant.PSI1, n_t=n_t, j=2, label="gcp16")
    elif kind == BaselineKind.MSEQ31:
        omega = single_block_matrix([M_SEQUENCE_31] * n_t, label="mseq31")
    elif kind == BaselineKind.BARKER13:
        omega = barker_matrix(n_t)
    elif kind == BaselineKind.GOLD31:
        omega = single_block_matrix(gold_sequences(n_t), label="gold31")
    elif kind == BaselineKind.ZC32:
        roots = [ZC_ROOTS[n % len(ZC_ROOTS)] for n in range(n_t)]
        omega = single_block_matrix([zadoff_chu(32, u) for u in roots], label="zc32")
    elif kind == BaselineKind.RANDOM:
        omega = random_regular_matrix(n_t, q_per_row, rng)
    elif kind == BaselineKind.RANDOM_BLOCK:
        omega = single_block_matrix(random_block_sequences(n_t, 32, rng), label="random_block")
    else:
        raise ValueError(f"Unknown baseline kind: {kind}")
    if energy is not None:
        omega = normalize_energy(omega, energy)
    logger.debug(f"Built baseline {omega.label} with E={omega.energy:.3f}")
    return omega
