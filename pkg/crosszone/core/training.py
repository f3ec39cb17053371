"""Sparse training matrices for spatial-modulation MIMO channel estimation.

A characteristic matrix holds the non-zero blocks a_n^j (N_t rows, J
sub-blocks, each of length theta). The training matrix places block (n, j) at
columns [j*N_t*theta + n*theta, j*N_t*theta + (n+1)*theta) of row n, so only
one antenna transmits in any time slot.
"""

import logging
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from crosszone.core.czcp import canonicalize
from crosszone.core.errors import TrainingMatrixError
from crosszone.core.models import (
    CharacteristicMatrix, CorrelationValue, GramViolation, OptimalityReport, QarySequence,
    SeedCondition, SeedVariant, SequencePair, StackedConvolutionMatrix, TrainingMatrix, TrainingParams
)
from crosszone.core.sequences import acc, from_complex, negate, reverse_conjugate, to_complex

logger = logging.getLogger(__name__)


def seed_psi(p: SequencePair, variant: SeedVariant) -> CharacteristicMatrix:
    """The 2 x 2 seed: [[a, b], [a, b]] or [[a, b], [rev-conj(b), -rev-conj(a)]]."""
    variant = SeedVariant(variant)
    if variant == SeedVariant.PSI1:
        second = (p.a, p.b)
    else:
        second = (reverse_conjugate(p.b), negate(reverse_conjugate(p.a)))
    return CharacteristicMatrix(blocks=((p.a, p.b), second))


def expand_psi(seed: CharacteristicMatrix, n_t: int) -> CharacteristicMatrix:
    """Row replication: the first N_t/2 rows copy seed row 1, the rest copy row 2."""
    if seed.n_t != 2:
        raise TrainingMatrixError(f"seed must have two rows, got {seed.n_t}")
    if n_t < 2 or n_t % 2:
        raise TrainingMatrixError(f"N_t must be even and at least 2, got {n_t}")
    half = n_t // 2
    return CharacteristicMatrix(blocks=(seed.blocks[0],) * half + (seed.blocks[1],) * half)


def _check_params(psi: CharacteristicMatrix, params: TrainingParams) -> None:
    if (psi.n_t, psi.j, psi.theta) != (params.n_t, params.j, params.theta):
        raise TrainingMatrixError(
            f"characteristic matrix is ({psi.n_t}, {psi.j}, {psi.theta}) "
            f"but params give ({params.n_t}, {params.j}, {params.theta})"
        )


def psi_to_omega(psi: CharacteristicMatrix, params: Optional[TrainingParams] = None, label: str = "custom") -> TrainingMatrix:
    """Lay the blocks of psi out as an N_t x L sparse training matrix.

    Raises:
        TrainingMatrixError: If params disagree with the shape of psi
    """
    if params is None:
        params = TrainingParams(n_t=psi.n_t, j=psi.j, theta=psi.theta)
    _check_params(psi, params)
    n_t, theta = params.n_t, params.theta
    entries = np.zeros((n_t, params.length), dtype=complex)
    for n, row in enumerate(psi.blocks):
        for j, block in enumerate(row):
            start = j * n_t * theta + n * theta
            entries[n, start : start + theta] = to_complex(block)
    return TrainingMatrix(entries=entries, label=label, params=params)


def omega_to_psi(omega: TrainingMatrix, q: int) -> CharacteristicMatrix:
    """Inverse of psi_to_omega for unit-modulus entries over A_q."""
    params = omega.params
    if params is None:
        raise TrainingMatrixError("training matrix carries no (N_t, J, theta) parameters")
    n_t, theta = params.n_t, params.theta
    blocks = []
    for n in range(n_t):
        row = []
        for j in range(params.j):
            start = j * n_t * theta + n * theta
            row.append(from_complex(omega.entries[n, start : start + theta], q))
        blocks.append(tuple(row))
    return CharacteristicMatrix(blocks=tuple(blocks))


def expand_omega(omega: TrainingMatrix, j: int) -> TrainingMatrix:
    """Horizontal replication of an (N_t, 2, theta) matrix into J sub-blocks.

    Raises:
        TrainingMatrixError: If J is odd or the input is not a two-sub-block matrix
    """
    if j < 2 or j % 2:
        raise TrainingMatrixError(f"J must be even and at least 2, got {j}")
    params = omega.params
    if params is None or params.j != 2:
        raise TrainingMatrixError("expansion needs an (N_t, 2, theta) training matrix")
    expanded = TrainingParams(n_t=params.n_t, j=j, theta=params.theta, lam=params.lam)
    return TrainingMatrix(entries=np.tile(omega.entries, (1, j // 2)), label=omega.label, params=expanded)


def training_matrix_from_pair(
    p: SequencePair,
    variant: SeedVariant = SeedVariant.PSI1,
    n_t: int = 4,
    j: int = 2,
    label: Optional[str] = None,
) -> TrainingMatrix:
    """Seed, replicate and lay out an (N_t, J, theta) matrix from a CZCP.

    The pair is canonicalized first; the cross identities behind the second
    seed need a_0 = b_0.
    """
    canonical = canonicalize(p)
    psi = expand_psi(seed_psi(canonical, variant), n_t)
    omega = psi_to_omega(psi, label=label or f"{SeedVariant(variant).value}-{p.n}")
    if j != 2:
        omega = expand_omega(omega, j)
    logger.debug(f"Built ({n_t}, {j}, {p.n}) training matrix {omega.label}")
    return omega


def single_block_matrix(sequences: Sequence[QarySequence], label: str = "single-block") -> TrainingMatrix:
    """Antenna n sends sequence n in the n-th of N_t consecutive blocks."""
    n_t = len(sequences)
    length = len(sequences[0])
    if any(len(s) != length for s in sequences):
        raise TrainingMatrixError("single-block sequences must share a length")
    entries = np.zeros((n_t, n_t * length), dtype=complex)
    for n, seq in enumerate(sequences):
        entries[n, n * length : (n + 1) * length] = to_complex(seq)
    return TrainingMatrix(entries=entries, label=label, params=TrainingParams(n_t=n_t, j=1, theta=length))


def normalize_energy(omega: TrainingMatrix, energy: float) -> TrainingMatrix:
    """Scale every entry uniformly so that each row has the given energy.

    Raises:
        TrainingMatrixError: If the rows do not already share one energy
    """
    energies = omega.row_energies()
    if not np.allclose(energies, energies[0]):
        raise TrainingMatrixError(f"rows have unequal energies {energies.tolist()}")
    factor = np.sqrt(energy / energies[0])
    return TrainingMatrix(entries=omega.entries * factor, label=omega.label, params=omega.params)


def assemble_x(omega: TrainingMatrix, lam: int) -> StackedConvolutionMatrix:
    """X = [X_1 ... X_Nt]; column c of X_n is x_n cyclically shifted by c."""
    if lam < 0:
        raise TrainingMatrixError(f"lambda must be non-negative, got {lam}")
    columns = [np.roll(row, c) for row in omega.entries for c in range(lam + 1)]
    return StackedConvolutionMatrix(x=np.stack(columns, axis=1), n_t=omega.n_t, lam=lam)


def gram(x: StackedConvolutionMatrix) -> np.ndarray:
    return x.x.conj().T @ x.x


def periodic_cross(x_i: np.ndarray, x_j: np.ndarray, tau: int) -> complex:
    """phi(x_i, x_j)(tau) = sum_m x_i[m] conj(x_j[m + tau mod L])."""
    return complex(np.sum(x_i * np.conj(np.roll(x_j, -tau))))


def _tolerance(omega: TrainingMatrix) -> float:
    if omega.is_gaussian_integer:
        return 0.0
    return 1e-9 * omega.length * float(np.max(np.abs(omega.entries)) ** 2)


def verify_optimal(omega: TrainingMatrix, lam: int) -> OptimalityReport:
    """Check X^H X = E*I, both directly and through the periodic correlations.

    Args:
        omega: Training matrix
        lam: Maximum channel delay

    Returns:
        OptimalityReport; violations list the (i, j, tau) correlations that
        should vanish (or equal E at i = j, tau = 0) but do not
    """
    x = assemble_x(omega, lam)
    g = gram(x)
    energy = omega.energy
    tol = _tolerance(omega)
    gram_ok = bool(np.all(np.abs(g - energy * np.eye(g.shape[0])) <= tol))

    rows = omega.entries
    violations: List[GramViolation] = []
    for i in range(omega.n_t):
        for j in range(omega.n_t):
            for tau in range(lam + 1):
                value = periodic_cross(rows[i], rows[j], tau)
                target = energy if (i == j and tau == 0) else 0.0
                if abs(value - target) > tol:
                    violations.append(GramViolation(i=i, j=j, tau=tau, magnitude=abs(value - target)))
    pcc_ok = not violations
    if gram_ok != pcc_ok:
        logger.error(f"Gram and correlation checks disagree for {omega.label} at lambda={lam}")
    return OptimalityReport(
        optimal=gram_ok and pcc_ok, gram_optimal=gram_ok, pcc_optimal=pcc_ok,
        energy=energy, gram=g, violations=violations,
    )


def _sum_over_blocks(pairs, tau: int) -> CorrelationValue:
    total = CorrelationValue.zero(exact=all(x.is_exact for x, _ in pairs))
    for x, y in pairs:
        total = total + acc(x, y, tau)
    return total


def seed_conditions(seed: CharacteristicMatrix, lam: int) -> List[SeedCondition]:
    """Per-condition report for a 2 x J seed at tau = 1..lambda.

    front_zacz_row*   sum_j rho(a_n^j)(tau)
    tail_zacz_row*    sum_j rho(a_n^j)(theta - tau)
    adjacent_cross    sum_j rho(a_2^j, a_1^j)(theta - tau)
    wrap_cross        sum_j rho(a_1^(j+1), a_2^j)(theta - tau)
    """
    if seed.n_t != 2:
        raise TrainingMatrixError(f"seed must have two rows, got {seed.n_t}")
    theta, j_count = seed.theta, seed.j
    if lam >= theta:
        raise TrainingMatrixError(f"lambda={lam} must be below the block length {theta}")
    row1, row2 = seed.blocks

    definitions = {
        "front_zacz_row1": (lambda t: _sum_over_blocks([(b, b) for b in row1], t)),
        "front_zacz_row2": (lambda t: _sum_over_blocks([(b, b) for b in row2], t)),
        "tail_zacz_row1": (lambda t: _sum_over_blocks([(b, b) for b in row1], theta - t)),
        "tail_zacz_row2": (lambda t: _sum_over_blocks([(b, b) for b in row2], theta - t)),
        "adjacent_cross": (lambda t: _sum_over_blocks(list(zip(row2, row1)), theta - t)),
        "wrap_cross": (
            lambda t: _sum_over_blocks([(row1[(j + 1) % j_count], row2[j]) for j in range(j_count)], theta - t)
        ),
    }
    report = []
    for name, condition in definitions.items():
        failing = [t for t in range(1, lam + 1) if not condition(t).is_zero(theta)]
        report.append(SeedCondition(name=name, holds=not failing, failing_shifts=failing))
    return report


def matrix_metadata(omega: TrainingMatrix, lam: int, seed_kind: str) -> Dict[str, Any]:
    params = omega.params
    return {
        "n_t": omega.n_t,
        "j": params.j if params else None,
        "theta": params.theta if params else None,
        "lambda": lam,
        "seed_kind": seed_kind,
        "E": omega.energy,
        "label": omega.label,
    }
