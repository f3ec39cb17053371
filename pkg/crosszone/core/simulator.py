"""Monte-Carlo least-squares channel estimation over frequency-selective channels.

Each trial draws from its own counter-based stream keyed by (seed, point,
trial), so serial and parallel runs give identical reports.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from crosszone.core.config import LS_CONDITION_LIMIT
from crosszone.core.errors import LengthMismatchError, RankDeficiencyError, TrainingMatrixError
from crosszone.core.models import (
    ChannelModel, ChannelRealization, MseRecord, MseReport, SimConfig, StackedConvolutionMatrix, TrainingMatrix
)
from crosszone.core.training import assemble_x

logger = logging.getLogger(__name__)

MatrixFactory = Callable[[np.random.Generator], TrainingMatrix]
MatrixSource = Union[TrainingMatrix, MatrixFactory]


def noise_variance(ebno_db: float) -> float:
    """sigma_w^2 for unit-energy training symbols."""
    return 10.0 ** (-ebno_db / 10.0)


def trial_generator(seed: int, *keys: int) -> np.random.Generator:
    """Independent Philox stream for one trial."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=tuple(keys))))


def _complex_gaussian(rng: np.random.Generator, size: int) -> np.ndarray:
    return (rng.standard_normal(size) + 1j * rng.standard_normal(size)) / np.sqrt(2.0)


def sample_channel(model: ChannelModel, rng: np.random.Generator) -> ChannelRealization:
    """i.i.d. CN(0, 1) taps stacked antenna by antenna."""
    return ChannelRealization(h=_complex_gaussian(rng, model.size), model=model)


def _as_vector(h: Union[ChannelRealization, np.ndarray]) -> np.ndarray:
    return h.h if isinstance(h, ChannelRealization) else np.asarray(h, dtype=complex)


def observe(
    x: StackedConvolutionMatrix,
    h: Union[ChannelRealization, np.ndarray],
    sigma_w: float,
    rng: np.random.Generator,
) -> np.ndarray:
    """y = X h + w with w ~ CN(0, sigma_w^2 I)."""
    h = _as_vector(h)
    if h.shape[0] != x.x.shape[1]:
        raise LengthMismatchError(f"channel has {h.shape[0]} taps but X has {x.x.shape[1]} columns")
    y = x.x @ h
    if sigma_w > 0:
        y = y + sigma_w * _complex_gaussian(rng, y.shape[0])
    return y


def _checked_gram(x: StackedConvolutionMatrix, condition_limit: float) -> np.ndarray:
    g = x.x.conj().T @ x.x
    cond = float(np.linalg.cond(g))
    if not np.isfinite(cond) or cond > condition_limit:
        raise RankDeficiencyError(cond, condition_limit)
    return g


def ls_estimate(x: StackedConvolutionMatrix, y: np.ndarray, condition_limit: float = LS_CONDITION_LIMIT) -> np.ndarray:
    """h_hat = (X^H X)^-1 X^H y.

    Raises:
        RankDeficiencyError: If cond(X^H X) exceeds the limit
    """
    g = _checked_gram(x, condition_limit)
    return np.linalg.solve(g, x.x.conj().T @ y)


class LsEstimator:
    """Least-squares estimator with the projection (X^H X)^-1 X^H precomputed."""

    def __init__(self, x: StackedConvolutionMatrix, condition_limit: float = LS_CONDITION_LIMIT):
        g = _checked_gram(x, condition_limit)
        self.x = x
        self.projection = np.linalg.solve(g, x.x.conj().T)
        self.trace_inverse = float(np.real(np.trace(np.linalg.inv(g))))

    def estimate(self, y: np.ndarray) -> np.ndarray:
        return self.projection @ y


def theoretical_mse(x: StackedConvolutionMatrix, noise_var: float) -> float:
    """sigma_w^2 / (N_t(lambda+1)) * Tr((X^H X)^-1)."""
    g = _checked_gram(x, LS_CONDITION_LIMIT)
    return noise_var / g.shape[0] * float(np.real(np.trace(np.linalg.inv(g))))


def transmit_with_cyclic_prefix(
    omega: TrainingMatrix, h: Union[ChannelRealization, np.ndarray], lam: int
) -> np.ndarray:
    """Noiseless receive vector through explicit CP insertion and linear convolution."""
    h = _as_vector(h)
    taps_per_antenna = lam + 1
    if h.shape[0] != omega.n_t * taps_per_antenna:
        raise LengthMismatchError(f"channel has {h.shape[0]} taps, expected {omega.n_t * taps_per_antenna}")
    length = omega.length
    received = np.zeros(length + 2 * lam, dtype=complex)
    for n, row in enumerate(omega.entries):
        burst = np.concatenate([row[length - lam:], row]) if lam else row
        taps = h[n * taps_per_antenna:(n + 1) * taps_per_antenna]
        received[: burst.size + lam] += np.convolve(burst, taps)
    return received[lam: lam + length]


def _run_chunk(job: Tuple) -> Tuple[List[float], List[float], int, float]:
    """Squared errors and trace-formula values for a contiguous range of trials."""
    source, lam, noise_var, n_r, seed, keys, start, stop, limit = job
    errors: List[float] = []
    theory: List[float] = []
    failures = 0
    energy = float("nan")
    estimator: Optional[LsEstimator] = None
    if isinstance(source, TrainingMatrix):
        estimator = LsEstimator(assemble_x(source, lam), limit)
        energy = source.energy
    sigma_w = math.sqrt(noise_var)
    for trial in range(start, stop):
        rng = trial_generator(seed, *keys, trial)
        trial_estimator = estimator
        if trial_estimator is None:
            omega = source(rng)
            energy = omega.energy
            try:
                trial_estimator = LsEstimator(assemble_x(omega, lam), limit)
            except RankDeficiencyError:
                failures += 1
                continue
        model = ChannelModel(n_t=trial_estimator.x.n_t, lam=lam)
        per_antenna = []
        for _ in range(n_r):
            h = sample_channel(model, rng).h
            y = observe(trial_estimator.x, h, sigma_w, rng)
            h_hat = trial_estimator.estimate(y)
            per_antenna.append(float(np.sum(np.abs(h_hat - h) ** 2)) / model.size)
        errors.append(math.fsum(per_antenna) / n_r)
        theory.append(noise_var / model.size * trial_estimator.trace_inverse)
    return errors, theory, failures, energy


def _monte_carlo(
    source: MatrixSource,
    lam: int,
    noise_var: float,
    config: SimConfig,
    keys: Tuple[int, ...],
    condition_limit: float,
) -> Tuple[List[float], List[float], int, float]:
    trials, workers = config.trials, config.workers
    chunk = max(1, math.ceil(trials / workers))
    jobs = [
        (source, lam, noise_var, config.n_r, config.rng_seed, keys, start, min(start + chunk, trials), condition_limit)
        for start in range(0, trials, chunk)
    ]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            parts = list(executor.map(_run_chunk, jobs))
    else:
        parts = [_run_chunk(job) for job in jobs]
    errors = [e for part in parts for e in part[0]]
    theory = [t for part in parts for t in part[1]]
    failures = sum(part[2] for part in parts)
    energies = [part[3] for part in parts if not math.isnan(part[3])]
    return errors, theory, failures, energies[0] if energies else float("nan")


def _record(
    source: MatrixSource,
    lam: int,
    ebno_db: float,
    config: SimConfig,
    keys: Tuple[int, ...],
    label: str,
    condition_limit: float,
) -> MseRecord:
    noise_var = noise_variance(ebno_db)
    errors, theory, failures, energy = _monte_carlo(source, lam, noise_var, config, keys, condition_limit)
    if not errors:
        raise RankDeficiencyError(float("inf"), condition_limit)
    mse = math.fsum(errors) / len(errors)
    mse_min = noise_var / energy
    record = MseRecord(
        ebno_db=ebno_db, paths=lam + 1, matrix=label,
        mse_empirical=mse, mse_min=mse_min, mse_theory=math.fsum(theory) / len(theory),
        gap_db=10.0 * math.log10(mse / mse_min), trials=len(errors), failures=failures,
    )
    logger.info(f"{label} paths={lam + 1} EbNo={ebno_db:g} dB: gap {record.gap_db:.3f} dB ({failures} failures)")
    return record


def _label_of(source: MatrixSource, label: Optional[str]) -> str:
    if label:
        return label
    return source.label if isinstance(source, TrainingMatrix) else "random"


def run_sweep(
    source: MatrixSource,
    config: SimConfig,
    lam: Optional[int] = None,
    label: Optional[str] = None,
    condition_limit: float = LS_CONDITION_LIMIT,
    stream: int = 0,
) -> MseReport:
    """Normalized LS MSE at every EbNo point of the config.

    Args:
        source: A fixed training matrix, or a factory drawing a fresh one per trial
        config: Grid, trial count, seed, receive antennas and workers
        lam: Maximum channel delay; defaults to config.paths - 1
        label: Matrix name used in the records
        condition_limit: Largest accepted cond(X^H X)
        stream: Extra key separating the RNG streams of different sweeps

    Returns:
        MseReport with one record per EbNo point
    """
    lam = config.paths - 1 if lam is None else lam
    if isinstance(source, TrainingMatrix) and lam >= source.length:
        raise TrainingMatrixError(f"lambda={lam} needs a training matrix longer than {source.length}")
    name = _label_of(source, label)
    records = [
        _record(source, lam, ebno, config, (stream, point), name, condition_limit)
        for point, ebno in enumerate(config.ebno_grid)
    ]
    return MseReport(config=config, records=records)


def multipath_sweep(
    matrices: Dict[str, MatrixSource],
    config: SimConfig,
    ebno_db: float = 16.0,
    path_counts: Sequence[int] = tuple(range(1, 13)),
    energy: Optional[float] = 32.0,
    condition_limit: float = LS_CONDITION_LIMIT,
) -> MseReport:
    """MSE of each matrix at one EbNo over a range of path counts.

    Raises:
        TrainingMatrixError: If a fixed matrix is not normalized to the given energy
    """
    if energy is not None:
        for name, source in matrices.items():
            if isinstance(source, TrainingMatrix) and not np.allclose(source.row_energies(), energy):
                raise TrainingMatrixError(f"matrix {name} has energy {source.energy:.3f}, expected {energy}")
    records = []
    for m_index, (name, source) in enumerate(matrices.items()):
        for p_index, paths in enumerate(path_counts):
            try:
                records.append(_record(source, paths - 1, ebno_db, config, (m_index, p_index), name, condition_limit))
            except RankDeficiencyError as e:
                logger.warning(f"{name} with {paths} paths skipped: {e}")
    return MseReport(config=config, records=records)


def report_to_csv(report: MseReport) -> str:
    """Header ebno_db,paths,matrix,mse_empirical,mse_min,gap_db,trials."""
    lines = ["ebno_db,paths,matrix,mse_empirical,mse_min,gap_db,trials"]
    for r in report.records:
        lines.append(
            f"{r.ebno_db:g},{r.paths},{r.matrix},{r.mse_empirical:.10g},{r.mse_min:.10g},{r.gap_db:.6f},{r.trials}"
        )
    return "\n".join(lines) + "\n"
