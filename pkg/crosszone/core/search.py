"""Exhaustive search for binary CZCPs with maximal zone width.

Every (N, Z)-CZCP is equivalent, through width-preserving scaling, to a pair

    a = h || m_a || t
    b = h || m_b || -t

with h_0 = +1 and |h| = |t| = Z. For such pairs the tail-zone conditions hold
identically and the head-tail products cancel, so only the front AAC sums
remain. Those split into a head part F(h; m) and a tail part G(t; m) for each
middle m = (m_a, m_b), and solutions are the (h, t) with F(h) = -G(t). The
middle assignments are enumerated; heads and tails are matched per middle.
"""

import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Iterable, List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel

from crosszone.core.config import MAX_SEARCH_CANDIDATES, NAIVE_MAX_N, SEARCH_MAX_N, SPLIT_DEPTH
from crosszone.core.czcp import czcp_width, p3_check
from crosszone.core.errors import SearchError
from crosszone.core.known_pairs import load_expected_table, load_table_pairs
from crosszone.core.models import (
    CorrelationKind, QarySequence, SearchResult, SearchTask, SequencePair, TableReport, TableRow
)
from crosszone.core.sequences import pair_profile

logger = logging.getLogger(__name__)

# (head index, m_a bits, tail index, m_b bits); tuple order is lexicographic order of a || b
WitnessKey = Tuple[int, int, int, int]


class _SubtaskOutcome(BaseModel):
    solutions: int = 0
    explored: int = 0
    best: Optional[WitnessKey] = None


def _sign_rows(bits: int) -> np.ndarray:
    """All +-1 vectors of a length in lexicographic order, '-' before '+'."""
    if bits == 0:
        return np.ones((1, 0), dtype=np.int64)
    idx = np.arange(2**bits, dtype=np.int64)
    shifts = np.arange(bits - 1, -1, -1)
    return np.where((idx[:, None] >> shifts) & 1, 1, -1).astype(np.int64)


def _bits_to_signs(value: int, length: int) -> np.ndarray:
    shifts = np.arange(length - 1, -1, -1)
    return np.where((value >> shifts) & 1, 1, -1).astype(np.int64)


def _aac_block(rows: np.ndarray, shifts: int) -> np.ndarray:
    """Row-wise aperiodic autocorrelation for tau = 1..shifts."""
    k, n = rows.shape
    out = np.zeros((k, shifts), dtype=np.int64)
    for tau in range(1, min(shifts, n - 1) + 1):
        out[:, tau - 1] = np.sum(rows[:, : n - tau] * rows[:, tau:], axis=1)
    return out


def _match_middle(
    heads: np.ndarray, tails: np.ndarray, m_a: np.ndarray, m_b: np.ndarray, z: int
) -> Tuple[int, Optional[Tuple[int, int]]]:
    """Count (h, t) solutions for one middle and return the least one."""
    h_count, t_count = heads.shape[0], tails.shape[0]
    u_a = np.hstack([heads, np.tile(m_a, (h_count, 1))])
    u_b = np.hstack([heads, np.tile(m_b, (h_count, 1))])
    head_part = _aac_block(u_a, z) + _aac_block(u_b, z)

    v_a = np.hstack([np.tile(m_a, (t_count, 1)), tails])
    v_b = np.hstack([np.tile(m_b, (t_count, 1)), -tails])
    middle_only = _aac_block(m_a[None, :], z) + _aac_block(m_b[None, :], z)
    tail_part = _aac_block(v_a, z) + _aac_block(v_b, z) - middle_only

    stacked = np.vstack([head_part, -tail_part])
    _, inverse = np.unique(stacked, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    head_labels, tail_labels = inverse[:h_count], inverse[h_count:]
    labels = int(inverse.max()) + 1
    head_hist = np.bincount(head_labels, minlength=labels)
    tail_hist = np.bincount(tail_labels, minlength=labels)
    solutions = int(np.sum(head_hist * tail_hist))
    if solutions == 0:
        return 0, None
    h_idx = int(np.flatnonzero(tail_hist[head_labels] > 0)[0])
    t_idx = int(np.flatnonzero(tail_labels == head_labels[h_idx])[0])
    return solutions, (h_idx, t_idx)


def _run_subtask(descriptor: Tuple[int, int, int, int]) -> _SubtaskOutcome:
    """Enumerate every middle whose leading prefix_bits equal prefix."""
    n, z, prefix, prefix_bits = descriptor
    m = n - 2 * z
    free = 2 * m - prefix_bits
    tails = _sign_rows(z)
    heads = tails[2 ** (z - 1):]
    mask = (1 << m) - 1
    outcome = _SubtaskOutcome()
    for suffix in range(2**free):
        middle = (prefix << free) | suffix
        a_bits, b_bits = middle >> m, middle & mask
        found, least = _match_middle(heads, tails, _bits_to_signs(a_bits, m), _bits_to_signs(b_bits, m), z)
        outcome.explored += heads.shape[0] + tails.shape[0]
        if found:
            outcome.solutions += found
            key = (least[0], a_bits, least[1], b_bits)
            if outcome.best is None or key < outcome.best:
                outcome.best = key
    logger.debug(f"subtask n={n} z={z} prefix={prefix}/{prefix_bits}: {outcome.solutions} solutions")
    return outcome


def _witness_from_key(n: int, z: int, key: WitnessKey) -> SequencePair:
    m = n - 2 * z
    tails = _sign_rows(z)
    head = tails[2 ** (z - 1):][key[0]]
    tail = tails[key[2]]
    a = np.concatenate([head, _bits_to_signs(key[1], m), tail])
    b = np.concatenate([head, _bits_to_signs(key[3], m), -tail])
    return SequencePair(a=QarySequence.from_signs(a), b=QarySequence.from_signs(b))


def _search_width(n: int, z: int, workers: int, split_depth: int) -> _SubtaskOutcome:
    """All canonical (n, z) solutions, merged across subtasks."""
    m = n - 2 * z
    candidates = 4**m * (2 ** (z - 1) + 2**z)
    if candidates > MAX_SEARCH_CANDIDATES:
        raise SearchError(
            f"search space for N={n}, Z={z} has {candidates} candidates, above the limit {MAX_SEARCH_CANDIDATES}"
        )
    prefix_bits = min(split_depth, 2 * m)
    descriptors = [(n, z, prefix, prefix_bits) for prefix in range(2**prefix_bits)]
    if workers > 1 and len(descriptors) > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            outcomes = list(executor.map(_run_subtask, descriptors))
    else:
        outcomes = [_run_subtask(d) for d in descriptors]

    merged = _SubtaskOutcome()
    for outcome in outcomes:
        merged.solutions += outcome.solutions
        merged.explored += outcome.explored
        if outcome.best is not None and (merged.best is None or outcome.best < merged.best):
            merged.best = outcome.best
    return merged


def _validate_task(task: SearchTask, max_n: int) -> None:
    if task.n % 2:
        raise SearchError(
            f"N={task.n} is odd; binary CZCPs only exist for even lengths "
            "(the +-2 condition on a_i + a_(N-1-i) + b_i + b_(N-1-i) forces even N)"
        )
    if task.n > max_n:
        raise SearchError(f"N={task.n} exceeds the configured maximum {max_n}")
    if task.target_z is not None and not 1 <= task.target_z <= task.n // 2:
        raise SearchError(f"target Z={task.target_z} outside 1..{task.n // 2}")


def search_max_z(
    task: SearchTask,
    max_n: int = SEARCH_MAX_N,
    split_depth: int = SPLIT_DEPTH,
) -> SearchResult:
    """Find the largest Z for which a binary (N, Z)-CZCP exists.

    Args:
        task: Length, optional starting width, reduction flag and worker count
        max_n: Largest accepted N
        split_depth: Number of middle bits fixed per subtask

    Returns:
        SearchResult with the lexicographically least canonical witness

    Raises:
        SearchError: For odd N, N above max_n, or a search space above the limit
    """
    _validate_task(task, max_n)
    if not task.symmetry_reduction:
        return naive_search(task.n, max_n=min(max_n, NAIVE_MAX_N), start_z=task.target_z)

    n = task.n
    start = task.target_z or n // 2
    started = time.perf_counter()
    explored = 0
    logger.info(f"Searching N={n} from Z={start} with {task.worker_count} worker(s)")
    for z in range(start, 0, -1):
        outcome = _search_width(n, z, task.worker_count, split_depth)
        explored += outcome.explored
        logger.info(f"N={n} Z={z}: {outcome.solutions} canonical solutions")
        if outcome.best is None:
            continue
        witness = _witness_from_key(n, z, outcome.best)
        width = czcp_width(witness).z
        if width < z or not p3_check(witness):
            raise SearchError(f"witness for N={n}, Z={z} failed the independent check (width {width})")
        return SearchResult(
            n=n, z_max=z, witnesses=[witness], solutions=outcome.solutions,
            explored=explored, elapsed=time.perf_counter() - started,
        )
    return SearchResult(n=n, z_max=0, explored=explored, elapsed=time.perf_counter() - started)


def naive_search(n: int, max_n: int = NAIVE_MAX_N, start_z: Optional[int] = None) -> SearchResult:
    """Unpruned enumeration over all 2^(2N) binary pairs.

    The witness is the lexicographically least pair of maximal width.
    """
    if n > max_n:
        raise SearchError(f"naive enumeration is limited to N <= {max_n}, got {n}")
    started = time.perf_counter()
    rows = _sign_rows(n)
    count = rows.shape[0]
    auto = _aac_block(rows, n - 1).astype(np.int16)
    small = rows.astype(np.int16)
    front = np.ones((count, count), dtype=bool)
    tail = np.ones((count, count), dtype=bool)
    width = np.zeros((count, count), dtype=np.int8)
    limit = n // 2 if start_z is None else min(start_z, n // 2)
    for z in range(1, limit + 1):
        front &= (auto[:, z - 1][:, None] + auto[:, z - 1][None, :]) == 0
        tau = n - z
        cross = small[:, : n - tau] @ small[:, tau:].T
        tail &= (auto[:, tau - 1][:, None] + auto[:, tau - 1][None, :]) == 0
        tail &= (cross + cross.T) == 0
        width[front & tail] = z
    z_max = int(width.max())
    witnesses = []
    if z_max:
        i, j = np.argwhere(width == z_max)[0]
        witnesses.append(SequencePair(a=QarySequence.from_signs(rows[i]), b=QarySequence.from_signs(rows[j])))
    logger.info(f"Naive enumeration of N={n}: z_max={z_max}")
    return SearchResult(
        n=n, z_max=z_max, witnesses=witnesses, solutions=int(np.count_nonzero(width == z_max)) if z_max else 0,
        explored=count * count, elapsed=time.perf_counter() - started, symmetry_reduction=False,
    )


def naive_max_z(n: int) -> int:
    return naive_search(n).z_max


def search_table(n_values: Iterable[int], workers: int = 1) -> List[SearchResult]:
    """search_max_z for each requested length."""
    return [search_max_z(SearchTask(n=n, worker_count=workers)) for n in n_values]


def verify_table(
    path: Optional[Union[str, os.PathLike]] = None,
    workers: int = 1,
    run_search: bool = True,
) -> TableReport:
    """Re-derive z_max for every tabulated N and re-check the printed pairs.

    Args:
        path: Expected-values CSV (n,z_max); the packaged table when omitted
        workers: Worker count passed to the search
        run_search: Re-run the search (otherwise only the printed pairs are checked)

    Returns:
        TableReport with one row per N
    """
    expected = load_expected_table(path)
    printed = {p.n: p for p in load_table_pairs()}
    rows = []
    for n in sorted(expected):
        found = search_max_z(SearchTask(n=n, worker_count=workers)).z_max if run_search else None
        pair_z, profiles_match = None, None
        if n in printed:
            entry = printed[n]
            pair_z = czcp_width(entry.pair).z
            aac = pair_profile(entry.pair.a, entry.pair.b, CorrelationKind.AAC_SUM).squared_magnitudes()
            acc_sum = pair_profile(entry.pair.a, entry.pair.b, CorrelationKind.ACC_SUM).squared_magnitudes()
            profiles_match = aac == entry.aac_sum and acc_sum == entry.acc_sum
        matched = (
            (found is None or found == expected[n])
            and (pair_z is None or pair_z == expected[n])
            and profiles_match is not False
        )
        if not matched:
            logger.warning(f"Table mismatch at N={n}: expected {expected[n]}, search {found}, printed pair {pair_z}")
        rows.append(TableRow(
            n=n, expected_z=expected[n], found_z=found, pair_z=pair_z,
            profiles_match=profiles_match, matched=matched,
        ))
    return TableReport(rows=rows)
