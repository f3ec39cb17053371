"""Published pairs and baseline sequences, with their correlation profiles.

Profiles are squared magnitudes for tau = 0..N-1 so that values such as
2*sqrt(2) compare exactly as integers.
"""

import csv
import io
import logging
import os
from importlib import resources
from typing import Dict, List, Optional, Union

from pydantic import BaseModel

from crosszone.core.models import DJParams, QarySequence, SequencePair

logger = logging.getLogger(__name__)


class PrintedPair(BaseModel):
    """A pair as published, with its stated zone width and profiles."""
    name: str
    z: int
    pair: SequencePair
    aac_sum: List[int]
    acc_sum: List[int]

    @property
    def n(self) -> int:
        return self.pair.n


def _z(count: int) -> List[int]:
    return [0] * count


# (n, z, a, b, AAC-sum |.|^2, ACC-sum |.|^2)
_TABLE_ROWS = [
    (2, 1, "++", "+-", [16, 0], [0, 0]),
    (4, 2, "+++-", "++-+", [64] + _z(3), [0, 16, 0, 0]),
    (6, 2, "++++-+", "++-++-", [144, 0, 0, 16, 0, 0], [0, 16, 16, 0, 0, 0]),
    (8, 4, "+++-++-+", "+++---+-", [256] + _z(7), [0, 16, 0, 16] + _z(4)),
    (10, 4, "++-+++++--", "++-+-+--++", [400] + _z(9), [0, 16, 16, 0, 16, 16] + _z(4)),
    (12, 5, "++++-++--+-+", "++++--+++-+-", [576] + _z(5) + [16] + _z(5), [0, 64, 0, 16, 0, 16] + _z(6)),
    (14, 6, "+++-+-+++++--+", "+++-+--+---++-", [784] + _z(6) + [16] + _z(6), [0, 16, 16, 0, 16, 0, 16] + _z(7)),
    (16, 8, "+++-++-++-+++---", "+++-++-+-+---+++", [1024] + _z(15), [0, 16, 0, 144, 0, 16, 0, 16] + _z(8)),
    (18, 7, "++-++++-----++-+-+", "++-+++++--++--+-+-", [1296] + _z(7) + [36, 0, 4] + _z(7),
     [0, 144, 0, 0, 16, 0, 16, 0, 4, 16, 4] + _z(7)),
    (20, 10, "+--++++++-+--+-+---+", "+--++++++--++-+-+++-", [1600] + _z(19),
     [0, 144, 0, 16, 0, 16, 64, 16, 64, 16] + _z(10)),
    (22, 9, "++++-+-++---++++-++--+", "++++-+-+++-+----+--++-", [1936] + _z(9) + [4, 4, 4] + _z(9),
     [16, 0, 64, 16, 0, 16, 64, 16, 0, 16, 4, 4, 4] + _z(9)),
    (24, 11, "++++++---++--+--+--+-+-+", "++++++---+++--++-++-+-+-", [2304] + _z(11) + [16] + _z(11),
     [0, 576, 0, 144, 0, 16, 0, 16, 0, 16, 0, 16] + _z(12)),
    (26, 12, "++++-++--+-+-+--+-+++--+++", "++++-++--+-+++++-+---++---", [2704] + _z(25),
     [0, 16, 16, 64, 16, 64, 16, 64, 16, 0, 16, 64, 16, 16] + _z(12)),
]

TABLE_PAIRS: Dict[int, PrintedPair] = {
    n: PrintedPair(name=f"table1-{n}", z=z, pair=SequencePair.binary(a, b), aac_sum=aac, acc_sum=acc)
    for n, z, a, b, aac, acc in _TABLE_ROWS
}

EXAMPLE3 = PrintedPair(
    name="example3",
    z=3,
    pair=SequencePair.from_phases(4, [0, 1, 1, 2, 0, 2, 1, 1, 3], [0, 1, 1, 0, 1, 0, 3, 3, 1]),
    aac_sum=[324, 0, 0, 0, 8, 4, 0, 0, 0],
    acc_sum=[16, 32, 8, 8, 16, 4, 0, 0, 0],
)

# |rho(b, rev-conj(b)) + rho(a, -rev-conj(a))|^2 of the example3 pair, tau = 0..8
EXAMPLE4_SECOND_IDENTITY = [52, 40, 8, 8, 40, 16, 0, 0, 0]

EXAMPLE5_SEED = SequencePair.from_phases(
    4, [0, 1, 2, 0, 2, 1, 3, 2, 1, 1, 0], [0, 0, 3, 3, 3, 0, 0, 1, 2, 0, 2]
)

EXAMPLE5 = PrintedPair(
    name="example5",
    z=11,
    pair=SequencePair.from_phases(
        4,
        [0, 1, 2, 0, 2, 1, 3, 2, 1, 1, 0, 1, 1, 0, 0, 0, 1, 1, 2, 3, 1, 3],
        [0, 1, 2, 0, 2, 1, 3, 2, 1, 1, 0, 3, 3, 2, 2, 2, 3, 3, 0, 1, 3, 1],
    ),
    aac_sum=[1936] + _z(21),
    acc_sum=[0, 128, 16, 32, 16, 0, 16, 32, 16, 0, 16] + _z(11),
)

EXAMPLE6_PARAMS = DJParams(q=4, mu=4, pi=(4, 2, 3, 1), w=(3, 2, 0, 1), w0=0, w_prime=2)

EXAMPLE6 = PrintedPair(
    name="example6",
    z=8,
    pair=SequencePair.from_phases(
        4,
        [0, 3, 2, 1, 0, 1, 0, 1, 1, 0, 1, 0, 1, 2, 3, 0],
        [2, 1, 0, 3, 2, 3, 2, 3, 1, 0, 1, 0, 1, 2, 3, 0],
    ),
    aac_sum=[1024] + _z(15),
    acc_sum=[0, 144, 0, 16, 0, 16, 0, 16] + _z(8),
)

# Baseline seeds
GCP16 = SequencePair.from_phases(
    2,
    [0, 0, 0, 0, 0, 1, 1, 0, 0, 0, 1, 1, 0, 1, 0, 1],
    [0, 1, 0, 1, 0, 0, 1, 1, 0, 1, 1, 0, 0, 0, 0, 0],
)

M_SEQUENCE_31 = QarySequence.from_signs(
    [1, -1, -1, -1, -1, 1, -1, -1, 1, -1, 1, 1, -1, -1, 1, 1,
     1, 1, 1, -1, -1, -1, 1, 1, -1, 1, 1, 1, -1, 1, -1]
)

BARKER_13 = QarySequence.from_signs([1, 1, 1, 1, 1, -1, -1, 1, 1, -1, 1, -1, 1])

PRINTED_PAIRS: Dict[str, PrintedPair] = {
    **{p.name: p for p in TABLE_PAIRS.values()},
    EXAMPLE3.name: EXAMPLE3,
    EXAMPLE5.name: EXAMPLE5,
    EXAMPLE6.name: EXAMPLE6,
}


def get_printed_pair(name: str) -> PrintedPair:
    """Look up a published pair by name ("table1-8", "example3", ...)."""
    if name not in PRINTED_PAIRS:
        raise ValueError(f"Unknown pair: {name} (known: {', '.join(PRINTED_PAIRS)})")
    return PRINTED_PAIRS[name]


def load_expected_table(path: Optional[Union[str, os.PathLike]] = None) -> Dict[int, int]:
    """Read the n,z_max table; the packaged copy is used when no path is given."""
    if path is None:
        text = resources.files("crosszone.core.data").joinpath("table1.csv").read_text()
    else:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    table = {int(row["n"]): int(row["z_max"]) for row in csv.DictReader(io.StringIO(text))}
    logger.debug(f"Loaded {len(table)} expected table rows")
    return table


def load_table_pairs() -> List[PrintedPair]:
    return [TABLE_PAIRS[n] for n in sorted(TABLE_PAIRS)]
