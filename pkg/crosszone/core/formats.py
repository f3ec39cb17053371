"""Text formats for sequences, sequence files and training-matrix CSV."""

import csv
import io
import json
import logging
from typing import Any, Dict, List, Tuple

import numpy as np

from crosszone.core.errors import SequenceFormatError
from crosszone.core.models import QarySequence

logger = logging.getLogger(__name__)


def parse_sequence(text: str, line: int = 1) -> QarySequence:
    """Parse a '+'/'-' string or a "q=<q>:p0,p1,..." phase list.

    Args:
        text: The sequence text
        line: Line number reported in errors

    Returns:
        The parsed sequence

    Raises:
        SequenceFormatError: Naming the line and column of the first bad character
    """
    stripped = text.strip()
    offset = len(text) - len(text.lstrip())
    if not stripped:
        raise SequenceFormatError("empty sequence", line=line, column=1)

    if not stripped.startswith("q="):
        for i, ch in enumerate(stripped):
            if ch not in "+-":
                raise SequenceFormatError(f"unexpected character {ch!r}", line=line, column=offset + i + 1)
        return QarySequence.binary(stripped)

    header, sep, body = stripped.partition(":")
    if not sep:
        raise SequenceFormatError("missing ':' after alphabet header", line=line, column=offset + len(stripped) + 1)
    try:
        q = int(header[2:])
    except ValueError:
        raise SequenceFormatError(f"bad alphabet order {header[2:]!r}", line=line, column=offset + 3)
    if q < 1:
        raise SequenceFormatError(f"alphabet order must be positive, got {q}", line=line, column=offset + 3)

    phases: List[int] = []
    column = offset + len(header) + 2
    for token in body.split(","):
        try:
            value = int(token)
        except ValueError:
            raise SequenceFormatError(f"bad phase {token.strip()!r}", line=line, column=column)
        if not 0 <= value < q:
            raise SequenceFormatError(f"phase {value} outside Z_{q}", line=line, column=column)
        phases.append(value)
        column += len(token) + 1
    return QarySequence(q=q, phases=phases)


def format_sequence(seq: QarySequence) -> str:
    """Inverse of parse_sequence."""
    return str(seq)


def parse_sequences(text: str) -> List[QarySequence]:
    """Parse one sequence per non-blank line; '#' starts a comment line."""
    sequences = []
    for number, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        sequences.append(parse_sequence(raw, line=number))
    if not sequences:
        raise SequenceFormatError("no sequences found", line=1, column=1)
    return sequences


def _format_complex(z: complex) -> str:
    re = 0.0 if z.real == 0 else z.real
    im = 0.0 if z.imag == 0 else z.imag
    return f"{re:.12g}{im:+.12g}j"


def matrix_to_csv(entries: np.ndarray, metadata: Dict[str, Any]) -> str:
    """Serialize a matrix as a '# {json}' metadata header followed by re+imj rows."""
    buffer = io.StringIO()
    buffer.write("# " + json.dumps(metadata, sort_keys=True) + "\n")
    writer = csv.writer(buffer, lineterminator="\n")
    for row in entries:
        writer.writerow([_format_complex(complex(z)) for z in row])
    return buffer.getvalue()


def parse_matrix_csv(text: str) -> Tuple[np.ndarray, Dict[str, Any]]:
    """Parse matrix_to_csv output.

    Returns:
        The complex entries and the metadata dictionary
    """
    lines = text.splitlines()
    if not lines or not lines[0].startswith("#"):
        raise SequenceFormatError("missing metadata header", line=1, column=1)
    try:
        metadata = json.loads(lines[0][1:])
    except json.JSONDecodeError as e:
        raise SequenceFormatError(f"bad metadata header: {e.msg}", line=1, column=e.colno + 1)

    rows: List[List[complex]] = []
    for number, row in enumerate(csv.reader(lines[1:]), start=2):
        if not row:
            continue
        parsed = []
        for col, cell in enumerate(row, start=1):
            try:
                parsed.append(complex(cell.strip()))
            except ValueError:
                raise SequenceFormatError(f"bad complex entry {cell!r}", line=number, column=col)
        rows.append(parsed)
    if not rows:
        raise SequenceFormatError("matrix has no rows", line=2, column=1)
    if len({len(r) for r in rows}) != 1:
        raise SequenceFormatError("matrix rows have different lengths", line=2, column=1)
    return np.array(rows, dtype=complex), metadata
