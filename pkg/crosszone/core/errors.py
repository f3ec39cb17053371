"""Exception types raised by the crosszone core.

Every error derives from ValueError so callers that only guard against bad
input keep working.
"""

from typing import Optional


class CrosszoneError(ValueError):
    """Base class for all crosszone errors."""


class SequenceFormatError(CrosszoneError):
    """A sequence or matrix file could not be parsed."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        location = ""
        if line is not None:
            location = f"line {line}"
            if column is not None:
                location += f", column {column}"
            location += ": "
        super().__init__(f"{location}{message}")


class AlphabetError(CrosszoneError):
    """A phase, scale factor or alphabet order is outside what an operation accepts."""


class LengthMismatchError(CrosszoneError):
    """Sequences that must share a length (or alphabet) do not."""


class ConstructionError(CrosszoneError):
    """Construction parameters violate the construction's premises."""


class SearchError(CrosszoneError):
    """A search task cannot be run as requested."""


class TrainingMatrixError(CrosszoneError):
    """Training or characteristic matrix dimensions are inconsistent."""


class RankDeficiencyError(CrosszoneError):
    """X^H X is singular or too ill-conditioned for least-squares estimation."""

    def __init__(self, condition_number: float, limit: float):
        self.condition_number = condition_number
        self.limit = limit
        super().__init__(
            f"X^H X is rank deficient: condition number {condition_number:.3e} exceeds {limit:.0e} "
            "(the training matrix does not give a full-rank X for this channel length)"
        )
