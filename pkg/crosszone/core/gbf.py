"""Generalized Boolean functions and the quadratic path-form GCP construction."""

import itertools
import logging
import re
from typing import Iterable, Iterator, Optional, Sequence, Tuple

import numpy as np

from crosszone.core.errors import AlphabetError, ConstructionError, LengthMismatchError, SequenceFormatError
from crosszone.core.models import GBF, CorrelationValue, DJParams, QarySequence, SequencePair
from crosszone.core.sequences import acc

logger = logging.getLogger(__name__)


def variable_table(mu: int, i: int) -> np.ndarray:
    """Values of x_i over kappa = 0..2^mu-1; x_1 is the least significant bit."""
    if not 1 <= i <= mu:
        raise ConstructionError(f"variable index {i} outside 1..{mu}")
    return (np.arange(2**mu) >> (i - 1)) & 1


def gbf_from_terms(
    q: int,
    mu: int,
    quadratic: Iterable[Tuple[int, int, int]] = (),
    linear: Sequence[int] = (),
    constant: int = 0,
) -> GBF:
    """Evaluate sum c*x_i*x_j + sum l_i*x_i + constant into a truth table.

    Args:
        q: Alphabet order
        mu: Number of Boolean variables
        quadratic: (i, j, c) terms with 1-based variable indices
        linear: Coefficients l_1..l_k (k <= mu)
        constant: Constant term

    Returns:
        GBF with the evaluated truth table

    Raises:
        ConstructionError: For variable indices outside 1..mu
        AlphabetError: For coefficients outside Z_q
    """
    if len(linear) > mu:
        raise ConstructionError(f"{len(linear)} linear coefficients for {mu} variables")
    table = np.full(2**mu, constant, dtype=np.int64)
    for i, j, c in quadratic:
        _check_coefficient(q, c)
        table += c * variable_table(mu, i) * variable_table(mu, j)
    for i, c in enumerate(linear, start=1):
        _check_coefficient(q, c)
        table += c * variable_table(mu, i)
    _check_coefficient(q, constant)
    return GBF(q=q, mu=mu, truth_table=table % q)


def _check_coefficient(q: int, c: int) -> None:
    if not 0 <= c < q:
        raise AlphabetError(f"coefficient {c} outside Z_{q}")


def phase_sequence(g: GBF) -> QarySequence:
    return QarySequence(q=g.q, phases=g.truth_table)


def gbf_from_sequence(seq: QarySequence) -> GBF:
    """Inverse of phase_sequence for sequences of length 2^mu."""
    mu = len(seq).bit_length() - 1
    if 2**mu != len(seq):
        raise LengthMismatchError(f"length {len(seq)} is not a power of two")
    return GBF(q=seq.q, mu=mu, truth_table=seq.phases)


def rho_q(g: GBF, h: GBF, tau: int) -> CorrelationValue:
    """Aperiodic correlation of the sequences associated with g and h."""
    if g.q != h.q:
        raise AlphabetError(f"GBFs over different alphabets: q={g.q} and q={h.q}")
    if g.mu != h.mu:
        raise LengthMismatchError(f"GBFs over different variable counts: {g.mu} and {h.mu}")
    return acc(phase_sequence(g), phase_sequence(h), tau)


def _path_terms(p: DJParams) -> Tuple[Tuple[int, int, int], ...]:
    half = p.q // 2
    return tuple((p.pi[k], p.pi[k + 1], half) for k in range(p.mu - 1))


def davis_jedwab_pair(p: DJParams) -> SequencePair:
    """The GCP (g, g + (q/2) x_pi(1) + w') with g the quadratic path form.

    Raises:
        AlphabetError: If q is odd
    """
    if p.q % 2:
        raise AlphabetError(f"the path-form construction needs even q, got {p.q}")
    quad = _path_terms(p)
    g = gbf_from_terms(p.q, p.mu, quad, p.w, p.w0)
    linear = list(p.w)
    linear[p.pi[0] - 1] = (linear[p.pi[0] - 1] + p.q // 2) % p.q
    h = gbf_from_terms(p.q, p.mu, quad, linear, (p.w0 + p.w_prime) % p.q)
    return SequencePair(a=phase_sequence(g), b=phase_sequence(h))


def davis_jedwab_parameters(
    q: int,
    mu: int,
    require_pi1_mu: bool = False,
    w_prime_values: Optional[Sequence[int]] = None,
) -> Iterator[DJParams]:
    """Enumerate every DJParams combination.

    A path and its reversal share the quadratic form but differ in pi(1);
    both are yielded.

    Args:
        q: Even alphabet order
        mu: Variable count
        require_pi1_mu: Keep only permutations with pi(1) = mu
        w_prime_values: Offsets w' to sweep; defaults to (0,)

    Yields:
        DJParams in a fixed order
    """
    if w_prime_values is None:
        w_prime_values = (0,)
    for pi in itertools.permutations(range(1, mu + 1)):
        if require_pi1_mu and pi[0] != mu:
            continue
        for w in itertools.product(range(q), repeat=mu):
            for w0 in range(q):
                for w_prime in w_prime_values:
                    yield DJParams(q=q, mu=mu, pi=pi, w=w, w0=w0, w_prime=w_prime)


_GBF_FIELD = re.compile(r"(\w+)=(\S*)")
_QUAD_TERM = re.compile(r"\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)")


def parse_gbf(line: str) -> GBF:
    """Parse "q=<q> mu=<mu> quad=(i,j,c);... lin=c1,...,cmu const=c".

    Raises:
        SequenceFormatError: For missing fields or malformed terms
    """
    fields = {}
    for match in _GBF_FIELD.finditer(line):
        fields[match.group(1)] = (match.group(2), match.start(2) + 1)
    for required in ("q", "mu"):
        if required not in fields:
            raise SequenceFormatError(f"missing field {required!r}", line=1, column=1)

    def _int(name: str) -> int:
        text, column = fields[name]
        try:
            return int(text)
        except ValueError:
            raise SequenceFormatError(f"bad integer for {name}: {text!r}", line=1, column=column)

    q, mu = _int("q"), _int("mu")
    quadratic = []
    if "quad" in fields and fields["quad"][0]:
        text, column = fields["quad"]
        for part in filter(None, text.split(";")):
            term = _QUAD_TERM.fullmatch(part)
            if term is None:
                raise SequenceFormatError(f"bad quadratic term {part!r}", line=1, column=column)
            quadratic.append(tuple(int(v) for v in term.groups()))
    linear = []
    if "lin" in fields and fields["lin"][0]:
        text, column = fields["lin"]
        try:
            linear = [int(v) for v in text.split(",")]
        except ValueError:
            raise SequenceFormatError(f"bad linear coefficients {text!r}", line=1, column=column)
    constant = _int("const") if "const" in fields else 0
    return gbf_from_terms(q, mu, quadratic, linear, constant)
