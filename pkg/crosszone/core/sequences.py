"""Correlation primitives over q-ary unit-modulus sequences.

Binary and quaternary correlations are Gaussian-integer sums and are computed
exactly by counting phase differences; every other alphabet falls back to
complex floating point.
"""

import logging
from typing import List, Optional, Union

import numpy as np

from crosszone.core.errors import AlphabetError, LengthMismatchError
from crosszone.core.models import (
    CorrelationKind, CorrelationProfile, CorrelationValue, QarySequence, TransformKind
)

logger = logging.getLogger(__name__)

# exact values of w_4^k
_UNIT_Z4 = np.array([1, 1j, -1, -1j], dtype=complex)


def _is_exact(q: int) -> bool:
    return q in (1, 2, 4)


def _check_pair(a: QarySequence, b: QarySequence) -> None:
    if len(a) != len(b):
        raise LengthMismatchError(f"sequence lengths differ: {len(a)} != {len(b)}")
    if a.q != b.q:
        raise AlphabetError(f"sequence alphabets differ: q={a.q} and q={b.q}")


def _inner(x: np.ndarray, y: np.ndarray, q: int) -> CorrelationValue:
    """sum_n w^(x_n) * conj(w^(y_n)) for phase vectors x, y."""
    if len(x) == 0:
        return CorrelationValue.zero(exact=_is_exact(q))
    if _is_exact(q):
        d = ((x - y) * (4 // q)) % 4
        c = np.bincount(d, minlength=4)
        return CorrelationValue(re=int(c[0] - c[2]), im=int(c[1] - c[3]), exact=True)
    s = np.sum(np.exp(2j * np.pi * (x - y) / q))
    return CorrelationValue(re=float(s.real), im=float(s.imag), exact=False)


def to_complex(seq: QarySequence) -> np.ndarray:
    """Complex entries of a sequence; exact for q in {1, 2, 4}."""
    if _is_exact(seq.q):
        return _UNIT_Z4[(seq.array * (4 // seq.q)) % 4]
    return np.exp(2j * np.pi * seq.array / seq.q)


def from_complex(values: np.ndarray, q: int) -> QarySequence:
    """Recover phase exponents from unit-modulus complex values.

    Raises:
        AlphabetError: If an entry is not a q-th root of unity
    """
    values = np.asarray(values, dtype=complex)
    phases = np.mod(np.round(np.angle(values) * q / (2 * np.pi)), q).astype(np.int64)
    expected = np.exp(2j * np.pi * phases / q)
    if np.any(np.abs(values - expected) > 1e-9):
        raise AlphabetError(f"entries are not all {q}-th roots of unity")
    return QarySequence(q=q, phases=phases)


def unit_exponent(q: int, c: Union[int, complex]) -> int:
    """Exponent k with c = w_q^k.

    Args:
        q: Alphabet order
        c: Either an exponent in Z_q or a complex q-th root of unity

    Raises:
        AlphabetError: If c does not name an element of A_q
    """
    if isinstance(c, (int, np.integer)) and not isinstance(c, bool):
        if not 0 <= c < q:
            raise AlphabetError(f"scale exponent {c} outside Z_{q}")
        return int(c)
    value = complex(c)
    k = int(np.mod(np.round(np.angle(value) * q / (2 * np.pi)), q))
    if abs(value - np.exp(2j * np.pi * k / q)) > 1e-9:
        raise AlphabetError(f"scale factor {c} is not a {q}-th root of unity")
    return k


def acc(a: QarySequence, b: QarySequence, tau: int) -> CorrelationValue:
    """Aperiodic cross-correlation rho(a, b)(tau).

    Args:
        a: First sequence
        b: Second sequence, same length and alphabet
        tau: Shift; |tau| >= N gives zero

    Returns:
        sum_n a_n conj(b_{n+tau})
    """
    _check_pair(a, b)
    n = len(a)
    if abs(tau) >= n:
        return CorrelationValue.zero(exact=_is_exact(a.q))
    x, y = a.array, b.array
    if tau >= 0:
        return _inner(x[: n - tau], y[tau:], a.q)
    return _inner(x[-tau:], y[: n + tau], a.q)


def pcc(a: QarySequence, b: QarySequence, tau: int) -> CorrelationValue:
    """Periodic cross-correlation phi(a, b)(tau), tau taken mod N."""
    _check_pair(a, b)
    return _inner(a.array, np.roll(b.array, -(tau % len(b))), a.q)


def transform(a: QarySequence, op: TransformKind, c: Union[int, complex] = 0, tau: int = 0) -> QarySequence:
    """Apply an elementwise or index transform.

    Args:
        a: Input sequence
        op: Which transform
        c: Unit scale factor for SCALE (exponent or complex root)
        tau: Right cyclic shift amount for SHIFT

    Returns:
        The transformed sequence
    """
    op = TransformKind(op)
    p = a.array
    if op == TransformKind.REVERSE:
        return QarySequence(q=a.q, phases=p[::-1])
    if op == TransformKind.CONJUGATE:
        return QarySequence(q=a.q, phases=(-p) % a.q)
    if op == TransformKind.NEGATE:
        if a.q % 2:
            raise AlphabetError(f"-x is not in A_{a.q} for odd q")
        return QarySequence(q=a.q, phases=(p + a.q // 2) % a.q)
    if op == TransformKind.SCALE:
        return QarySequence(q=a.q, phases=(p + unit_exponent(a.q, c)) % a.q)
    if op == TransformKind.SHIFT:
        return QarySequence(q=a.q, phases=np.roll(p, tau))
    raise ValueError(f"Unknown transform: {op}")


def reverse(a: QarySequence) -> QarySequence:
    return transform(a, TransformKind.REVERSE)


def conjugate(a: QarySequence) -> QarySequence:
    return transform(a, TransformKind.CONJUGATE)


def negate(a: QarySequence) -> QarySequence:
    return transform(a, TransformKind.NEGATE)


def scale(a: QarySequence, c: Union[int, complex]) -> QarySequence:
    return transform(a, TransformKind.SCALE, c=c)


def shift(a: QarySequence, tau: int) -> QarySequence:
    return transform(a, TransformKind.SHIFT, tau=tau)


def reverse_conjugate(a: QarySequence) -> QarySequence:
    """The reversed, conjugated sequence (often written with an underline and a star)."""
    return QarySequence(q=a.q, phases=(-a.array[::-1]) % a.q)


def concat(*parts: QarySequence) -> QarySequence:
    q = parts[0].q
    if any(p.q != q for p in parts):
        raise AlphabetError("cannot concatenate sequences over different alphabets")
    return QarySequence(q=q, phases=np.concatenate([p.array for p in parts]))


def pair_profile(a: QarySequence, b: QarySequence, kind: CorrelationKind) -> CorrelationProfile:
    """Correlation sums of a pair for tau = 0..N-1.

    AAC_SUM is rho(a)+rho(b), ACC_SUM is rho(a,b)+rho(b,a); PAC and PCC are the
    periodic counterparts.
    """
    _check_pair(a, b)
    kind = CorrelationKind(kind)
    corr = acc if kind in (CorrelationKind.AAC_SUM, CorrelationKind.ACC_SUM) else pcc
    if kind in (CorrelationKind.AAC_SUM, CorrelationKind.PAC):
        values = [corr(a, a, t) + corr(b, b, t) for t in range(len(a))]
    else:
        values = [corr(a, b, t) + corr(b, a, t) for t in range(len(a))]
    return CorrelationProfile(kind=kind, values=values)


def periodic_profile(a: QarySequence, b: Optional[QarySequence] = None) -> CorrelationProfile:
    """PAC of a (b omitted) or PCC phi(a, b) for tau = 0..N-1."""
    if b is None:
        return CorrelationProfile(kind=CorrelationKind.PAC, values=[pcc(a, a, t) for t in range(len(a))])
    return CorrelationProfile(kind=CorrelationKind.PCC, values=[pcc(a, b, t) for t in range(len(a))])


def integrated_sidelobe_level(a: QarySequence) -> float:
    """Aperiodic ISL: sum of |rho(a)(tau)|^2 over tau = 1..N-1."""
    return sum(acc(a, a, t).squared_magnitude for t in range(1, len(a)))


def profile_to_csv(profile: CorrelationProfile) -> str:
    """Export a profile with header tau,re,im,magnitude."""
    lines: List[str] = ["tau,re,im,magnitude"]
    for tau, v in enumerate(profile.values):
        if v.exact:
            lines.append(f"{tau},{int(v.re)},{int(v.im)},{v.magnitude:.12g}")
        else:
            lines.append(f"{tau},{v.re:.12g},{v.im:.12g},{v.magnitude:.12g}")
    return "\n".join(lines) + "\n"
