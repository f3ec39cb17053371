"""Cross Z-complementary pairs and sets: checks, equivalences and constructions.

A pair (a, b) of length N is an (N, Z)-CZCP when, with T1 = {1..Z} and
T2 = {N-Z..N-1},

    C1: rho(a)(tau) + rho(b)(tau) = 0      for |tau| in T1 and T2
    C2: rho(a,b)(tau) + rho(b,a)(tau) = 0  for |tau| in T2

Both sums at -tau are conjugates of the sums at tau, so only positive shifts
are evaluated.
"""

import logging
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from crosszone.core.errors import AlphabetError, ConstructionError, LengthMismatchError
from crosszone.core.formats import format_sequence
from crosszone.core.gbf import davis_jedwab_pair
from crosszone.core.models import (
    CorrelationKind, CorrelationValue, CzcpCertificate, CzcSet, DJParams, QarySequence, SequencePair
)
from crosszone.core.sequences import (
    acc, concat, negate, pair_profile, reverse, reverse_conjugate, scale, unit_exponent
)

logger = logging.getLogger(__name__)

# Golay kernels for perfect binary pairs
_KERNEL_10 = SequencePair.binary("++-+++++--", "++-+-+--++")
_KERNEL_26 = SequencePair.binary("++++-++--+-+-+--+-+++--+++", "++++-++--+-+++++-+---++---")


def _aac_sum(p: SequencePair, tau: int) -> CorrelationValue:
    return acc(p.a, p.a, tau) + acc(p.b, p.b, tau)


def _acc_sum(p: SequencePair, tau: int) -> CorrelationValue:
    return acc(p.a, p.b, tau) + acc(p.b, p.a, tau)


def is_gcp(p: SequencePair) -> bool:
    """True iff the AAC sum vanishes at every non-zero shift."""
    return all(_aac_sum(p, tau).is_zero(p.n) for tau in range(1, p.n))


def mutually_orthogonal(p: SequencePair, r: SequencePair) -> bool:
    """True iff rho(a,c)(tau) + rho(b,d)(tau) = 0 for every shift."""
    if p.n != r.n:
        raise LengthMismatchError(f"pair lengths differ: {p.n} != {r.n}")
    if p.q != r.q:
        raise AlphabetError(f"pair alphabets differ: q={p.q} and q={r.q}")
    return all(
        (acc(p.a, r.a, tau) + acc(p.b, r.b, tau)).is_zero(p.n)
        for tau in range(-(p.n - 1), p.n)
    )


def mutually_orthogonal_mate(p: SequencePair) -> SequencePair:
    """(rev-conj(b), -rev-conj(a)), orthogonal to p whenever p is a GCP."""
    return SequencePair(a=reverse_conjugate(p.b), b=negate(reverse_conjugate(p.a)))


def czcp_width(p: SequencePair) -> CzcpCertificate:
    """Largest Z in [0, N/2] for which p is an (N, Z)-CZCP.

    Z = 0 means p is not a CZCP for any Z >= 1.
    """
    n = p.n
    c1 = [True] + [_aac_sum(p, tau).is_zero(n) for tau in range(1, n)]
    c2 = [False] + [_acc_sum(p, tau).is_zero(n) for tau in range(1, n)]
    for z in range(n // 2, 0, -1):
        front = all(c1[1 : z + 1])
        tail = all(c1[n - z :]) and all(c2[n - z :])
        if front and tail:
            return CzcpCertificate(n=n, z=z, perfect=(n % 2 == 0 and z == n // 2))
    return CzcpCertificate(n=n, z=0)


def is_czcp(p: SequencePair, z: int) -> bool:
    return czcp_width(p).z >= z


def canonicalize(p: SequencePair) -> SequencePair:
    """(a/a_0, b/b_0): both sequences start with phase 0."""
    q = p.q
    return SequencePair(
        a=QarySequence(q=q, phases=(p.a.array - p.a.phases[0]) % q),
        b=QarySequence(q=q, phases=(p.b.array - p.b.phases[0]) % q),
    )


def has_canonical_pattern(p: SequencePair, z: int) -> bool:
    """c_i = d_i and c_{N-1-i} = -d_{N-1-i} for i < z."""
    if p.q % 2:
        raise AlphabetError(f"negation is not defined for odd q={p.q}")
    a, b, n, half = p.a.phases, p.b.phases, p.n, p.q // 2
    return all(
        a[i] == b[i] and a[n - 1 - i] == (b[n - 1 - i] + half) % p.q
        for i in range(z)
    )


def p2_transforms(p: SequencePair, c1: Union[int, complex] = 0, c2: Union[int, complex] = 0) -> List[SequencePair]:
    """The three width-preserving re-arrangements of a pair.

    Args:
        p: Input pair
        c1: Unit scale for the new first sequence (exponent or complex root)
        c2: Unit scale for the new second sequence

    Returns:
        [(c1 b, c2 a), (c1 rev(b), c2 rev(a)), (c1 rev-conj(b), c2 rev-conj(a))]
    """
    k1, k2 = unit_exponent(p.q, c1), unit_exponent(p.q, c2)
    return [
        SequencePair(a=scale(p.b, k1), b=scale(p.a, k2)),
        SequencePair(a=scale(reverse(p.b), k1), b=scale(reverse(p.a), k2)),
        SequencePair(a=scale(reverse_conjugate(p.b), k1), b=scale(reverse_conjugate(p.a), k2)),
    ]


def p2_cross_identities(p: SequencePair, z: Optional[int] = None) -> Tuple[bool, bool]:
    """Cross identities between a pair and its mutually orthogonal mate.

    Returns:
        (rho(a, rev-conj(b)) + rho(b, -rev-conj(a)) vanishes for every tau,
         rho(b, rev-conj(b)) + rho(a, -rev-conj(a)) vanishes for |tau| in T2)
    """
    if z is None:
        z = czcp_width(p).z
    n = p.n
    b_rc = reverse_conjugate(p.b)
    a_rc_neg = negate(reverse_conjugate(p.a))
    first = all(
        (acc(p.a, b_rc, tau) + acc(p.b, a_rc_neg, tau)).is_zero(n)
        for tau in range(-(n - 1), n)
    )
    second = all(
        (acc(p.b, b_rc, s * tau) + acc(p.a, a_rc_neg, s * tau)).is_zero(n)
        for tau in range(n - z, n)
        for s in (1, -1)
    )
    return first, second


def p3_check(p: SequencePair) -> bool:
    """Even length and a_i + a_{N-1-i} + b_i + b_{N-1-i} = +-2 for i < Z.

    Raises:
        AlphabetError: For non-binary input
    """
    if p.q != 2:
        raise AlphabetError(f"the +-2 condition applies to binary pairs, got q={p.q}")
    n = p.n
    if n % 2:
        return False
    z = czcp_width(p).z
    a, b = p.a.signs(), p.b.signs()
    return all(abs(int(a[i] + a[n - 1 - i] + b[i] + b[n - 1 - i])) == 2 for i in range(z))


def is_strengthened_gcp(p: SequencePair) -> bool:
    """A GCP whose canonical halves are identical in front and negated at the back."""
    if p.n % 2 or p.q % 2:
        return False
    return is_gcp(p) and has_canonical_pattern(canonicalize(p), p.n // 2)


def construction1(
    e: QarySequence,
    f: QarySequence,
    u1: int = 0,
    u2: int = 0,
    u: int = 0,
    variant: int = 1,
) -> SequencePair:
    """Perfect CZCP of length 2M from a GCP (e, f) of length M.

    Variants 1 and 2 put e in front; 3 and 4 swap e and f. Variants 1 and 3
    negate the back half of b, variants 2 and 4 negate the back half of a.

    Raises:
        ConstructionError: If (e, f) is not a GCP, q is odd, u1 - u2 is not
            0 or q/2, or variant is not 1..4
    """
    q = e.q
    if q % 2:
        raise ConstructionError(f"construction needs even q, got {q}")
    seed = SequencePair(a=e, b=f)
    if not is_gcp(seed):
        raise ConstructionError("(e, f) is not a Golay complementary pair")
    if (u1 - u2) % q not in (0, q // 2):
        raise ConstructionError(f"u1 - u2 = {u1 - u2} must be 0 or q/2 modulo {q}")
    if variant not in (1, 2, 3, 4):
        raise ConstructionError(f"variant must be 1..4, got {variant}")
    if variant in (3, 4):
        e, f = f, e

    half = q // 2
    neg_a = half if variant in (2, 4) else 0
    neg_b = 0 if variant in (2, 4) else half
    front_a, front_b = scale(e, u1 % q), scale(e, u2 % q)
    back_a = scale(f, (u1 + u + neg_a) % q)
    back_b = scale(f, (u2 + u + neg_b) % q)
    return SequencePair(a=concat(front_a, back_a), b=concat(front_b, back_b))


def construction2(p: DJParams) -> SequencePair:
    """Perfect CZCP of length 2^mu from the path-form GCP with pi(1) = mu.

    Raises:
        ConstructionError: If pi(1) != mu or w' is not 0 or q/2
    """
    if p.q % 2:
        raise ConstructionError(f"construction needs even q, got {p.q}")
    if p.pi[0] != p.mu:
        raise ConstructionError(f"pi(1) must equal mu={p.mu}, got {p.pi[0]}")
    if p.w_prime % p.q not in (0, p.q // 2):
        raise ConstructionError(f"w' must be 0 or q/2, got {p.w_prime}")
    return davis_jedwab_pair(p)


def construction2_count(q: int, mu: int) -> int:
    """(mu-1)! * q^(mu+1): parameter combinations with pi(1) = mu and w' = 0."""
    count = 1
    for k in range(2, mu):
        count *= k
    return count * q ** (mu + 1)


def golay_doubling(p: SequencePair) -> SequencePair:
    """(a||b, a||-b), a GCP of twice the length whenever p is one."""
    return SequencePair(a=concat(p.a, p.b), b=concat(p.a, negate(p.b)))


def _kernel_factorization(length: int) -> Optional[Tuple[int, int]]:
    """(kernel, doublings) with length = kernel * 2^doublings, kernel in {1, 10, 26}."""
    doublings = 0
    while length % 2 == 0:
        length //= 2
        doublings += 1
    for kernel in (1, 5, 13):
        if length == kernel:
            if kernel == 1:
                return 1, doublings
            if doublings >= 1:
                return kernel * 2, doublings - 1
    return None


def perfect_binary_lengths(max_n: int) -> List[int]:
    """Lengths 2^(a1+1) * 10^a2 * 26^a3 <= max_n."""
    lengths = set()
    p26 = 1
    while 2 * p26 <= max_n:
        p10 = p26
        while 2 * p10 <= max_n:
            n = 2 * p10
            while n <= max_n:
                lengths.add(n)
                n *= 2
            p10 *= 10
        p26 *= 26
    return sorted(lengths)


def binary_perfect_czcp(n: int) -> SequencePair:
    """A perfect binary (n, n/2)-CZCP from a doubled Golay kernel.

    Raises:
        ConstructionError: If n/2 is not kernel * 2^k for a kernel of length 1, 10 or 26
    """
    if n < 2 or n % 2:
        raise ConstructionError(f"perfect CZCPs need even length, got {n}")
    factor = _kernel_factorization(n // 2)
    if factor is None:
        raise ConstructionError(
            f"no binary Golay kernel for length {n // 2}; supported lengths are 2^k, 10*2^k and 26*2^k"
        )
    kernel, doublings = factor
    if kernel == 1:
        seed = SequencePair.binary("+", "+")
    else:
        seed = _KERNEL_10 if kernel == 10 else _KERNEL_26
    for _ in range(doublings):
        seed = golay_doubling(seed)
    logger.debug(f"perfect binary pair of length {n} from kernel {kernel} doubled {doublings} times")
    return construction1(seed.a, seed.b)


def czcs_check(s: CzcSet) -> bool:
    """Check the CZCS conditions for width s.z.

    Sum of rho(a_m)(tau) vanishes for |tau| in T1 and T2, and the sum of
    rho(a_m, a_{m+1 mod M})(tau) vanishes for |tau| in T2.

    Raises:
        LengthMismatchError: If members differ in length
    """
    members = s.members
    if len(members) < 2:
        raise ValueError(f"a CZCS needs at least two members, got {len(members)}")
    n = len(members[0])
    if any(len(m) != n for m in members):
        raise LengthMismatchError("CZCS members must share a length")
    z = s.z
    if z > n // 2:
        return False
    m_count = len(members)

    def auto_sum(tau: int) -> CorrelationValue:
        total = CorrelationValue.zero(exact=members[0].is_exact)
        for m in members:
            total = total + acc(m, m, tau)
        return total

    def cross_sum(tau: int) -> CorrelationValue:
        total = CorrelationValue.zero(exact=members[0].is_exact)
        for i in range(m_count):
            total = total + acc(members[i], members[(i + 1) % m_count], tau)
        return total

    zone = list(range(1, z + 1)) + list(range(n - z, n))
    if not all(auto_sum(tau).is_zero(n) for tau in zone):
        return False
    return all(cross_sum(s * tau).is_zero(n) for tau in range(n - z, n) for s in (1, -1))


def czcs_width(members: Sequence[QarySequence]) -> int:
    """Largest Z for which the members form a CZCS (0 if none)."""
    n = len(members[0])
    for z in range(n // 2, 0, -1):
        if czcs_check(CzcSet(members=tuple(members), z=z)):
            return z
    return 0


def czcs_from_czcp(p: SequencePair, m: int) -> CzcSet:
    """M members alternating a, b, a, b, ...

    Raises:
        ConstructionError: If M is odd or below 2, or p is not a CZCP
    """
    if m < 2 or m % 2:
        raise ConstructionError(f"M must be even and at least 2, got {m}")
    z = czcp_width(p).z
    if z == 0:
        raise ConstructionError(f"the length-{p.n} pair is not a CZCP for any Z >= 1")
    members = tuple(p.a if i % 2 == 0 else p.b for i in range(m))
    return CzcSet(members=members, z=z)


def certificate_document(p: SequencePair) -> Dict[str, Any]:
    """Flat record {n, z, perfect, a, b, aac_sum_profile, acc_sum_profile}.

    Profiles hold squared magnitudes, which are integers for q in {1, 2, 4}.
    """
    cert = czcp_width(p)
    aac = pair_profile(p.a, p.b, CorrelationKind.AAC_SUM)
    acc_sum = pair_profile(p.a, p.b, CorrelationKind.ACC_SUM)
    return {
        "n": cert.n,
        "z": cert.z,
        "perfect": cert.perfect,
        "q": p.q,
        "a": format_sequence(p.a),
        "b": format_sequence(p.b),
        "aac_sum_profile": aac.squared_magnitudes(),
        "acc_sum_profile": acc_sum.squared_magnitudes(),
    }
