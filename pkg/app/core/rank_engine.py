# File: app/core/rank_engine.py

"""
Exact minimal recurrences (ranks) from term lists.

The minimal annihilator is found with Berlekamp-Massey over QQ, allowing a
zero constant coefficient; a factor x^m of its characteristic polynomial is
then stripped, which yields the strict-rank recurrence (c_0 != 0) and the
transient m from which it holds. Everything is exact, so no tolerance exists.

Window policy for rank_of_power / rank_of_product: 2B + transient allowance +
guard terms, B being the proven rank bound, with one automatic doubling when
the window turns out to be short. This is an engineering choice for
eventually-recursive inputs, not a result taken from the theory.
"""

import logging
from dataclasses import dataclass

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from app import settings
from app.core.bounds import power_bound_refined, product_rank_bound
from app.core.errors import InsufficientTerms, TooFewTerms, ValidationFailed
from app.core.poly_core import ONE, ZERO, squarefree_part, to_rational
from app.core.sequence_core import (
    LinRecSequence,
    ListStream,
    Recurrence,
    char_poly,
    termwise_power,
    termwise_product,
)

logging.basicConfig(
    level=settings.LOG_LEVEL,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    handlers=[logging.StreamHandler()],
)
logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RankCertificate:
    rank: int
    recurrence: Recurrence
    transient: int
    terms_used: int
    guard_validated: int

    def to_record(self) -> dict:
        return {
            "rank": self.rank,
            "coefficients": self.recurrence.as_strings(),
            "transient": self.transient,
            "terms_used": self.terms_used,
            "guard_validated": self.guard_validated,
        }


class BerlekampMassey:
    """
    Incremental Berlekamp-Massey over QQ.
    `connection` is C(z) = 1 + C_1 z + ... with s(n) = -sum C_i s(n - i)
    for every n >= length.
    """

    def __init__(self):
        self.connection = [ONE]
        self.previous = [ONE]
        self.length = 0
        self.shift = 1
        self.last_discrepancy = ONE
        self.terms = []

    def add(self, term):
        n = len(self.terms)
        self.terms.append(term)

        discrepancy = term
        for i in range(1, min(self.length, len(self.connection) - 1) + 1):
            discrepancy += self.connection[i] * self.terms[n - i]

        if discrepancy == 0:
            self.shift += 1
            return

        factor = discrepancy / self.last_discrepancy
        updated = list(self.connection)
        needed = len(self.previous) + self.shift
        if len(updated) < needed:
            updated.extend([ZERO] * (needed - len(updated)))
        for i, b in enumerate(self.previous):
            updated[i + self.shift] -= factor * b

        if 2 * self.length <= n:
            self.previous = self.connection
            self.length = n + 1 - self.length
            self.last_discrepancy = discrepancy
            self.shift = 1
        else:
            self.shift += 1
        self.connection = updated

    def annihilator(self) -> list:
        """
        Recurrence coefficients (c_{L-1}, ..., c_0) of the minimal
        annihilator of order L = self.length; c_0 may be zero.
        """
        padded = self.connection + [ZERO] * (self.length + 1 - len(self.connection))
        return [-c for c in padded[1:self.length + 1]]


def minimal_recurrence(terms, guard: int = None) -> RankCertificate:
    """
    Minimal strict-rank recurrence of `terms`, validated on every supplied
    term including the last `guard` ones, which the search never sees.
    """
    guard = settings.DEFAULT_GUARD if guard is None else guard
    terms = [to_rational(t) for t in terms]
    window = len(terms) - guard
    if window < 0:
        raise InsufficientTerms(
            f"{len(terms)} terms cannot cover a guard of {guard}", needed=-window
        )

    solver = BerlekampMassey()
    for term in terms[:window]:
        solver.add(term)
    order = solver.length

    if 2 * order > window:
        raise InsufficientTerms(
            f"candidate order {order} is too close to the window of {window} terms",
            needed=2 * order - window,
        )

    coeffs = solver.annihilator()
    transient = 0
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
        transient += 1
    recurrence = Recurrence(tuple(coeffs))
    rank = recurrence.order

    for index in range(transient, len(terms) - rank):
        if recurrence.residual(terms, index) != 0:
            raise ValidationFailed(
                f"rank-{rank} recurrence {recurrence} fails at index {index + rank} "
                f"of {len(terms)} terms"
            )

    logger.info(f"Found rank {rank} (transient {transient}) from {len(terms)} terms")
    return RankCertificate(
        rank=rank,
        recurrence=recurrence,
        transient=transient,
        terms_used=window,
        guard_validated=len(terms) - window,
    )


def hankel_determinant(terms, M: int):
    """Determinant of the M x M matrix with entry (i, j) = terms[i + j] (0-based)."""
    if M < 1:
        raise ValueError(f"M must be >= 1, got {M}")
    if len(terms) < 2 * M - 1:
        raise TooFewTerms(f"a {M} x {M} Hankel matrix needs {2 * M - 1} terms, got {len(terms)}")
    terms = [to_rational(t) for t in terms]
    rows = [[terms[i + j] for j in range(M)] for i in range(M)]
    return DomainMatrix(rows, (M, M), QQ).det()


def certify(certificate: RankCertificate, terms) -> bool:
    """
    Re-checks a certificate: the recurrence annihilates every term from the
    transient on, and the rank x rank Hankel block at the transient is
    nonsingular, so no shorter recurrence holds on the same window.
    """
    terms = [to_rational(t) for t in terms]
    rank, start = certificate.rank, certificate.transient
    for index in range(start, len(terms) - rank):
        if certificate.recurrence.residual(terms, index) != 0:
            return False
    if rank == 0:
        return True
    block = terms[start:start + 2 * rank - 1]
    if len(block) < 2 * rank - 1:
        return False
    return hankel_determinant(block, rank) != 0


def strict_root_counts(recurrence: Recurrence):
    """(r, k) of the characteristic polynomial with the root 0 removed."""
    p = char_poly(recurrence)
    zeros = p.trailing_zero_count()
    if zeros:
        p = type(p)(p.coefficients[zeros:])
    r = p.degree
    k = squarefree_part(p).degree if r > 0 else 0
    return r, k


def _rank_with_doubling(stream, window, guard, what, transient=0):
    try:
        return minimal_recurrence(stream.prefix(window), guard)
    except (InsufficientTerms, ValidationFailed) as e:
        # a transient lengthens the annihilator, so the first window often falls short
        log = logger.info if transient else logger.warning
        log(f"{what}: window of {window} terms too short ({e}); doubling")
    try:
        return minimal_recurrence(stream.prefix(2 * window), guard)
    except (InsufficientTerms, ValidationFailed) as e:
        logger.error(f"{what}: still failing with {2 * window} terms: {e}")
        raise


def rank_of_power(seq: LinRecSequence, M: int, guard: int = None) -> RankCertificate:
    if M < 1:
        raise ValueError(f"M must be >= 1, got {M}")
    guard = settings.DEFAULT_GUARD if guard is None else guard
    r, k = strict_root_counts(seq.recurrence)
    bound = power_bound_refined(r, k, M) if r > 0 else 0
    window = 2 * bound + seq.transient_allowance + guard
    stream = termwise_power(seq.stream(), M, 0)
    certificate = _rank_with_doubling(stream, window, guard, f"{seq} ^ {M}", seq.transient_allowance)
    if certificate.rank > bound:
        logger.warning(f"rank {certificate.rank} of {seq} ^ {M} exceeds the bound {bound}")
    return certificate


def rank_of_product(a: LinRecSequence, b: LinRecSequence, guard: int = None) -> RankCertificate:
    guard = settings.DEFAULT_GUARD if guard is None else guard
    r1, k1 = strict_root_counts(a.recurrence)
    r2, k2 = strict_root_counts(b.recurrence)
    bound = product_rank_bound(r1, k1, r2, k2) if r1 > 0 and r2 > 0 else 0
    allowance = max(a.transient_allowance, b.transient_allowance)
    window = 2 * bound + allowance + guard
    stream = termwise_product(a.stream(), b.stream(), 0)
    return _rank_with_doubling(stream, window, guard, f"{a} * {b}", allowance)


def rank_of_terms(terms, guard: int = None) -> RankCertificate:
    """Rank of a finite term list with no known recurrence (b-files)."""
    return minimal_recurrence(ListStream(terms).prefix(len(terms)), guard)
