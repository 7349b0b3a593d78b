# File: app/core/bounds.py

"""
Multiplicity rules for products of characteristic roots, closed-form rank
bounds for products and powers, and a brute-force multiset oracle that
checks the closed forms.
"""

import logging
from dataclasses import dataclass
from itertools import combinations_with_replacement

from sympy import prime

from app import settings
from app.core.errors import KGreaterThanR, TooLarge
from app.core.poly_core import RationalPolynomial, binomial
from app.core.sequence_core import Recurrence, recurrence_from_char_poly

logging.basicConfig(
    level=settings.LOG_LEVEL,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    handlers=[logging.StreamHandler()],
)
logger = logging.getLogger(__name__)

ORACLE_LIMIT = 10**6


@dataclass(frozen=True)
class RootSpec:
    """
    Multiplicities of the k distinct roots of a characteristic polynomial.
    """

    multiplicities: tuple

    def __post_init__(self):
        multiplicities = tuple(int(m) for m in self.multiplicities)
        if not multiplicities:
            raise ValueError("a root spec needs at least one root")
        if any(m < 1 for m in multiplicities):
            raise ValueError(f"multiplicities must be positive, got {multiplicities}")
        object.__setattr__(self, "multiplicities", multiplicities)

    @property
    def distinct_count(self) -> int:
        return len(self.multiplicities)

    @property
    def rank(self) -> int:
        return sum(self.multiplicities)


def _require_positive(**values):
    for name, value in values.items():
        if value < 1:
            raise ValueError(f"{name} must be >= 1, got {value}")


def product_multiplicity(m1: int, m2: int) -> int:
    _require_positive(m1=m1, m2=m2)
    return m1 + m2 - 1


def product_multiplicity_general(ms) -> int:
    ms = list(ms)
    if not ms:
        raise ValueError("at least one multiplicity is required")
    _require_positive(**{f"m{i}": m for i, m in enumerate(ms)})
    return 1 - len(ms) + sum(ms)


def product_rank_bound(r1: int, k1: int, r2: int, k2: int) -> int:
    """
    r1*r2 - (r1 - k1)(r2 - k2): the number of roots of the product counted
    with the multiplicities the product rule predicts. Equals r1*r2 exactly
    when r1 == k1 or r2 == k2.
    """
    _require_positive(k1=k1, k2=k2)
    if k1 > r1 or k2 > r2:
        raise KGreaterThanR(f"k cannot exceed r: ({r1}, {k1}), ({r2}, {k2})")
    return r1 * r2 - (r1 - k1) * (r2 - k2)


def product_rank_bound_coarse(r1: int, r2: int) -> int:
    _require_positive(r1=r1, r2=r2)
    return r1 * r2


def power_bound_distinct(r: int, M: int) -> int:
    _require_positive(r=r, M=M)
    return binomial(M + r - 1, M)


def power_bound_refined(r: int, k: int, M: int) -> int:
    """(r - k) C(M + k - 1, M - 1) + C(M + k - 1, M)."""
    _require_positive(r=r, k=k, M=M)
    if k > r:
        raise KGreaterThanR(f"k={k} distinct roots cannot exceed the rank r={r}")
    return (r - k) * binomial(M + k - 1, M - 1) + binomial(M + k - 1, M)


def bound_oracle(spec: RootSpec, M: int) -> int:
    """
    Worst-case rank of s^M by enumeration: every multiset of M roots is
    taken to give a distinct product, carrying the multiplicity of the
    general product rule.
    """
    _require_positive(M=M)
    k = spec.distinct_count
    count = binomial(M + k - 1, M)
    if count > ORACLE_LIMIT:
        raise TooLarge(f"{count} multisets exceed the oracle limit of {ORACLE_LIMIT}")
    total = 0
    for multiset in combinations_with_replacement(spec.multiplicities, M):
        total += product_multiplicity_general(multiset)
    return total


def compositions(r: int, k: int):
    """Every tuple of k positive integers summing to r, in lexicographic order."""
    if k == 1:
        if r >= 1:
            yield (r,)
        return
    for first in range(1, r - k + 2):
        for rest in compositions(r - first, k - 1):
            yield (first,) + rest


def hockey_stick_sum(k: int, M: int) -> int:
    """sum_{j=0}^{M} C(k + j, j)."""
    return sum(binomial(k + j, j) for j in range(M + 1))


def bound_attaining_recurrence(r: int, k: int) -> Recurrence:
    """
    Integer recurrence of rank r with k distinct prime roots (2 carries the
    surplus multiplicity r - k + 1). Distinct multisets of primes have
    distinct products, so every power attains the refined bound.
    """
    _require_positive(r=r, k=k)
    if k > r:
        raise KGreaterThanR(f"k={k} distinct roots cannot exceed the rank r={r}")
    roots = [(prime(1), r - k + 1)] + [(prime(i), 1) for i in range(2, k + 1)]
    return recurrence_from_char_poly(RationalPolynomial.from_roots(roots))
