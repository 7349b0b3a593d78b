# File: app/core/root_lattice.py

"""
Multiplicative relations among k symbolic roots, modelled as a sublattice N
of Z^k whose vectors have coordinate sum 0.

Z^k / N is described through the Smith normal form of the relation matrix;
degree-M root products are counted up to the relations by reducing every
exponent vector against a Hermite basis of N. The model ignores root
multiplicities, so the class count predicts the number of distinct roots of
the M-th power, which equals its rank only when every root is simple.
"""

import json
import logging
from dataclasses import dataclass, field
from itertools import combinations_with_replacement

from sympy import factorint
from sympy.polys.domains import QQ, ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import hermite_normal_form as sympy_hermite_normal_form

from app import settings
from app.core.errors import InvalidRelation, TooLarge, ZeroRoot
from app.core.poly_core import binomial, to_rational
from app.core.rank_explorer import fit_quasi_polynomial

logging.basicConfig(
    level=settings.LOG_LEVEL,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    handlers=[logging.StreamHandler()],
)
logger = logging.getLogger(__name__)

CLASS_LIMIT = 10**6


def _to_domain_matrix(rows) -> DomainMatrix:
    return DomainMatrix.from_list([[int(x) for x in row] for row in rows], ZZ)


def _to_int_rows(matrix: DomainMatrix) -> list:
    return [[int(x) for x in row] for row in matrix.to_list()]


def identity(n: int) -> list:
    return _to_int_rows(DomainMatrix.eye(n, ZZ))


def mat_mul(A, B) -> list:
    if not A or not B:
        return []
    return _to_int_rows(_to_domain_matrix(A).matmul(_to_domain_matrix(B)))


def _swap_rows(M, i, j):
    M[i], M[j] = M[j], M[i]


def _swap_columns(M, i, j):
    for row in M:
        row[i], row[j] = row[j], row[i]


def _add_row(M, target, source, factor):
    """row[target] += factor * row[source]"""
    M[target] = [a + factor * b for a, b in zip(M[target], M[source])]


def _add_column(M, target, source, factor):
    for row in M:
        row[target] += factor * row[source]


def smith_normal_form(A):
    """
    Returns (U, D, V) with U * A * V = D, U and V unimodular and D diagonal
    with nonnegative entries d_1 | d_2 | ... The pivot is always the
    smallest nonzero entry (by absolute value) of the remaining block.
    """
    if not A or not A[0]:
        raise ValueError("the matrix must be nonempty")
    m, n = len(A), len(A[0])
    if any(len(row) != n for row in A):
        raise ValueError("the matrix rows must have equal length")

    D = [[int(x) for x in row] for row in A]
    U = identity(m)
    V = identity(n)

    for t in range(min(m, n)):
        while True:
            entries = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
            if not entries:
                break
            _, i, j = min(entries)
            if i != t:
                _swap_rows(D, t, i)
                _swap_rows(U, t, i)
            if j != t:
                _swap_columns(D, t, j)
                _swap_columns(V, t, j)

            pivot = D[t][t]
            for i in range(t + 1, m):
                q = D[i][t] // pivot
                if q:
                    _add_row(D, i, t, -q)
                    _add_row(U, i, t, -q)
            for j in range(t + 1, n):
                q = D[t][j] // pivot
                if q:
                    _add_column(D, j, t, -q)
                    _add_column(V, j, t, -q)

            if any(D[i][t] for i in range(t + 1, m)) or any(D[t][j] for j in range(t + 1, n)):
                continue

            # divisibility: pull an offending row up and go round again
            offending = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % pivot),
                None,
            )
            if offending is None:
                break
            _add_row(D, t, offending, 1)
            _add_row(U, t, offending, 1)

        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]

    return U, D, V


def smith_diagonal(A) -> list:
    _, D, _ = smith_normal_form(A)
    return [D[i][i] for i in range(min(len(D), len(D[0])))]


def hermite_normal_form(rows) -> list:
    """
    Row-style Hermite normal form of the lattice spanned by `rows`: nonzero
    rows only, pivots positive and strictly moving right, entries above a
    pivot reduced into [0, pivot).
    """
    nonzero = [list(reversed(row)) for row in rows if any(row)]
    if not nonzero:
        return []
    # sympy returns a column basis with pivots moving down to the bottom
    # right; on reversed coordinates its transpose is the row form above
    basis = _to_int_rows(sympy_hermite_normal_form(_to_domain_matrix(nonzero).transpose()).transpose())
    return sorted((row[::-1] for row in basis), key=_pivot_column)


def _pivot_column(row) -> int:
    return next(j for j, x in enumerate(row) if x)


def reduce_vector(v, hnf) -> tuple:
    """Canonical representative of v + N, N spanned by the Hermite basis `hnf`."""
    v = [int(x) for x in v]
    for row in hnf:
        c = _pivot_column(row)
        q = v[c] // row[c]
        if q:
            v = [a - q * b for a, b in zip(v, row)]
    return tuple(v)


def integer_kernel(A) -> list:
    """Basis (as rows) of {x in Z^n : A x = 0}, read off the Smith transform V."""
    _, D, V = smith_normal_form(A)
    n = len(A[0])
    rank = sum(1 for i in range(min(len(D), n)) if D[i][i])
    return [[V[i][j] for i in range(n)] for j in range(rank, n)]


@dataclass
class RelationLattice:
    k: int
    relations: list = field(default_factory=list)

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        relations = []
        for row in self.relations:
            row = [int(x) for x in row]
            if len(row) != self.k:
                raise InvalidRelation(f"relation {row} does not have {self.k} coordinates")
            if sum(row) != 0:
                raise InvalidRelation(f"relation {row} has coordinate sum {sum(row)}, expected 0")
            relations.append(row)
        self.relations = relations
        self._hnf = None

    @property
    def hnf(self) -> list:
        if self._hnf is None:
            self._hnf = hermite_normal_form(self.relations)
        return self._hnf

    @classmethod
    def from_json(cls, data) -> "RelationLattice":
        """Accepts a dict or a JSON string: {"k": 5, "relations": [[...], ...]}."""
        if isinstance(data, str):
            data = json.loads(data)
        try:
            return cls(int(data["k"]), data.get("relations", []))
        except (KeyError, TypeError) as e:
            raise InvalidRelation(f'a lattice needs "k" and "relations": {e}')

    def to_json(self) -> str:
        return json.dumps({"k": self.k, "relations": self.relations})


@dataclass(frozen=True)
class QuotientStructure:
    torsion: tuple
    free_rank: int

    def __str__(self):
        parts = [f"Z_{t}" for t in self.torsion]
        if self.free_rank:
            parts.append(f"Z^{self.free_rank}")
        return " + ".join(parts) if parts else "0"


def quotient_invariants(L: RelationLattice) -> QuotientStructure:
    if not L.relations:
        return QuotientStructure(torsion=(), free_rank=L.k)
    diagonal = smith_diagonal(L.relations)
    nonzero = [d for d in diagonal if d]
    return QuotientStructure(
        torsion=tuple(d for d in nonzero if d > 1),
        free_rank=L.k - len(nonzero),
    )


def count_degree_M_classes(L: RelationLattice, M: int) -> int:
    """
    Number of classes of Z^k / N met by the nonnegative vectors with
    coordinate sum M.
    """
    if M < 1:
        raise ValueError(f"M must be >= 1, got {M}")
    total = binomial(M + L.k - 1, M)
    if total > CLASS_LIMIT:
        raise TooLarge(f"{total} exponent vectors exceed the limit of {CLASS_LIMIT}")
    hnf = L.hnf
    classes = set()
    for choice in combinations_with_replacement(range(L.k), M):
        v = [0] * L.k
        for index in choice:
            v[index] += 1
        classes.add(reduce_vector(v, hnf))
    logger.info(f"{len(classes)} classes of degree {M} among {total} products")
    return len(classes)


def predicted_degree(L: RelationLattice) -> int:
    return quotient_invariants(L).free_rank - 1


def relations_from_rational_roots(roots) -> RelationLattice:
    """
    All e with prod root_i^e_i = 1 and sum e_i = 0. Each root is split into
    its sign and prime exponents; the sign condition sum e_i sign_i = 2t
    uses an auxiliary coordinate t that is dropped afterwards.
    """
    roots = [to_rational(r) for r in roots]
    if not roots:
        raise ValueError("at least one root is required")
    if any(r == 0 for r in roots):
        raise ZeroRoot("0 cannot take part in a multiplicative relation")
    k = len(roots)

    exponents = []
    for r in roots:
        numerator, denominator = int(QQ.numer(r)), int(QQ.denom(r))
        factors = dict(factorint(abs(numerator)))
        for p, e in factorint(denominator).items():
            factors[p] = factors.get(p, 0) - e
        exponents.append(factors)
    primes = sorted({p for factors in exponents for p in factors})

    constraints = [[factors.get(p, 0) for factors in exponents] + [0] for p in primes]
    constraints.append([1 if r < 0 else 0 for r in roots] + [-2])
    constraints.append([1] * k + [0])

    kernel = integer_kernel(constraints)
    relations = hermite_normal_form([row[:k] for row in kernel])
    logger.info(f"Relations among {k} rational roots: {relations}")
    return RelationLattice(k, relations)


def probe_free_rank_degree(L: RelationLattice, ranks) -> dict:
    """
    Compares the degree of the eventual polynomial fitted to `ranks` with
    free rank - 1. A mismatch is logged as a finding, never raised.
    """
    predicted = predicted_degree(L)
    fit = fit_quasi_polynomial(ranks)
    fitted = fit.degree if fit is not None and fit.period == 1 else None
    consistent = fitted == predicted if fitted is not None else None
    if consistent is False:
        logger.warning(f"fitted degree {fitted} differs from the predicted degree {predicted} for {ranks}")
    return {
        "predicted_degree": predicted,
        "fitted_degree": fitted,
        "polynomial": str(fit) if fit else None,
        "consistent": consistent,
    }
