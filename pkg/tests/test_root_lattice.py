import random
from itertools import combinations, combinations_with_replacement
from math import gcd, prod

import pytest
from sympy import Matrix
from sympy.polys.domains import QQ

from app.core.bounds import power_bound_distinct
from app.core.errors import InvalidRelation, TooLarge, ZeroRoot
from app.core.poly_core import RationalPolynomial
from app.core.rank_explorer import generic_rank_sequence, rank_sequence
from app.core.root_lattice import (
    RelationLattice,
    count_degree_M_classes,
    hermite_normal_form,
    integer_kernel,
    mat_mul,
    predicted_degree,
    probe_free_rank_degree,
    quotient_invariants,
    reduce_vector,
    relations_from_rational_roots,
    smith_diagonal,
    smith_normal_form,
)
from app.core.sequence_core import LinRecSequence, Recurrence, recurrence_from_char_poly

RANK_FIVE_RELATIONS = [[4, -1, -1, -1, -1], [2, 1, -2, 1, -2]]


def random_matrix(rng, size=6, height=20):
    m, n = rng.randint(1, size), rng.randint(1, size)
    return [[rng.randint(-height, height) for _ in range(n)] for _ in range(m)]


def test_smith_normal_form_of_the_rank_five_relations():
    assert smith_diagonal(RANK_FIVE_RELATIONS) == [1, 3]


def test_smith_normal_form_properties():
    rng = random.Random(11)
    for _ in range(500):
        A = random_matrix(rng)
        U, D, V = smith_normal_form(A)
        m, n = len(A), len(A[0])
        assert mat_mul(mat_mul(U, A), V) == D
        assert all(D[i][j] == 0 for i in range(m) for j in range(n) if i != j)
        diagonal = [D[i][i] for i in range(min(m, n))]
        assert all(d >= 0 for d in diagonal)
        for a, b in zip(diagonal, diagonal[1:]):
            if a == 0:
                assert b == 0
            else:
                assert b % a == 0
        assert Matrix(U).det() in (1, -1)
        assert Matrix(V).det() in (1, -1)


def test_smith_diagonal_matches_determinantal_divisors():
    rng = random.Random(5)
    for _ in range(100):
        A = random_matrix(rng, size=4, height=9)
        diagonal = smith_diagonal(A)
        matrix = Matrix(A)
        for i in range(1, len(diagonal) + 1):
            minors = [
                int(matrix.extract(list(rows), list(cols)).det())
                for rows in combinations(range(len(A)), i)
                for cols in combinations(range(len(A[0])), i)
            ]
            divisor = 0
            for minor in minors:
                divisor = gcd(divisor, minor)
            assert prod(diagonal[:i]) == divisor


def test_smith_normal_form_edge_cases():
    U, D, V = smith_normal_form([[0, 0], [0, 0]])
    assert D == [[0, 0], [0, 0]]
    assert U == [[1, 0], [0, 1]]
    with pytest.raises(ValueError):
        smith_normal_form([])


def test_hermite_normal_form():
    H = hermite_normal_form(RANK_FIVE_RELATIONS + [[6, 0, -3, 0, -3]])
    assert len(H) == 2
    pivots = [next(j for j, x in enumerate(row) if x) for row in H]
    assert pivots == sorted(set(pivots))
    assert all(row[c] > 0 for row, c in zip(H, pivots))
    for row in RANK_FIVE_RELATIONS:
        assert reduce_vector(row, H) == (0, 0, 0, 0, 0)
    assert hermite_normal_form([[0, 0]]) == []
    assert hermite_normal_form([[4, 6], [2, 2]]) == [[2, 0], [0, 2]]


def test_hermite_normal_form_keeps_the_lattice():
    rng = random.Random(17)
    for _ in range(100):
        A = random_matrix(rng, size=4)
        H = hermite_normal_form(A)
        assert len(H) == Matrix(A).rank()
        for row in A:
            assert reduce_vector(row, H) == tuple([0] * len(row))
        if len(A) == len(A[0]) and H and len(H) == len(A):
            assert Matrix(H).det() == abs(Matrix(A).det())


def test_integer_kernel():
    A = [[1, 1, 1], [2, 0, -2]]
    kernel = integer_kernel(A)
    assert len(kernel) == 1
    assert mat_mul(A, [[x] for x in kernel[0]]) == [[0], [0]]
    assert abs(kernel[0][0]) == 1


def test_relation_lattice_validation():
    with pytest.raises(InvalidRelation):
        RelationLattice(3, [[1, 1, 1]])
    with pytest.raises(InvalidRelation):
        RelationLattice(3, [[1, -1]])
    with pytest.raises(InvalidRelation):
        RelationLattice.from_json({"relations": []})


def test_relation_lattice_json():
    lattice = RelationLattice.from_json('{"k": 5, "relations": [[4, -1, -1, -1, -1]]}')
    assert lattice.k == 5
    assert RelationLattice.from_json(lattice.to_json()).relations == lattice.relations


def test_quotient_invariants():
    structure = quotient_invariants(RelationLattice(5, RANK_FIVE_RELATIONS))
    assert structure.torsion == (3,)
    assert structure.free_rank == 3
    assert str(structure) == "Z_3 + Z^3"
    assert str(quotient_invariants(RelationLattice(3))) == "Z^3"


def test_count_degree_M_classes():
    lattice = RelationLattice(5, RANK_FIVE_RELATIONS)
    assert [count_degree_M_classes(lattice, M) for M in range(1, 6)] == [5, 15, 35, 67, 111]
    assert predicted_degree(lattice) == 2
    with pytest.raises(ValueError):
        count_degree_M_classes(lattice, 0)
    with pytest.raises(TooLarge):
        count_degree_M_classes(RelationLattice(30), 10)


def test_free_rank_degree_probe():
    lattice = RelationLattice(5, RANK_FIVE_RELATIONS)
    probe = probe_free_rank_degree(lattice, [5, 15, 35, 67, 111, 167])
    assert probe["fitted_degree"] == 2
    assert probe["consistent"] is True

    probe = probe_free_rank_degree(lattice, [5, 9, 13, 17, 21])
    assert probe["consistent"] is False


def test_relations_from_rational_roots():
    assert relations_from_rational_roots([2, -2, 4]).relations == [[2, -2, 0]]
    assert relations_from_rational_roots([2, 3]).relations == []
    with pytest.raises(ZeroRoot):
        relations_from_rational_roots([0, 1])


@pytest.mark.parametrize(
    "roots",
    [[2, -2, 4], [1, -1, 2, -2], [2, 3, 6], [QQ(1, 2), 2, -1], [3, -3, 9, -27]],
)
def test_classes_count_distinct_products(roots):
    lattice = relations_from_rational_roots(roots)
    roots = [QQ(r) if isinstance(r, int) else r for r in roots]
    for M in range(1, 5):
        products = {prod(choice, start=QQ(1)) for choice in combinations_with_replacement(roots, M)}
        assert count_degree_M_classes(lattice, M) == len(products)


def test_free_rank_predicts_the_degree_of_a_rank_five_row():
    ranks = generic_rank_sequence(Recurrence((2, 1, -2, -1, -1)), 6, trials=1)
    assert ranks == [5, 15, 35, 67, 111, 167]
    lattice = RelationLattice(5, RANK_FIVE_RELATIONS)
    assert [count_degree_M_classes(lattice, M) for M in range(1, 6)] == ranks[:5]
    probe = probe_free_rank_degree(lattice, ranks)
    assert probe["fitted_degree"] == predicted_degree(lattice) == 2


def test_free_lattice_counts_match_the_distinct_root_bound():
    for k in range(1, 6):
        for M in range(1, 7):
            assert count_degree_M_classes(RelationLattice(k), M) == power_bound_distinct(k, M)


@pytest.mark.parametrize(
    "roots, init",
    [
        ([2, -2, 4], (1, 0, 0)),
        ([1, -1, 2, -2], (1, 1, 1, 1)),
        ([2, 3, 6], (3, 1, 4)),
        ([QQ(1, 2), 2, -1], (0, 1, 5)),
    ],
)
def test_ranks_are_bounded_by_the_class_counts(roots, init):
    rec = recurrence_from_char_poly(RationalPolynomial.from_roots(roots))
    lattice = relations_from_rational_roots(roots)
    counts = [count_degree_M_classes(lattice, M) for M in range(1, 5)]
    ranks = rank_sequence(LinRecSequence(rec, init), 4).ranks
    assert all(rank <= count for rank, count in zip(ranks, counts))
    assert generic_rank_sequence(rec, 4) == counts
