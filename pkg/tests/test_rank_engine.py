import logging
import random

import pytest

from app.core.bounds import power_bound_refined, product_rank_bound
from app.core.errors import InsufficientTerms, TooFewTerms, ValidationFailed
from app.core.poly_core import RationalPolynomial, poly_mul
from app.core.rank_engine import (
    BerlekampMassey,
    RankCertificate,
    certify,
    hankel_determinant,
    minimal_recurrence,
    rank_of_power,
    rank_of_product,
    rank_of_terms,
    strict_root_counts,
)
from app.core.sequence_core import LinRecSequence, Recurrence, char_poly, generate_terms, ones


@pytest.mark.parametrize(
    "M, coeffs",
    [
        (1, ["1", "1"]),
        (2, ["2", "2", "-1"]),
        (3, ["3", "6", "-3", "-1"]),
        (4, ["5", "15", "-15", "-5", "1"]),
    ],
)
def test_fibonacci_powers(fib, M, coeffs):
    certificate = rank_of_power(fib, M)
    assert certificate.rank == M + 1
    assert certificate.recurrence.as_strings() == coeffs
    assert certificate.transient == 0


def test_lucas_square_shares_the_recurrence(luc):
    assert rank_of_power(luc, 2).recurrence.as_strings() == ["2", "2", "-1"]


def test_constant_sequence():
    for M in range(1, 5):
        certificate = rank_of_power(ones(), M)
        assert certificate.rank == 1
        assert certificate.recurrence.as_strings() == ["1"]


def test_product_of_rank_four_and_rank_three():
    s = LinRecSequence.from_strings("0,2,0,-1", "1,1,2,1")
    t = LinRecSequence.from_strings("7,-16,12", "1,1,1")
    certificate = rank_of_product(s, t)
    assert certificate.rank == 10
    assert certificate.rank == product_rank_bound(4, 2, 3, 2)
    assert certificate.recurrence.as_strings() == [
        "0", "30", "0", "-345", "0", "1900", "0", "-5040", "0", "5184"
    ]
    expected = RationalPolynomial.from_roots([(2, 3), (-2, 3), (3, 2), (-3, 2)])
    assert char_poly(certificate.recurrence) == expected


def test_product_char_poly_factors():
    left = RationalPolynomial.from_roots([(2, 3), (3, 2)])
    right = RationalPolynomial.from_roots([(-2, 3), (-3, 2)])
    product = poly_mul(left, right)
    assert product.high_first() == [1, 0, -30, 0, 345, 0, -1900, 0, 5040, 0, -5184]


def test_berlekamp_massey_incremental():
    solver = BerlekampMassey()
    for term in [1, 2, 4, 8, 16]:
        solver.add(term)
    assert solver.length == 1
    assert solver.annihilator() == [2]


def test_transient_from_zero_root():
    certificate = minimal_recurrence([5] + [0] * 15, guard=4)
    assert certificate.rank == 0
    assert certificate.transient == 1


def test_transient_from_extra_initial_terms():
    seq = LinRecSequence(Recurrence((2,)), (7, 1))
    for M in (1, 2):
        certificate = rank_of_power(seq, M)
        assert certificate.rank == 1
        assert certificate.transient == 1
        assert certificate.recurrence.as_strings() == [str(2 ** M)]


def test_expected_transient_doubling_is_not_a_warning(caplog):
    seq = LinRecSequence(Recurrence((1, 1)), (5, 7, 0, 1))
    with caplog.at_level(logging.INFO, logger="app.core.rank_engine"):
        for M in (1, 2, 4):
            certificate = rank_of_power(seq, M)
            assert certificate.rank == M + 1
            assert certificate.transient == 2
    assert not [r for r in caplog.records if r.levelno >= logging.WARNING]


def test_zero_characteristic_root_is_stripped():
    seq = LinRecSequence(Recurrence((1, 0)), (3, 5))
    certificate = rank_of_power(seq, 1)
    assert certificate.rank == 1
    assert certificate.transient == 1


def test_zero_sequence_has_rank_zero():
    assert rank_of_terms([0] * 20).rank == 0


def test_insufficient_terms():
    with pytest.raises(InsufficientTerms) as info:
        minimal_recurrence([0, 1, 1, 2, 3], guard=10)
    assert info.value.needed == 5
    with pytest.raises(InsufficientTerms) as info:
        minimal_recurrence([0, 1, 1], guard=0)
    assert info.value.needed == 1
    assert info.value.hint


def test_guard_catches_a_short_window():
    terms = [2 ** n for n in range(10)] + [1000]
    with pytest.raises(ValidationFailed):
        minimal_recurrence(terms, guard=1)


def test_hankel_determinant():
    assert hankel_determinant([1, 1, 2], 2) == 1
    assert hankel_determinant([0, 1, 1, 2, 3], 3) == 0
    with pytest.raises(TooFewTerms):
        hankel_determinant([1, 2], 2)
    with pytest.raises(ValueError):
        hankel_determinant([1], 0)


def test_certify(fib):
    certificate = rank_of_power(fib, 2)
    terms = generate_terms(fib, 30)
    squares = [t ** 2 for t in terms]
    assert certify(certificate, squares)

    wrong = RankCertificate(
        rank=3,
        recurrence=Recurrence((2, 2, 1)),
        transient=0,
        terms_used=certificate.terms_used,
        guard_validated=certificate.guard_validated,
    )
    assert not certify(wrong, squares)

    # a non-minimal recurrence annihilates the terms but has a singular Hankel block
    padded = RankCertificate(
        rank=3,
        recurrence=Recurrence((2, 0, 0)),
        transient=0,
        terms_used=30,
        guard_validated=0,
    )
    powers = [2 ** n for n in range(30)]
    assert not certify(padded, powers)


def test_strict_root_counts():
    assert strict_root_counts(Recurrence((5, -9, 7, -2))) == (4, 2)
    assert strict_root_counts(Recurrence((1, 0))) == (1, 1)
    assert strict_root_counts(Recurrence((0, 0))) == (0, 0)


def _random_sequence(rng):
    order = rng.randint(1, 4)
    coeffs = [rng.randint(-3, 3) for _ in range(order - 1)] + [rng.choice([-3, -2, -1, 1, 2, 3])]
    init = [rng.randint(-5, 5) for _ in range(order)]
    return LinRecSequence(Recurrence(tuple(coeffs)), tuple(init))


def test_reconstruction_from_twice_the_order_plus_twelve_terms():
    rng = random.Random(2024)
    full_rank = 0
    for _ in range(200):
        seq = _random_sequence(rng)
        terms = generate_terms(seq, 2 * seq.order + 12)
        certificate = rank_of_terms(terms)
        assert certificate.rank <= seq.order
        if hankel_determinant(terms, seq.order) != 0:
            assert certificate.rank == seq.order
            assert certificate.recurrence == seq.recurrence
            full_rank += 1
        else:
            assert certificate.rank < seq.order
    assert full_rank >= 100


def test_rank_is_shift_and_scale_invariant():
    rng = random.Random(2025)
    for _ in range(200):
        seq = _random_sequence(rng)
        terms = generate_terms(seq, 2 * seq.order + 12)
        rank = rank_of_terms(terms, guard=4).rank
        assert rank_of_terms(terms[3:], guard=4).rank == rank
        assert rank_of_terms([-7 * t for t in terms], guard=4).rank == rank


def test_certificates_are_minimal():
    rng = random.Random(7)
    for _ in range(60):
        seq = _random_sequence(rng)
        terms = generate_terms(seq, 2 * seq.order + 12)
        certificate = rank_of_terms(terms)
        assert certify(certificate, terms)
        # a (rank + 1) x (rank + 1) Hankel block is singular, the rank x rank one is not
        assert hankel_determinant(terms, certificate.rank + 1) == 0


def test_product_rank_stays_within_the_bounds():
    rng = random.Random(31)
    for _ in range(40):
        a, b = _random_sequence(rng), _random_sequence(rng)
        rank = rank_of_product(a, b).rank
        r1, k1 = strict_root_counts(a.recurrence)
        r2, k2 = strict_root_counts(b.recurrence)
        assert rank <= product_rank_bound(r1, k1, r2, k2) <= a.order * b.order


def test_fibonacci_times_lucas(fib, luc):
    certificate = rank_of_product(fib, luc)
    assert certificate.rank == 2
    assert certificate.recurrence.as_strings() == ["3", "-1"]


def test_product_with_ones_keeps_the_rank(fib):
    assert rank_of_product(fib, ones()).rank == 2
    rng = random.Random(5)
    for _ in range(20):
        a = _random_sequence(rng)
        expected = rank_of_terms(generate_terms(a, 2 * a.order + 12)).rank
        assert rank_of_product(a, ones()).rank == expected


def test_power_rank_never_exceeds_the_refined_bound():
    rng = random.Random(99)
    for _ in range(40):
        order = rng.randint(1, 3)
        coeffs = [rng.randint(-2, 2) for _ in range(order - 1)] + [rng.choice([-2, -1, 1, 2])]
        init = [rng.randint(-4, 4) for _ in range(order)]
        seq = LinRecSequence(Recurrence(tuple(coeffs)), tuple(init))
        r, k = strict_root_counts(seq.recurrence)
        for M in range(1, 4):
            assert rank_of_power(seq, M).rank <= power_bound_refined(r, k, M)
