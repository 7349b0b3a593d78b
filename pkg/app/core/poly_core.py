# File: app/core/poly_core.py

"""
Exact rational scalars and dense rational polynomials.

Scalars are elements of sympy's QQ domain (gmpy2's mpq when gmpy2 is
installed, sympy's PythonMPQ otherwise); both are always in lowest terms with
a positive denominator. Polynomials delegate their arithmetic to
`sympy.Poly` over QQ.
"""

import logging
from dataclasses import dataclass
from math import comb

from sympy import Poly, Rational, Symbol
from sympy.polys.domains import QQ
from sympy.polys.polyerrors import CoercionFailed

from app import settings
from app.core.errors import BothZero, ParseError, ZeroPolynomial

logging.basicConfig(
    level=settings.LOG_LEVEL,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    handlers=[logging.StreamHandler()],
)
logger = logging.getLogger(__name__)

X = Symbol("x")

ZERO = QQ(0)
ONE = QQ(1)


def to_rational(value):
    """
    Converts ints, QQ elements, sympy Rationals and "p/q" strings to QQ.
    """
    if isinstance(value, QQ.dtype):
        return value
    if isinstance(value, bool):
        raise ParseError(f"not a rational number: {value!r}")
    if isinstance(value, int):
        return QQ(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            return QQ.from_sympy(Rational(text))
        except (TypeError, ValueError, SyntaxError, ZeroDivisionError, CoercionFailed) as e:
            raise ParseError(f"not a rational number: {value!r} ({e})")
    try:
        return QQ.from_sympy(Rational(value))
    except (TypeError, ValueError, CoercionFailed) as e:
        raise ParseError(f"not a rational number: {value!r} ({e})")


def parse_rational(text):
    return to_rational(str(text))


def parse_rational_list(text):
    """Parses "5,-9,7,-2" (commas or whitespace) into a list of rationals."""
    parts = [p for p in str(text).replace(",", " ").split() if p]
    return [parse_rational(p) for p in parts]


def format_rational(value) -> str:
    """Renders integers without a denominator, others as "p/q"."""
    value = to_rational(value)
    numerator, denominator = QQ.numer(value), QQ.denom(value)
    if denominator == 1:
        return str(int(numerator))
    return f"{int(numerator)}/{int(denominator)}"


def is_integral(value) -> bool:
    return QQ.denom(to_rational(value)) == 1


@dataclass(frozen=True)
class RationalPolynomial:
    """
    Dense univariate polynomial with rational coefficients.
    `coefficients[i]` is the coefficient of x**i; the highest stored entry is
    nonzero, and the zero polynomial is the empty tuple.
    """

    coefficients: tuple = ()

    def __post_init__(self):
        coefficients = [to_rational(c) for c in self.coefficients]
        while coefficients and coefficients[-1] == 0:
            coefficients.pop()
        object.__setattr__(self, "coefficients", tuple(coefficients))

    @classmethod
    def from_poly(cls, poly: Poly) -> "RationalPolynomial":
        if poly.is_zero:
            return cls(())
        high_first = [QQ.from_sympy(c) for c in poly.all_coeffs()]
        return cls(tuple(reversed(high_first)))

    @classmethod
    def from_high_first(cls, coefficients) -> "RationalPolynomial":
        return cls(tuple(reversed([to_rational(c) for c in coefficients])))

    @classmethod
    def from_roots(cls, roots) -> "RationalPolynomial":
        """
        Monic polynomial with the given roots; `roots` is either a list of
        roots (repeated for multiplicity) or a list of (root, multiplicity).
        """
        result = cls((ONE,))
        for item in roots:
            if isinstance(item, tuple):
                root, multiplicity = item
            else:
                root, multiplicity = item, 1
            factor = cls((-to_rational(root), ONE))
            for _ in range(multiplicity):
                result = poly_mul(result, factor)
        return result

    def to_poly(self) -> Poly:
        high_first = [Rational(int(QQ.numer(c)), int(QQ.denom(c))) for c in reversed(self.coefficients)]
        return Poly(high_first or [0], X, domain=QQ)

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coefficients) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coefficients

    @property
    def leading_coefficient(self):
        return self.coefficients[-1] if self.coefficients else ZERO

    @property
    def is_monic(self) -> bool:
        return self.leading_coefficient == 1

    def high_first(self) -> list:
        return list(reversed(self.coefficients))

    def monic(self) -> "RationalPolynomial":
        if self.is_zero:
            raise ZeroPolynomial("the zero polynomial has no monic associate")
        lead = self.leading_coefficient
        return RationalPolynomial(tuple(c / lead for c in self.coefficients))

    def derivative(self) -> "RationalPolynomial":
        return RationalPolynomial(
            tuple(QQ(i) * c for i, c in enumerate(self.coefficients) if i > 0)
        )

    def evaluate(self, value):
        value = to_rational(value)
        result = ZERO
        for c in reversed(self.coefficients):
            result = result * value + c
        return result

    def exact_divide(self, divisor: "RationalPolynomial") -> "RationalPolynomial":
        """Quotient of an exact division; raises if the remainder is nonzero."""
        if divisor.is_zero:
            raise ZeroPolynomial("division by the zero polynomial")
        return RationalPolynomial.from_poly(self.to_poly().exquo(divisor.to_poly()))

    def divides(self, other: "RationalPolynomial") -> bool:
        if self.is_zero:
            return other.is_zero
        _, remainder = other.to_poly().div(self.to_poly())
        return remainder.is_zero

    def trailing_zero_count(self) -> int:
        """Multiplicity of 0 as a root (number of low-order zero coefficients)."""
        count = 0
        for c in self.coefficients:
            if c != 0:
                break
            count += 1
        return count

    def distinct_root_count(self) -> int:
        """Number of distinct complex roots."""
        return squarefree_part(self).degree

    def rational_roots(self):
        """
        The distinct roots when every root of the polynomial is rational,
        sorted; None when some root is irrational or complex.
        """
        if self.is_zero:
            raise ZeroPolynomial("the zero polynomial has every number as a root")
        roots = self.to_poly().ground_roots()
        if sum(roots.values()) != self.degree:
            return None
        return sorted(QQ.from_sympy(r) for r in roots)

    def __mul__(self, other):
        return poly_mul(self, other)

    def __str__(self):
        if self.is_zero:
            return "0"
        return str(self.to_poly().as_expr())


def poly_mul(a: RationalPolynomial, b: RationalPolynomial) -> RationalPolynomial:
    if a.is_zero or b.is_zero:
        return RationalPolynomial(())
    return RationalPolynomial.from_poly(a.to_poly().mul(b.to_poly()))


def poly_gcd(a: RationalPolynomial, b: RationalPolynomial) -> RationalPolynomial:
    """Monic greatest common divisor."""
    if a.is_zero and b.is_zero:
        raise BothZero("gcd(0, 0) is undefined")
    return RationalPolynomial.from_poly(a.to_poly().gcd(b.to_poly())).monic()


def squarefree_part(p: RationalPolynomial) -> RationalPolynomial:
    """
    p / gcd(p, p'), made monic. Its degree is the number of distinct complex
    roots of p.
    """
    if p.is_zero:
        raise ZeroPolynomial("the zero polynomial has no squarefree part")
    if p.degree == 0:
        return RationalPolynomial((ONE,))
    g = poly_gcd(p, p.derivative())
    return p.exact_divide(g).monic()


def binomial(n: int, k: int) -> int:
    """Binomial coefficient, 0 outside 0 <= k <= n."""
    if k < 0 or n < 0 or k > n:
        return 0
    return comb(n, k)
