# File: app/core/sequence_core.py

"""
Constant-recursive sequences, exact term generation, and termwise products
and powers.

Coefficients are stored highest-shift first, (c_{r-1}, ..., c_1, c_0), so
that s(n + r) = c_{r-1} s(n + r - 1) + ... + c_0 s(n). Every I/O format uses
the same order.

Concurrency: a TermStream guards its memoized prefix with a lock, so several
threads may read and extend the same stream. Search workers run in separate
processes and build their own streams from plain (coeffs, init) data.
"""

import logging
import threading
from dataclasses import dataclass, field

from app import settings
from app.core.errors import NotMonic, ParseError, TooFewTerms
from app.core.poly_core import (
    ONE,
    ZERO,
    RationalPolynomial,
    format_rational,
    parse_rational_list,
    to_rational,
)

logging.basicConfig(
    level=settings.LOG_LEVEL,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    handlers=[logging.StreamHandler()],
)
logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Recurrence:
    """
    s(n + r) = coeffs[0] s(n + r - 1) + ... + coeffs[r - 1] s(n).
    """

    coeffs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(to_rational(c) for c in self.coeffs))

    @property
    def order(self) -> int:
        return len(self.coeffs)

    @property
    def is_strict(self) -> bool:
        """True when c_0 != 0 (or the recurrence is empty)."""
        return self.order == 0 or self.coeffs[-1] != 0

    def validate_strict(self) -> "Recurrence":
        if self.order == 0:
            raise ParseError("a recurrence needs at least one coefficient")
        if not self.is_strict:
            raise ParseError("c0 must be nonzero")
        return self

    def next_term(self, window):
        """The term that follows `window` (the last `order` terms, oldest first)."""
        total = ZERO
        for c, value in zip(self.coeffs, reversed(window)):
            total += c * value
        return total

    def residual(self, terms, index):
        """terms[index + r] minus what the recurrence predicts from terms[index:index + r]."""
        r = self.order
        return terms[index + r] - self.next_term(terms[index:index + r])

    def as_strings(self) -> list:
        return [format_rational(c) for c in self.coeffs]

    def __str__(self):
        return "(" + ", ".join(self.as_strings()) + ")"


def char_poly(rec: Recurrence) -> RationalPolynomial:
    """x^r - (c_{r-1} x^{r-1} + ... + c_0), monic of degree r."""
    high_first = [ONE] + [-c for c in rec.coeffs]
    return RationalPolynomial.from_high_first(high_first)


def recurrence_from_char_poly(p: RationalPolynomial) -> Recurrence:
    if p.degree < 1 or not p.is_monic:
        raise NotMonic(f"expected a monic polynomial of degree >= 1, got {p}")
    return Recurrence(tuple(-c for c in p.high_first()[1:]))


class TermStream:
    """
    Lazily extended, memoized list of exact terms.
    Subclasses implement `_compute(start, stop)` which returns the terms with
    indices start..stop-1, given that every earlier term is already cached.
    """

    def __init__(self, source=None):
        self.source = source
        self._terms = []
        self._lock = threading.Lock()

    def _compute(self, start, stop):
        raise NotImplementedError

    def prefix(self, n: int) -> list:
        """First n terms (a copy)."""
        if n < 0:
            raise ValueError("n must be >= 0")
        with self._lock:
            if len(self._terms) < n:
                self._terms.extend(self._compute(len(self._terms), n))
            return list(self._terms[:n])

    def __getitem__(self, index):
        return self.prefix(index + 1)[index]

    @property
    def cached(self) -> int:
        return len(self._terms)


class SequenceStream(TermStream):

    def __init__(self, sequence: "LinRecSequence"):
        super().__init__(source=sequence)
        self.recurrence = sequence.recurrence
        self.initial_terms = sequence.initial_terms

    def _compute(self, start, stop):
        known = list(self._terms)
        r = self.recurrence.order
        for index in range(start, stop):
            if index < len(self.initial_terms):
                known.append(self.initial_terms[index])
            elif r == 0:
                known.append(ZERO)
            else:
                known.append(self.recurrence.next_term(known[index - r:index]))
        return known[start:stop]


class ListStream(TermStream):
    """A finite list of terms (b-files, test fixtures)."""

    def __init__(self, terms, source=None):
        super().__init__(source=source if source is not None else "list")
        self._data = [to_rational(t) for t in terms]

    def _compute(self, start, stop):
        if stop > len(self._data):
            raise TooFewTerms(
                f"the stream only has {len(self._data)} terms, {stop} were requested"
            )
        return self._data[start:stop]


class ProductStream(TermStream):

    def __init__(self, a: TermStream, b: TermStream):
        super().__init__(source=("product", a.source, b.source))
        self.a = a
        self.b = b

    def _compute(self, start, stop):
        left = self.a.prefix(stop)[start:]
        right = self.b.prefix(stop)[start:]
        return [x * y for x, y in zip(left, right)]


class PowerStream(TermStream):

    def __init__(self, a: TermStream, M: int):
        super().__init__(source=("power", a.source, M))
        self.a = a
        self.M = M

    def _compute(self, start, stop):
        return [x ** self.M for x in self.a.prefix(stop)[start:]]


@dataclass
class LinRecSequence:
    """
    A recurrence plus its initial block. `initial_terms` may hold more terms
    than the order; the extra ones are trusted as given and model transients.
    """

    recurrence: Recurrence
    initial_terms: tuple
    label: str = None
    _stream: TermStream = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        self.initial_terms = tuple(to_rational(t) for t in self.initial_terms)
        if len(self.initial_terms) < self.recurrence.order:
            raise ParseError(
                f"{self.recurrence.order} initial terms are needed, got {len(self.initial_terms)}"
            )

    @classmethod
    def from_strings(cls, coeffs, init, label=None) -> "LinRecSequence":
        return cls(Recurrence(tuple(parse_rational_list(coeffs))), tuple(parse_rational_list(init)), label)

    @classmethod
    def from_literal(cls, literal: dict) -> "LinRecSequence":
        """Reads {"coeffs": ["5", "-9", ...], "init": ["1", ...]}."""
        try:
            coeffs = literal["coeffs"]
            init = literal["init"]
        except (KeyError, TypeError):
            raise ParseError('a sequence literal needs "coeffs" and "init" lists')
        return cls(
            Recurrence(tuple(to_rational(str(c)) for c in coeffs)),
            tuple(to_rational(str(t)) for t in init),
            literal.get("label"),
        )

    def to_literal(self) -> dict:
        literal = {
            "coeffs": self.recurrence.as_strings(),
            "init": [format_rational(t) for t in self.initial_terms],
        }
        if self.label:
            literal["label"] = self.label
        return literal

    @property
    def order(self) -> int:
        return self.recurrence.order

    @property
    def transient_allowance(self) -> int:
        """
        Terms that may precede the eventual recurrence: extra initial terms
        plus the multiplicity of 0 as a characteristic root.
        """
        extra = len(self.initial_terms) - self.order
        return extra + char_poly(self.recurrence).trailing_zero_count()

    def stream(self) -> TermStream:
        if self._stream is None:
            self._stream = SequenceStream(self)
        return self._stream

    def __str__(self):
        name = f"{self.label} " if self.label else ""
        init = ", ".join(format_rational(t) for t in self.initial_terms)
        return f"{name}{self.recurrence} / ({init})"


def generate_terms(seq: LinRecSequence, n: int) -> list:
    return seq.stream().prefix(n)


def termwise_product(a: TermStream, b: TermStream, n: int) -> TermStream:
    """Stream of a[i] * b[i]; the first n terms are materialized."""
    stream = ProductStream(a, b)
    stream.prefix(n)
    return stream


def termwise_power(a: TermStream, M: int, n: int) -> TermStream:
    """Stream of a[i] ** M; the first n terms are materialized."""
    if M < 1:
        raise ValueError(f"the exponent must be >= 1, got {M}")
    stream = PowerStream(a, M)
    stream.prefix(n)
    return stream


def fibonacci() -> LinRecSequence:
    return LinRecSequence(Recurrence((1, 1)), (0, 1), "fibonacci")


def lucas() -> LinRecSequence:
    return LinRecSequence(Recurrence((1, 1)), (2, 1), "lucas")


def ones() -> LinRecSequence:
    return LinRecSequence(Recurrence((1,)), (1,), "ones")
