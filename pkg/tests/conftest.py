import pytest

from app.core.sequence_core import LinRecSequence, Recurrence, fibonacci, lucas
from app.db.golden_store import GoldenStore


@pytest.fixture
def fib():
    return fibonacci()


@pytest.fixture
def luc():
    return lucas()


@pytest.fixture
def cubed_one():
    """(x - 1)^3 (x - 2): rank sequence (M + 1)^2."""
    return LinRecSequence.from_strings("5,-9,7,-2", "1,1,2,1")


@pytest.fixture
def quarter_turn():
    """s(n + 2) = -s(n): 1, 1, -1, -1, ..."""
    return LinRecSequence(Recurrence((0, -1)), (1, 1))


@pytest.fixture
def store():
    return GoldenStore()
