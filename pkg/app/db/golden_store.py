# File: app/db/golden_store.py

import json
import logging
import os
from dataclasses import dataclass

from sympy import sympify

from app import settings
from app.core.errors import ParseError, UsageError
from app.core.poly_core import to_rational
from app.core.rank_explorer import M_SYMBOL

# Configure logging
logging.basicConfig(
    level=settings.LOG_LEVEL,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    handlers=[logging.StreamHandler()],
)
logger = logging.getLogger(__name__)

RANK_TABLES = ("table1", "appendix4", "appendix5")
TABLE_IDS = ("table1", "table2", "appendix4", "appendix5")


@dataclass(frozen=True)
class GoldenRow:
    """
    A published rank-sequence row. `ranks[M - 1]` is None where the
    published listing skips M.
    """

    coeffs: tuple
    ranks: tuple
    polynomial: str
    bold: bool = False

    @property
    def expression(self):
        return sympify(self.polynomial, locals={"M": M_SYMBOL})

    def published(self, mmax: int = None) -> dict:
        """{M: rank} for the listed M (up to mmax)."""
        return {
            M: rank
            for M, rank in enumerate(self.ranks, start=1)
            if rank is not None and (mmax is None or M <= mmax)
        }

    @property
    def onset(self) -> int:
        """
        Smallest M from which every listed rank agrees with the published
        polynomial; one past the last listed M when even that one disagrees.
        """
        expr = self.expression
        listed = sorted(self.published().items())
        onset = listed[-1][0] + 1
        for M, rank in reversed(listed):
            if expr.subs(M_SYMBOL, M) != rank:
                break
            onset = M
        return onset


@dataclass(frozen=True)
class PowerRecurrenceRow:
    M: int
    coeffs: tuple


class GoldenStore:
    """
    Read-only access to the published tables shipped in the data directory.
    """

    def __init__(self, data_dir=None):
        """
        Initialize the store with the directory that holds the table files.
        """
        self.data_dir = data_dir or settings.DATA_DIR
        self._cache = {}

    def _load(self, table_id: str) -> dict:
        if table_id not in TABLE_IDS:
            raise UsageError(f"unknown table {table_id!r}; expected one of {', '.join(TABLE_IDS)}")
        if table_id not in self._cache:
            path = os.path.join(self.data_dir, f"{table_id}.json")
            try:
                with open(path, "r", encoding="utf-8") as f:
                    self._cache[table_id] = json.load(f)
                logger.info(f"Loaded golden table {table_id} from {path}")
            except (OSError, json.JSONDecodeError) as e:
                logger.error(f"Failed to load golden table {table_id} from {path}: {e}")
                raise
        return self._cache[table_id]

    def title(self, table_id: str) -> str:
        return self._load(table_id).get("title", table_id)

    def rank_rows(self, table_id: str) -> list:
        """Rows of table1, appendix4 or appendix5."""
        if table_id not in RANK_TABLES:
            raise UsageError(f"{table_id} does not list rank sequences")
        return [
            GoldenRow(
                coeffs=tuple(row["coeffs"]),
                ranks=tuple(row["ranks"]),
                polynomial=row["polynomial"],
                bold=row.get("bold", False),
            )
            for row in self._load(table_id)["rows"]
        ]

    def power_recurrences(self):
        """(sequence literal, rows) of the minimal recurrences of the first powers."""
        data = self._load("table2")
        rows = [PowerRecurrenceRow(M=row["M"], coeffs=tuple(row["coeffs"])) for row in data["rows"]]
        return data["sequence"], rows


def read_bfile(path: str) -> list:
    """
    Terms of an OEIS b-file ("n a(n)" per line, '#' comments). The indices
    must be consecutive.
    """
    terms, previous = [], None
    try:
        with open(path, "r", encoding="utf-8") as f:
            for number, line in enumerate(f, start=1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                parts = line.split()
                if len(parts) < 2:
                    raise ParseError(f"{path}:{number}: expected 'n a(n)', got {line!r}")
                index = int(parts[0])
                if previous is not None and index != previous + 1:
                    raise ParseError(f"{path}:{number}: index {index} does not follow {previous}")
                previous = index
                terms.append(to_rational(parts[1]))
    except OSError as e:
        logger.error(f"Failed to read b-file {path}: {e}")
        raise UsageError(f"cannot read b-file {path}: {e}")
    except ValueError as e:
        if isinstance(e, ParseError):
            raise
        raise ParseError(f"{path}: {e}")
    logger.info(f"Read {len(terms)} terms from {path}")
    return terms
