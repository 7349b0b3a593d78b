# File: app/controllers/reproduce_controller.py

import logging

from tqdm import tqdm

from app import settings
from app.controllers.controller import EXIT_COMPUTATION, Controller
from app.core.errors import BudgetExceeded, UsageError
from app.core.rank_engine import rank_of_power
from app.core.rank_explorer import M_SYMBOL, fit_quasi_polynomial, generic_rank_sequence
from app.core.sequence_core import LinRecSequence, Recurrence
from app.db.golden_store import TABLE_IDS, GoldenStore

# Configure logging
logging.basicConfig(
    level=settings.LOG_LEVEL,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    handlers=[logging.StreamHandler()],
)
logger = logging.getLogger(__name__)

SHALLOW_MMAX = 6

RANK_COLUMNS = [
    "coefficients",
    "published",
    "computed",
    "ranks_status",
    "polynomial",
    "fitted",
    "polynomial_status",
]
RECURRENCE_COLUMNS = ["M", "published", "computed", "status"]

MATCH = "match"
MISMATCH = "mismatch"
UNDETERMINED = "undetermined"


def compare_row(row, computed) -> dict:
    """
    Compares recomputed ranks (M = 1..len(computed)) with a published row.
    The polynomial is judged on the computed ranks from the row's onset on;
    fewer than two of them leave it undetermined.
    """
    mmax = len(computed)
    published = row.published(mmax)
    ranks_status = MATCH if all(computed[M - 1] == rank for M, rank in published.items()) else MISMATCH

    expr = row.expression
    tail = list(range(row.onset, mmax + 1))
    if len(tail) < 2:
        polynomial_status = UNDETERMINED
    elif all(expr.subs(M_SYMBOL, M) == computed[M - 1] for M in tail):
        polynomial_status = MATCH
    else:
        polynomial_status = MISMATCH

    fitted = fit_quasi_polynomial(computed)
    return {
        "coefficients": list(row.coeffs),
        "published": [published.get(M) for M in range(1, mmax + 1)],
        "computed": list(computed),
        "ranks_status": ranks_status,
        "polynomial": row.polynomial,
        "fitted": str(fitted) if fitted else None,
        "polynomial_status": polynomial_status,
    }


class ReproduceController(Controller):
    """
    `reproduce`: recomputes a published table and diffs it row by row.
    """

    def __init__(self, store: GoldenStore = None, **kwargs):
        super().__init__(**kwargs)
        self.store = store or GoldenStore()

    def setup_handler(self, subparsers):
        reproduce = subparsers.add_parser("reproduce", help="recompute a published table and report differences")
        reproduce.add_argument("table", choices=TABLE_IDS)
        reproduce.add_argument("--deep", action="store_true", help=f"allow M beyond {SHALLOW_MMAX} for the appendix tables")
        reproduce.add_argument("--mmax", type=int, help="largest M to recompute")
        reproduce.add_argument("--trials", type=int, default=settings.DEFAULT_TRIALS)
        reproduce.add_argument("--height", type=int, default=settings.DEFAULT_HEIGHT)
        reproduce.add_argument("--seed", type=int, default=settings.DEFAULT_SEED)
        reproduce.add_argument("--progress", action="store_true", help="progress bar on stderr")
        self.add_window_options(reproduce)
        self.add_output_options(reproduce)
        reproduce.set_defaults(handler=self.reproduce)

    def reproduce(self, args):
        """
        Handles `reproduce`. Exits with 2 when any row disagrees.
        """
        if args.table == "table2":
            records = self.reproduce_recurrences(args)
            failed = any(r["status"] == MISMATCH for r in records)
            self.emit(records, RECURRENCE_COLUMNS, args)
        else:
            records = self.reproduce_ranks(args)
            failed = any(
                r["ranks_status"] == MISMATCH or r["polynomial_status"] == MISMATCH for r in records
            )
            self.emit(records, RANK_COLUMNS, args)
        if failed:
            self.stderr.write(f"{args.table}: some rows do not match the published values\n")
            return EXIT_COMPUTATION
        logger.info(f"{args.table}: every row matches")
        return None

    def _depth(self, args, rows) -> int:
        longest = max(len(row.ranks) for row in rows)
        if args.table == "table1":
            mmax = args.mmax or longest
        elif args.mmax is None:
            mmax = longest if args.deep else SHALLOW_MMAX
        else:
            mmax = args.mmax
            if mmax > SHALLOW_MMAX and not args.deep:
                raise BudgetExceeded(
                    f"{args.table} beyond M={SHALLOW_MMAX} is expensive",
                    hint="pass --deep to recompute the appendix at full depth",
                )
        if mmax < 1:
            raise UsageError("--mmax must be >= 1")
        return mmax

    def reproduce_ranks(self, args) -> list:
        rows = self.store.rank_rows(args.table)
        mmax = self._depth(args, rows)
        logger.info(f"Reproducing {len(rows)} rows of {args.table} up to M={mmax}")
        records = []
        for row in tqdm(rows, desc=args.table, disable=not args.progress):
            computed = generic_rank_sequence(
                Recurrence(row.coeffs), mmax, args.trials, args.height, args.seed, args.guard
            )
            record = compare_row(row, computed)
            if record["ranks_status"] == MISMATCH:
                logger.warning(f"{args.table} row {row.coeffs}: computed {computed}, published {record['published']}")
            records.append(record)
        return records

    def reproduce_recurrences(self, args) -> list:
        literal, rows = self.store.power_recurrences()
        seq = LinRecSequence.from_literal(literal)
        records = []
        for row in rows:
            if args.mmax is not None and row.M > args.mmax:
                continue
            certificate = rank_of_power(seq, row.M, args.guard)
            computed = certificate.recurrence.as_strings()
            published = [str(c) for c in row.coeffs]
            records.append(
                {
                    "M": row.M,
                    "published": published,
                    "computed": computed,
                    "status": MATCH if computed == published else MISMATCH,
                }
            )
        return records
