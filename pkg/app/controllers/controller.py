# File: app/controllers/controller.py

import json
import logging
import sys

from app import settings
from app.core.errors import ComputationError, CrseqError, ParseError, UsageError
from app.core.sequence_core import LinRecSequence
from app.db.golden_store import read_bfile
from app.views.table_view import FORMATS, TableView

# Configure logging
logging.basicConfig(
    level=settings.LOG_LEVEL,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    handlers=[logging.StreamHandler()],
)
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_COMPUTATION = 2


def parse_range(text, name="range"):
    """Parses "lo,hi" (or "lo:hi") into an integer pair."""
    parts = str(text).replace(":", ",").split(",")
    try:
        low, high = (int(p) for p in parts)
    except ValueError:
        raise UsageError(f"{name} must look like 'lo,hi', got {text!r}")
    if low > high:
        raise UsageError(f"{name} {text!r} is empty")
    return low, high


def parse_int_list(text, name="list"):
    try:
        return [int(p) for p in str(text).replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"{name} must be a list of integers, got {text!r}")


def parse_matrix(text):
    """Parses "a,b,c;d,e,f" into a list of integer rows."""
    rows = [parse_int_list(row, "matrix row") for row in str(text).split(";") if row.strip()]
    if not rows:
        raise UsageError("the matrix is empty")
    if len({len(row) for row in rows}) != 1:
        raise UsageError("matrix rows must have equal length")
    return rows


class Controller:
    """
    Base controller shared by the command families. Subclasses register
    their subcommands in `setup_handler` and point each at a handler that
    returns a list of records.
    """

    application = None

    def __init__(self, stdout=None, stderr=None):
        self.stdout = stdout or sys.stdout
        self.stderr = stderr or sys.stderr
        logger.info(f"Initializing {type(self).__name__}...")

    def setup_handler(self, subparsers):
        raise NotImplementedError

    def add_output_options(self, parser):
        parser.add_argument("--format", choices=FORMATS, default="tsv", help="output format (default tsv)")
        parser.add_argument("--out", help="write the table to this path instead of stdout")

    def add_sequence_options(self, parser, suffix="", required=True):
        """--coeffs/--init (or --seq JSON file) describing one sequence."""
        parser.add_argument(f"--coeffs{suffix}", help="recurrence coefficients c_{r-1},...,c_0")
        parser.add_argument(f"--init{suffix}", help="initial terms s(0),...")
        parser.add_argument(f"--seq{suffix}", help="JSON file holding a sequence literal")

    def add_window_options(self, parser):
        parser.add_argument("--guard", type=int, default=settings.DEFAULT_GUARD, help="extra validation terms")

    def sequence_from_args(self, args, suffix="") -> LinRecSequence:
        key = suffix.lstrip("-").replace("-", "_")
        coeffs = getattr(args, f"coeffs{key}", None)
        init = getattr(args, f"init{key}", None)
        path = getattr(args, f"seq{key}", None)
        if path:
            try:
                with open(path, "r", encoding="utf-8") as f:
                    seq = LinRecSequence.from_literal(json.load(f))
            except OSError as e:
                raise UsageError(f"cannot read {path}: {e}")
            except json.JSONDecodeError as e:
                raise ParseError(f"{path} is not valid JSON: {e}")
        elif coeffs is not None and init is not None:
            seq = LinRecSequence.from_strings(coeffs, init)
        else:
            raise UsageError(f"give --coeffs{suffix} and --init{suffix}, or --seq{suffix}")
        seq.recurrence.validate_strict()
        return seq

    def terms_from_bfile(self, path) -> list:
        return read_bfile(path)

    def emit(self, records, columns, args):
        view = TableView(records, columns)
        view.write(fmt=getattr(args, "format", "tsv"), out=getattr(args, "out", None), stream=self.stdout)

    def report_error(self, e: Exception):
        self.stderr.write(f"error: {e}\n")
        hint = getattr(e, "hint", None)
        if hint:
            self.stderr.write(f"hint: {hint}\n")

    def run(self, handler, args) -> int:
        """
        Runs a handler and maps its outcome to an exit status:
        0 success, 1 bad input, 2 computation failure.
        """
        try:
            status = handler(args)
            return EXIT_OK if status is None else status
        except ComputationError as e:
            logger.error(f"Computation failed: {e}")
            self.report_error(e)
            return EXIT_COMPUTATION
        except (CrseqError, ValueError) as e:
            logger.error(f"Invalid input: {e}")
            self.report_error(e)
            return EXIT_USAGE
