# File: app/controllers/explorer_controller.py

import logging

from app import settings
from app.controllers.controller import Controller, parse_int_list, parse_range
from app.core.errors import UsageError
from app.core.rank_explorer import CLASSIFICATIONS, SearchFilters, fit_quasi_polynomial, search

# Configure logging
logging.basicConfig(
    level=settings.LOG_LEVEL,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    handlers=[logging.StreamHandler()],
)
logger = logging.getLogger(__name__)

SEARCH_COLUMNS = ["coefficients", "ranks", "polynomial", "classification", "distinct_roots", "bound_attaining", "init"]
FIT_COLUMNS = ["period", "polynomial", "onset", "degree"]


class ExplorerController(Controller):
    """
    `search` over integer recurrences and `fit` of eventual polynomials.
    """

    def setup_handler(self, subparsers):
        finder = subparsers.add_parser("search", help="distinct rank sequences over a coefficient range")
        finder.add_argument("--rank", type=int, required=True)
        finder.add_argument("--coeff-range", default="-3,3", help="lo,hi for every coefficient")
        finder.add_argument("--init-range", help="lo,hi: also try every initial vector in this range (particular rows)")
        finder.add_argument("--extra", action="append", default=[], help="extra coefficient tuple, e.g. 4,11,-30")
        finder.add_argument("--mmax", type=int, default=settings.DEFAULT_MMAX)
        finder.add_argument("--trials", type=int, default=settings.DEFAULT_TRIALS)
        finder.add_argument("--height", type=int, default=settings.DEFAULT_HEIGHT)
        finder.add_argument("--seed", type=int, default=settings.DEFAULT_SEED)
        finder.add_argument("--budget", type=int, default=settings.DEFAULT_BUDGET)
        finder.add_argument("--workers", type=int, help="worker processes (capped by CRSEQ_THREADS)")
        finder.add_argument("--distinct-roots", type=int, help="keep rows with exactly this many distinct roots")
        finder.add_argument("--bound-attaining-only", action="store_true")
        finder.add_argument("--classification", choices=CLASSIFICATIONS)
        finder.add_argument("--include-bound-rows", action="store_true", help="add the prime-root rows for every k")
        finder.add_argument("--progress", action="store_true", help="progress bar on stderr")
        self.add_window_options(finder)
        self.add_output_options(finder)
        finder.set_defaults(handler=self.search)

        fit = subparsers.add_parser("fit", help="eventual (quasi-)polynomial of a rank sequence")
        fit.add_argument("--ranks", required=True, help="comma-separated ranks for M = 1, 2, ...")
        fit.add_argument("--max-period", type=int, default=4)
        fit.add_argument("--window", type=int, default=3)
        fit.add_argument("--max-degree", type=int, default=4)
        self.add_output_options(fit)
        fit.set_defaults(handler=self.fit)

    def search(self, args):
        """
        Handles `search`: one row per distinct rank sequence, sorted by the
        fitted polynomial.
        """
        if args.mmax < 1:
            raise UsageError("--mmax must be >= 1")
        rows = search(
            rank=args.rank,
            coeff_range=parse_range(args.coeff_range, "--coeff-range"),
            init_range=parse_range(args.init_range, "--init-range") if args.init_range else None,
            mmax=args.mmax,
            filters=SearchFilters(
                distinct_roots=args.distinct_roots,
                bound_attaining_only=args.bound_attaining_only,
                classification=args.classification,
            ),
            trials=args.trials,
            height=args.height,
            seed=args.seed,
            guard=args.guard,
            budget=args.budget,
            workers=args.workers,
            include_bound_rows=args.include_bound_rows,
            extra_coeffs=[parse_int_list(e, "--extra") for e in args.extra],
            progress=args.progress,
        )
        self.emit([row.to_record() for row in rows], SEARCH_COLUMNS, args)

    def fit(self, args):
        """
        Handles `fit`. An empty polynomial cell means no fit was found.
        """
        ranks = parse_int_list(args.ranks, "--ranks")
        if not ranks:
            raise UsageError("--ranks is empty")
        fitted = fit_quasi_polynomial(ranks, args.max_period, args.window, args.max_degree)
        record = {
            "period": fitted.period if fitted else None,
            "polynomial": str(fitted) if fitted else None,
            "onset": fitted.onset if fitted else None,
            "degree": fitted.degree if fitted else None,
        }
        self.emit([record], FIT_COLUMNS, args)
