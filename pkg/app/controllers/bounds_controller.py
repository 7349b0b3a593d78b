# File: app/controllers/bounds_controller.py

import logging

from app import settings
from app.controllers.controller import Controller, parse_int_list
from app.core.bounds import (
    RootSpec,
    bound_oracle,
    power_bound_distinct,
    power_bound_refined,
    product_rank_bound,
    product_rank_bound_coarse,
)
from app.core.errors import UsageError

# Configure logging
logging.basicConfig(
    level=settings.LOG_LEVEL,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    handlers=[logging.StreamHandler()],
)
logger = logging.getLogger(__name__)

POWER_COLUMNS = ["M", "distinct", "refined", "oracle"]
PRODUCT_COLUMNS = ["r1", "k1", "r2", "k2", "refined", "coarse"]


class BoundsController(Controller):

    def setup_handler(self, subparsers):
        bounds = subparsers.add_parser("bounds", help="closed-form rank bounds for powers and products")
        bounds.add_argument("--r", dest="r", type=int, help="rank of s")
        bounds.add_argument("--k", dest="k", type=int, help="number of distinct roots of s")
        bounds.add_argument("--multiplicities", help="root multiplicities m1,...,mk (enables the multiset oracle)")
        bounds.add_argument("--mmax", type=int, default=settings.DEFAULT_MMAX)
        bounds.add_argument("--r2", type=int, help="rank of t (product bound)")
        bounds.add_argument("--k2", type=int, help="distinct roots of t (product bound)")
        self.add_output_options(bounds)
        bounds.set_defaults(handler=self.bounds)

    def bounds(self, args):
        """
        Handles `bounds`: per-M power bounds, or the product bound when
        --r2/--k2 are given.
        """
        spec = None
        if args.multiplicities:
            spec = RootSpec(tuple(parse_int_list(args.multiplicities, "multiplicities")))
            r = spec.rank if args.r is None else args.r
            k = spec.distinct_count if args.k is None else args.k
            if (r, k) != (spec.rank, spec.distinct_count):
                raise UsageError(f"--multiplicities describe r={spec.rank}, k={spec.distinct_count}")
        else:
            r, k = args.r, args.k
        if r is None or k is None:
            raise UsageError("give --r and --k, or --multiplicities")

        if args.r2 is not None or args.k2 is not None:
            if args.r2 is None or args.k2 is None:
                raise UsageError("the product bound needs both --r2 and --k2")
            record = {
                "r1": r,
                "k1": k,
                "r2": args.r2,
                "k2": args.k2,
                "refined": product_rank_bound(r, k, args.r2, args.k2),
                "coarse": product_rank_bound_coarse(r, args.r2),
            }
            self.emit([record], PRODUCT_COLUMNS, args)
            return

        if args.mmax < 1:
            raise UsageError("--mmax must be >= 1")
        records = []
        for M in range(1, args.mmax + 1):
            records.append(
                {
                    "M": M,
                    "distinct": power_bound_distinct(r, M),
                    "refined": power_bound_refined(r, k, M),
                    "oracle": bound_oracle(spec, M) if spec else None,
                }
            )
        self.emit(records, POWER_COLUMNS, args)
