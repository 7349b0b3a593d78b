# File: app/controllers/power_controller.py

import logging

from app import settings
from app.controllers.controller import Controller
from app.core.bounds import power_bound_refined, product_rank_bound
from app.core.errors import UsageError
from app.core.poly_core import format_rational
from app.core.rank_engine import hankel_determinant, rank_of_power, rank_of_product, strict_root_counts
from app.core.sequence_core import char_poly, termwise_power

# Configure logging
logging.basicConfig(
    level=settings.LOG_LEVEL,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    handlers=[logging.StreamHandler()],
)
logger = logging.getLogger(__name__)

POWER_COLUMNS = ["M", "rank", "bound", "coefficients", "characteristic", "transient", "carlitz"]
PRODUCT_COLUMNS = ["rank", "bound", "coefficients", "characteristic", "transient"]


class PowerController(Controller):
    """
    `power` and `product`: minimal recurrences of termwise powers and
    products.
    """

    def setup_handler(self, subparsers):
        power = subparsers.add_parser("power", help="minimal recurrence of s^M")
        self.add_sequence_options(power)
        power.add_argument("--M", dest="M", type=int, required=True, help="exponent M >= 1")
        power.add_argument("--carlitz", action="store_true", help="add the M x M Hankel determinant of s^M")
        self.add_window_options(power)
        self.add_output_options(power)
        power.set_defaults(handler=self.power)

        product = subparsers.add_parser("product", help="minimal recurrence of s * t")
        self.add_sequence_options(product)
        self.add_sequence_options(product, suffix="2")
        self.add_window_options(product)
        self.add_output_options(product)
        product.set_defaults(handler=self.product)

    def power(self, args):
        """
        Handles `power`: the minimal recurrence of s^M with its bound.
        """
        if args.M < 1:
            raise UsageError("--M must be >= 1")
        seq = self.sequence_from_args(args)
        certificate = rank_of_power(seq, args.M, args.guard)
        r, k = strict_root_counts(seq.recurrence)
        record = {
            "M": args.M,
            "rank": certificate.rank,
            "bound": power_bound_refined(r, k, args.M),
            "coefficients": certificate.recurrence.as_strings(),
            "characteristic": str(char_poly(certificate.recurrence)),
            "transient": certificate.transient,
            "carlitz": None,
        }
        if args.carlitz:
            terms = termwise_power(seq.stream(), args.M, 2 * args.M - 1).prefix(2 * args.M - 1)
            record["carlitz"] = format_rational(hankel_determinant(terms, args.M))
        self.emit([record], POWER_COLUMNS, args)

    def product(self, args):
        """
        Handles `product`: the minimal recurrence of the termwise product.
        """
        a = self.sequence_from_args(args)
        b = self.sequence_from_args(args, suffix="2")
        certificate = rank_of_product(a, b, args.guard)
        r1, k1 = strict_root_counts(a.recurrence)
        r2, k2 = strict_root_counts(b.recurrence)
        record = {
            "rank": certificate.rank,
            "bound": product_rank_bound(r1, k1, r2, k2),
            "coefficients": certificate.recurrence.as_strings(),
            "characteristic": str(char_poly(certificate.recurrence)),
            "transient": certificate.transient,
        }
        logger.info(f"Product of {a} and {b} has rank {certificate.rank}")
        self.emit([record], PRODUCT_COLUMNS, args)
