# File: app/controllers/rank_controller.py

import logging

from app import settings
from app.controllers.controller import Controller
from app.core.errors import UsageError
from app.core.poly_core import parse_rational_list
from app.core.rank_engine import certify, rank_of_power, rank_of_terms
from app.core.rank_explorer import (
    classify,
    fit_quasi_polynomial,
    generic_rank_sequence,
    probe_eventual_polynomial,
    rank_sequence,
    rank_sequence_of_terms,
)

# Configure logging
logging.basicConfig(
    level=settings.LOG_LEVEL,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    handlers=[logging.StreamHandler()],
)
logger = logging.getLogger(__name__)

RANK_COLUMNS = ["rank", "coefficients", "transient", "terms_used", "guard_validated", "certified"]
PROFILE_COLUMNS = ["ranks", "bounds", "transients", "polynomial", "classification", "generic"]


class RankController(Controller):
    """
    `rank` and `rank-seq`: ranks of a single sequence and of its powers.
    """

    def setup_handler(self, subparsers):
        rank = subparsers.add_parser("rank", help="minimal recurrence (rank) of a sequence")
        self.add_sequence_options(rank)
        rank.add_argument("--terms", help="raw term list instead of a recurrence")
        rank.add_argument("--oeis", help="local OEIS b-file to read the terms from")
        self.add_window_options(rank)
        self.add_output_options(rank)
        rank.set_defaults(handler=self.rank)

        profile = subparsers.add_parser("rank-seq", help="rank sequence of s^M for M = 1..mmax")
        self.add_sequence_options(profile)
        profile.add_argument("--oeis", help="local OEIS b-file to read the terms from")
        profile.add_argument("--mmax", type=int, default=settings.DEFAULT_MMAX)
        profile.add_argument("--generic", action="store_true", help="also estimate the general rank sequence and classify")
        profile.add_argument("--trials", type=int, default=settings.DEFAULT_TRIALS)
        profile.add_argument("--height", type=int, default=settings.DEFAULT_HEIGHT)
        profile.add_argument("--seed", type=int, default=settings.DEFAULT_SEED)
        self.add_window_options(profile)
        self.add_output_options(profile)
        profile.set_defaults(handler=self.rank_seq)

    def _raw_terms(self, args):
        if getattr(args, "oeis", None):
            return self.terms_from_bfile(args.oeis)
        if getattr(args, "terms", None):
            return parse_rational_list(args.terms)
        return None

    def rank(self, args):
        """
        Handles `rank`: certificate of the minimal recurrence.
        """
        terms = self._raw_terms(args)
        if terms is not None:
            certificate = rank_of_terms(terms, args.guard)
        else:
            seq = self.sequence_from_args(args)
            certificate = rank_of_power(seq, 1, args.guard)
            terms = seq.stream().prefix(certificate.terms_used + certificate.guard_validated)
        record = certificate.to_record()
        record["certified"] = certify(certificate, terms)
        logger.info(f"Rank {certificate.rank} certified={record['certified']}")
        self.emit([record], RANK_COLUMNS, args)

    def rank_seq(self, args):
        """
        Handles `rank-seq`: ranks, bounds and the eventual polynomial, plus
        the general/particular classification when --generic is given.
        """
        if args.mmax < 1:
            raise UsageError("--mmax must be >= 1")
        terms = self._raw_terms(args)
        if terms is not None:
            if args.generic:
                raise UsageError("--generic needs a recurrence, not a term list")
            profile = rank_sequence_of_terms(terms, args.mmax, args.guard)
        else:
            seq = self.sequence_from_args(args)
            profile = rank_sequence(seq, args.mmax, args.guard)
        profile.fitted = fit_quasi_polynomial(profile.ranks)

        record = profile.to_record()
        record["generic"] = None
        if args.generic:
            generic = generic_rank_sequence(
                profile.seq.recurrence, args.mmax, args.trials, args.height, args.seed, args.guard
            )
            profile.classification = classify(profile, generic)
            probe_eventual_polynomial(profile)
            record["classification"] = profile.classification
            record["generic"] = generic
        self.emit([record], PROFILE_COLUMNS, args)
