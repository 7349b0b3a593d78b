# File: app/controllers/lattice_controller.py

import json
import logging

from app import settings
from app.controllers.controller import Controller, parse_int_list, parse_matrix
from app.core.errors import InvalidRelation, UsageError
from app.core.poly_core import parse_rational_list
from app.core.root_lattice import (
    RelationLattice,
    count_degree_M_classes,
    predicted_degree,
    probe_free_rank_degree,
    quotient_invariants,
    relations_from_rational_roots,
    smith_normal_form,
)

# Configure logging
logging.basicConfig(
    level=settings.LOG_LEVEL,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    handlers=[logging.StreamHandler()],
)
logger = logging.getLogger(__name__)

SNF_COLUMNS = ["diagonal", "torsion", "free_rank", "quotient", "U", "V"]
CLASS_COLUMNS = ["M", "classes", "rank", "quotient", "predicted_degree", "fitted_degree", "consistent"]


def format_matrix(rows) -> str:
    return ";".join(",".join(str(x) for x in row) for row in rows)


class LatticeController(Controller):
    """
    `snf` and `classes`: relation lattices among symbolic roots.
    """

    def setup_handler(self, subparsers):
        snf = subparsers.add_parser("snf", help="Smith normal form of a relation matrix")
        snf.add_argument("--matrix", required=True, help='rows separated by ";", entries by ","')
        self.add_output_options(snf)
        snf.set_defaults(handler=self.snf)

        classes = subparsers.add_parser("classes", help="degree-M root-product classes modulo the relations")
        classes.add_argument("--lattice", help='JSON file: {"k": 5, "relations": [[...], ...]}')
        classes.add_argument("--k", dest="k", type=int, help="number of roots")
        classes.add_argument("--relations", default="", help='relation rows separated by ";"')
        classes.add_argument("--roots", help="rational roots; their relations are computed")
        classes.add_argument("--mmax", type=int, default=settings.DEFAULT_MMAX)
        classes.add_argument("--ranks", help="observed rank sequence to compare with the free-rank prediction")
        self.add_output_options(classes)
        classes.set_defaults(handler=self.classes)

    def snf(self, args):
        """
        Handles `snf`: nonzero diagonal entries and the quotient Z^n / rowspace.
        """
        matrix = parse_matrix(args.matrix)
        U, D, V = smith_normal_form(matrix)
        diagonal = [D[i][i] for i in range(min(len(D), len(D[0]))) if D[i][i]]
        torsion = [d for d in diagonal if d > 1]
        free_rank = len(matrix[0]) - len(diagonal)
        quotient = [f"Z_{t}" for t in torsion] + ([f"Z^{free_rank}"] if free_rank else [])
        record = {
            "diagonal": diagonal,
            "torsion": torsion,
            "free_rank": free_rank,
            "quotient": " + ".join(quotient) if quotient else "0",
            "U": format_matrix(U),
            "V": format_matrix(V),
        }
        self.emit([record], SNF_COLUMNS, args)

    def _lattice_from_args(self, args) -> RelationLattice:
        if args.lattice:
            try:
                with open(args.lattice, "r", encoding="utf-8") as f:
                    return RelationLattice.from_json(f.read())
            except OSError as e:
                raise UsageError(f"cannot read {args.lattice}: {e}")
            except json.JSONDecodeError as e:
                raise InvalidRelation(f"{args.lattice} is not valid JSON: {e}")
        if args.roots:
            return relations_from_rational_roots(parse_rational_list(args.roots))
        if args.k is None:
            raise UsageError("give --lattice, --roots, or --k with --relations")
        relations = parse_matrix(args.relations) if args.relations.strip() else []
        return RelationLattice(args.k, relations)

    def classes(self, args):
        """
        Handles `classes`: class counts for M = 1..mmax, the quotient group,
        and the predicted polynomial degree.
        """
        if args.mmax < 1:
            raise UsageError("--mmax must be >= 1")
        lattice = self._lattice_from_args(args)
        quotient = quotient_invariants(lattice)
        ranks = parse_int_list(args.ranks, "--ranks") if args.ranks else None
        probe = probe_free_rank_degree(lattice, ranks) if ranks else {}

        records = []
        for M in range(1, args.mmax + 1):
            records.append(
                {
                    "M": M,
                    "classes": count_degree_M_classes(lattice, M),
                    "rank": ranks[M - 1] if ranks and M <= len(ranks) else None,
                    "quotient": str(quotient),
                    "predicted_degree": predicted_degree(lattice),
                    "fitted_degree": probe.get("fitted_degree"),
                    "consistent": probe.get("consistent"),
                }
            )
        self.emit(records, CLASS_COLUMNS, args)
