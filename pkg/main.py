import argparse
import logging
import sys

from app import settings
from app.controllers.bounds_controller import BoundsController
from app.controllers.controller import EXIT_USAGE
from app.controllers.explorer_controller import ExplorerController
from app.controllers.lattice_controller import LatticeController
from app.controllers.power_controller import PowerController
from app.controllers.rank_controller import RankController
from app.controllers.reproduce_controller import ReproduceController

# Keep library chatter at the configured level (WARNING unless CRSEQ_LOG_LEVEL says otherwise)
logging.basicConfig(level=settings.LOG_LEVEL)
logging.getLogger("sympy").setLevel(logging.WARNING)


class UsageExit(Exception):
    pass


class CrseqArgumentParser(argparse.ArgumentParser):
    """argparse reports bad usage with exit status 1 instead of 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise UsageExit(message)


def build_parser(stdout=None, stderr=None):
    parser = CrseqArgumentParser(
        prog="crseq",
        description="Ranks of powers and products of constant-recursive sequences.",
    )
    subparsers = parser.add_subparsers(dest="command", parser_class=CrseqArgumentParser)
    subparsers.required = True

    controllers = [
        RankController(stdout=stdout, stderr=stderr),
        PowerController(stdout=stdout, stderr=stderr),
        BoundsController(stdout=stdout, stderr=stderr),
        ExplorerController(stdout=stdout, stderr=stderr),
        LatticeController(stdout=stdout, stderr=stderr),
        ReproduceController(stdout=stdout, stderr=stderr),
    ]
    for controller in controllers:
        controller.application = parser
        controller.setup_handler(subparsers)
    return parser


def main(argv=None, stdout=None, stderr=None) -> int:
    parser = build_parser(stdout=stdout, stderr=stderr)
    try:
        args = parser.parse_args(argv)
    except UsageExit:
        return EXIT_USAGE
    controller = args.handler.__self__
    return controller.run(args.handler, args)


if __name__ == "__main__":
    sys.exit(main())
