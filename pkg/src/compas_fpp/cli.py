"""Command line entry point: ``compas-fpp <subcommand>`` or ``python -m compas_fpp``.

Exit codes: 0 success, 1 invalid parameters, degenerate chains, failed estimates or broken contracts,
2 verification failures, 3 capacity limits.
"""

import argparse
import logging
import sys
from typing import List
from typing import Optional

import compas_fpp
from compas_fpp.exceptions import CapacityError
from compas_fpp.exceptions import ContractError
from compas_fpp.exceptions import DegenerateChainError
from compas_fpp.exceptions import EstimationError
from compas_fpp.exceptions import ParameterError
from compas_fpp.exceptions import VerificationFailure
from compas_fpp.experiment import METHODS
from compas_fpp.experiment import PARAMETERS
from compas_fpp.experiment import REQUIRED
from compas_fpp.experiment import ExperimentSpec
from compas_fpp.experiment import OutputFormat
from compas_fpp.experiment import run

LOG = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VERIFICATION = 2
EXIT_CAPACITY = 3

# subcommands whose output is JSON unless --format says otherwise
JSON_DEFAULT = ("verify-correspondence",)

HELP = {
    "strip-distance": "Expected cross model distance E D(n, 0) on the strip.",
    "tasep-stationary": "Stationary probability of a particle on site 0 and a hole on site 1.",
    "nu-compare": "Closed form against exact stationary solves for K = 1 ... K_max.",
    "verify-correspondence": "Check the coupling of distance profiles and the exclusion process.",
    "mu-estimate": "Monte Carlo estimate of the time constant on plane windows.",
    "event-a-bound": "Empirical probability that event A fails, against 22 K n eps^2.",
    "lower-bound-check": "Plane distances with open verticals and diagonals against the strip.",
}


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=0, help="Master seed in [0, 2**64).")
    parser.add_argument("-o", "--output", default=None, help="Output path. Writes to stdout if not provided.")
    parser.add_argument("--format", choices=[item.value for item in OutputFormat], default=None, help="Output format (default csv).")
    parser.add_argument("--workers", type=int, default=None, help="Worker threads. Defaults to COMPAS_FPP_WORKERS or 1.")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="More logging on stderr, repeatable.")
    parser.add_argument("--quiet", action="store_true", help="Log errors only.")


def create_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="compas-fpp", description="First passage percolation near p = 1: strips, exclusion processes and plane windows.")
    parser.add_argument("--version", action="version", version="%(prog)s {}".format(compas_fpp.__version__))
    subparsers = parser.add_subparsers(dest="subcommand", metavar="subcommand")
    subparsers.required = True

    for name, schema in PARAMETERS.items():
        sub = subparsers.add_parser(name, help=HELP[name], description=HELP[name], formatter_class=argparse.ArgumentDefaultsHelpFormatter)
        for key, (kind, default) in schema.items():
            flag = "--" + key.replace("_", "-")
            if key == "replay_edges":
                sub.add_argument(flag, dest=key, metavar="PATH", default=argparse.SUPPRESS, help="Replay the edges of this file.")
            elif key == "dump_edges":
                sub.add_argument(flag, dest=key, metavar="PATH", default=argparse.SUPPRESS, help="Write the checked edges to this file.")
            elif kind is bool:
                sub.add_argument(flag, dest=key, action="store_true", default=argparse.SUPPRESS)
            elif key == "method":
                sub.add_argument(flag, dest=key, choices=METHODS[name], default=argparse.SUPPRESS, help="default: {}".format(default))
            elif default is REQUIRED:
                sub.add_argument(flag, dest=key, type=kind, required=True)
            else:
                sub.add_argument(flag, dest=key, type=kind, default=argparse.SUPPRESS, help="default: {}".format(default))
        _common(sub)
    return parser


def configure_logging(verbose: int, quiet: bool) -> None:
    if quiet:
        level = logging.ERROR
    else:
        level = {0: logging.WARNING, 1: logging.INFO}.get(verbose, logging.DEBUG)
    logging.basicConfig(level=level, stream=sys.stderr, format="%(asctime)s %(levelname)s %(name)s: %(message)s", force=True)


def spec_from_args(args: argparse.Namespace) -> ExperimentSpec:
    schema = PARAMETERS[args.subcommand]
    parameters = {key: getattr(args, key) for key in schema if hasattr(args, key)}
    format = args.format or (OutputFormat.JSON if args.subcommand in JSON_DEFAULT else OutputFormat.CSV)
    return ExperimentSpec(args.subcommand, parameters, seed=args.seed, output=args.output, format=format)


def main(argv: Optional[List[str]] = None) -> int:
    args = create_parser().parse_args(argv)
    configure_logging(args.verbose, args.quiet)
    try:
        spec = spec_from_args(args)
        result = run(spec, workers=args.workers)
        result.dump(sys.stdout if spec.output is None else spec.output)
        result.raise_for_failure()
    except VerificationFailure as error:
        LOG.error("%s", error)
        return EXIT_VERIFICATION
    except CapacityError as error:
        LOG.error("capacity exceeded: %s", error)
        return EXIT_CAPACITY
    except (ParameterError, DegenerateChainError, EstimationError, ContractError) as error:
        LOG.error("%s", error)
        return EXIT_ERROR
    return EXIT_OK
