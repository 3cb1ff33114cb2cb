"""
Command line entry point: ``stratscat {scatter,design,xcheck,figure}``.

Exit codes: 0 success, 1 cross-validation failed, 2 configuration error,
3 solver error, 4 I/O error.
"""
import argparse
import logging
import sys

from .config import parse_config
from .exceptions import ConfigError, StratScatError
from .output import write_tables
from .runs import COMMANDS, run_command
from .settings import solver_settings
from .yaml import read_text

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_IO = 4


def build_parser():
    parser = argparse.ArgumentParser(
        prog="stratscat",
        description="Scattering of TE/TM waves by planar stratified media.",
    )
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    subparsers.required = True
    helps = {
        "scatter": "amplitudes of a profile over k and theta sweeps",
        "design": "synthesize a medium that does not reflect from the right",
        "xcheck": "cross-validate the solvers against each other",
        "figure": "phase shift and left reflection tables of parabolic designs",
    }
    for name in COMMANDS:
        sub = subparsers.add_parser(name, help=helps[name])
        sub.add_argument("--config", metavar="PATH", help="YAML run configuration")
        sub.add_argument(
            "--out", metavar="PATH", help="output file, stdout if omitted"
        )
        sub.add_argument("--format", choices=["csv", "json", "yaml"])
        sub.add_argument(
            "--method",
            metavar="NAME[,NAME...]",
            help="solver method(s), comma separated",
        )
        sub.add_argument("--rtol", type=float)
        sub.add_argument("--atol", type=float)
        sub.add_argument("--threads", type=int)
        sub.add_argument("--seed", type=int)
        sub.add_argument(
            "-v",
            "--verbose",
            action="count",
            default=0,
            help="more logging on stderr, repeat for debug output",
        )
    return parser


def configure_logging(verbosity):
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbosity, logging.DEBUG)
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )


def cli_overrides(args):
    overrides = {}
    if args.method:
        names = [m.strip() for m in args.method.split(",")]
        overrides["methods"] = [m for m in names if m]
    for name in ("rtol", "atol", "threads", "seed"):
        value = getattr(args, name)
        if value is not None:
            overrides[name] = value
    output = {}
    if args.out is not None:
        output["path"] = args.out
    if args.format is not None:
        output["format"] = args.format
    if output:
        overrides["output"] = output
    return overrides


def metadata(config):
    return {
        "command": config.command,
        "polarization": config.polarization.value,
        "methods": config.methods,
        "rtol": config.rtol,
        "atol": config.atol,
        "seed": config.seed,
    }


def _error(kind, exc):
    sys.stderr.write("stratscat: {}: {}\n".format(kind, exc))


def run(config):
    """
    Execute a validated RunConfig, write its tables and return the exit code.
    """
    try:
        with solver_settings.override(**config.settings):
            tables = run_command(config)
    except ConfigError as exc:
        _error("configuration error", exc)
        return EXIT_CONFIG
    except StratScatError as exc:
        _error("solver error", exc)
        return EXIT_SOLVER
    except OSError as exc:
        _error("I/O error", exc)
        return EXIT_IO

    try:
        written = write_tables(
            config.output.path, tables, metadata(config), fmt=config.output.format
        )
    except OSError as exc:
        _error("I/O error", exc)
        return EXIT_IO
    for path in written:
        logger.info("Wrote %s", path)

    if config.command == "xcheck":
        summary = next(t for t in tables if t.name == "summary")
        passed_index = summary.columns.index("passed")
        if not all(row[passed_index] for row in summary.rows):
            logger.warning("Cross-validation failed at some sweep points")
            return EXIT_CHECK_FAILED
    return EXIT_OK


def main(argv=None):
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)

    text = ""
    if args.config is not None:
        try:
            text = read_text(args.config)
        except OSError as exc:
            _error("I/O error", exc)
            return EXIT_IO

    try:
        config = parse_config(
            text, command=args.command, overrides=cli_overrides(args)
        )
    except ConfigError as exc:
        _error("configuration error", exc)
        return EXIT_CONFIG
    return run(config)
