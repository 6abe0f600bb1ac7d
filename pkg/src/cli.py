"""Command line entry point.

    cechedge transgress --algebra sl2 --poly "-x^2 - y*z"
    cechedge wonderful residue --type A1 --poly "u1^2" --mode noneq
    cechedge ss verify-cone --seed 1 --trials 100

Reports go to stdout, logging to stderr. Exit codes: 0 success, 2 bad input,
3 polynomial not invariant, 4 solver failure, 5 degree bound too small,
6 cone lemma failure.
"""

import argparse
import logging
import logging.config
import sys

import yaml

from .config import load_config
from .errors import (
    DegreeBoundTooSmall,
    LiftFailed,
    NonFiniteClosure,
    NotClosed,
    NotDivisible,
    NotInKernel,
    NotInSubspace,
    NotInvariant,
    UnsolvableSystem,
)
from .report import RunReport
from .roots import RootSystemType
from .workflow import ConeLemmaWorkflow, RuntimeContext, TransgressionWorkflow, WonderfulWorkflow

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NOT_INVARIANT = 3
EXIT_SOLVER = 4
EXIT_DEGREE_BOUND = 5
EXIT_CONE_LEMMA = 6

# first match wins, so subclasses of ValueError come before it
EXIT_CODES = (
    (NotInvariant, EXIT_NOT_INVARIANT),
    ((UnsolvableSystem, NotClosed, NotInSubspace, NotDivisible, NonFiniteClosure, NotInKernel, LiftFailed), EXIT_SOLVER),
    (DegreeBoundTooSmall, EXIT_DEGREE_BOUND),
    ((ValueError, OSError, yaml.YAMLError), EXIT_INPUT),
)


def _print_report(report: RunReport, as_json: bool) -> None:
    if as_json:
        print(report.to_json())
        return
    print(f"# {report.command}")
    for key, value in report.outputs.items():
        print(f"{key}: {value}")
    for key, value in report.assertions.items():
        print(f"check {key}: {'ok' if value else 'FAILED'}")
    if report.timing is not None:
        print(f"seconds: {report.timing['seconds']}")


def cmd_transgress(args, context: RuntimeContext) -> RunReport:
    workflow = TransgressionWorkflow(context, args.algebra, args.poly, args.degree, args.pivot_order)
    return workflow.run()


def cmd_wonderful(args, context: RuntimeContext) -> RunReport:
    workflow = WonderfulWorkflow(context, args.poly, args.type, args.cartan, args.mode, args.degree_bound)
    return workflow.run()


def cmd_ss(args, context: RuntimeContext) -> RunReport:
    workflow = ConeLemmaWorkflow(
        context,
        inject_corrupt=args.inject_corrupt,
        seed=args.seed,
        trials=args.trials,
        max_dim=args.max_dim,
        max_length=args.max_length,
        k_length=args.k_length,
    )
    trials, report = workflow.run()
    lines = trials.to_json_lines()
    if lines:
        sys.stdout.write(lines if lines.endswith("\n") else lines + "\n")
    return report


def _exit_code(report: RunReport) -> int:
    if report.passed:
        return EXIT_OK
    return EXIT_CONE_LEMMA if report.command.startswith("ss") else EXIT_SOLVER


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="YAML config file; built-in defaults when omitted")
    common.add_argument("--timing", action="store_true", help="include wall-clock timing in the report")
    common.add_argument("--json", action="store_true", help="print the report as canonical JSON")

    parser = argparse.ArgumentParser(prog="cechedge", description="Exact edge maps, wonderful residues and cone lemma checks.")
    commands = parser.add_subparsers(dest="command", required=True)

    transgress = commands.add_parser("transgress", parents=[common], help="edge map of an invariant polynomial")
    transgress.add_argument("--algebra", default="sl2", help="built-in name (sl2, sl3) or JSON algebra file")
    transgress.add_argument("--poly", required=True, help='invariant polynomial in the dual labels, e.g. "-x^2 - y*z"')
    transgress.add_argument("--degree", type=int, default=None, help="degree of the polynomial when it is zero")
    transgress.add_argument("--pivot-order", default=None, help="lex, reverse or an integer seed")
    transgress.set_defaults(handler=cmd_transgress)

    wonderful = commands.add_parser("wonderful", help="wonderful compactification residues")
    wonderful_commands = wonderful.add_subparsers(dest="wonderful_command", required=True)
    residue = wonderful_commands.add_parser("residue", parents=[common], help="residue class of a W-invariant polynomial")
    source = residue.add_mutually_exclusive_group()
    source.add_argument("--type", default=None, help=f"built-in root system, one of {RootSystemType.available()}")
    source.add_argument("--cartan", default=None, help='JSON file {"rank": l, "cartan": [[...]]}')
    residue.add_argument("--poly", required=True, help='W-invariant polynomial in u1..ul, e.g. "u1^2"')
    residue.add_argument("--mode", choices=["eq", "noneq"], default="noneq")
    residue.add_argument("--degree-bound", type=int, default=None)
    residue.set_defaults(handler=cmd_wonderful)

    ss = commands.add_parser("ss", help="spectral sequence checks")
    ss_commands = ss.add_subparsers(dest="ss_command", required=True)
    verify = ss_commands.add_parser("verify-cone", parents=[common], help="randomized check of the cone lemma")
    verify.add_argument("--seed", type=int, default=None)
    verify.add_argument("--trials", type=int, default=None)
    verify.add_argument("--max-dim", type=int, default=None)
    verify.add_argument("--max-length", type=int, default=None)
    verify.add_argument("--k-length", type=int, default=None)
    verify.add_argument("--inject-corrupt", action="store_true", help=argparse.SUPPRESS)
    verify.set_defaults(handler=cmd_ss)

    return parser


def _attach_poly_values(argv: list[str]) -> list[str]:
    """Rewrite ``--poly VALUE`` as ``--poly=VALUE`` so a value like ``-x^2`` is not read as an option."""
    joined: list[str] = []
    rest = iter(argv)
    for arg in rest:
        value = next(rest, None) if arg == "--poly" else None
        joined.append(arg if value is None else f"{arg}={value}")
    return joined


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_attach_poly_values(argv))

    try:
        config = load_config(args.config)
    except Exception as e:
        print(f"cechedge: cannot load config: {e}", file=sys.stderr)
        return EXIT_INPUT
    logging.config.dictConfig(config["logging"])

    name = " ".join(filter(None, [args.command, getattr(args, "wonderful_command", None), getattr(args, "ss_command", None)]))
    logger.info("#" * 50)
    logger.info(f"Starting {name}")
    logger.info("#" * 50)

    try:
        report = args.handler(args, RuntimeContext(config, args.timing))
        # trial lines are JSON already, so the summary follows as JSON too
        _print_report(report, args.json or args.handler is cmd_ss)
        code = _exit_code(report)
    except Exception as e:
        code = next((c for kinds, c in EXIT_CODES if isinstance(e, kinds)), None)
        if code is None:
            logger.error(f"Unexpected error running {name}: {e}", exc_info=True)
            code = 1
        else:
            logger.error(f"Error running {name}: {e}", exc_info=True)
            print(f"cechedge: {type(e).__name__}: {e}", file=sys.stderr)

    logger.info("#" * 50)
    logger.info(f"Finished {name} with exit code {code}")
    logger.info("#" * 50)
    return code
