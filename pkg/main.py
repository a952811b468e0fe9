import argparse
import logging
import sys
from typing import List, Optional

from cli import handlers
from config.settings import SETTINGS
from utils.errors import BracketError, DimensionCapError, InputFormatError, NumericalFailure


logging.basicConfig(
    level=getattr(logging, SETTINGS.log_level, logging.INFO),
    format="%(asctime)s %(levelname)s %(name)s - %(message)s",
)
LOGGER = logging.getLogger(__name__)


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="jsrkit", description="Bounds on the joint spectral radius of a matrix set")
    parser.add_argument("--log-level", type=str.upper, default=None,
                        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"], help="override JSRKIT_LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)

    def _input(p: argparse.ArgumentParser) -> None:
        p.add_argument("input", help="matrix set file (JSON, or text with --format txt)")
        p.add_argument("--format", choices=["auto", "json", "txt"], default="auto")

    p = sub.add_parser("bounds", help="compute lower and upper bounds")
    _input(p)
    p.add_argument("--degree", type=int, default=2, help="even degree 2d")
    p.add_argument("--method", choices=["sos", "cq", "sr", "lower", "all"], default="all")
    p.add_argument("--tol", type=_positive_float, default=None, help="relative bisection tolerance")
    p.add_argument("--eps-feas", type=_positive_float, default=None, help="solver feasibility tolerance")
    p.add_argument("--max-product-length", type=int, default=4)
    p.add_argument("--inflation", type=float, default=0.0, help="add eps*(sum x_i^2)^d to the SOS polynomial")
    p.add_argument("--json", action="store_true", help="print the machine-readable run report")
    p.add_argument("--no-timing", action="store_true", help="omit wall-clock fields from --json")
    p.add_argument("--certificate-out", default=None, help="write the SOS certificate as JSON")

    p = sub.add_parser("lift", help="print an induced matrix A_k^[d]")
    _input(p)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--index", type=int, default=1, help="1-based matrix index")

    p = sub.add_parser("sizes", help="matrix sizes of the three lifting procedures")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--m", type=int, default=2, help="number of matrices for the accuracy column")

    p = sub.add_parser("export-sdpa", help="write the SOS feasibility program at fixed gamma")
    _input(p)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--inflation", type=float, default=0.0)
    p.add_argument("output", help="destination .dat-s file")

    p = sub.add_parser("certify", help="check an SOS Lyapunov certificate")
    _input(p)
    p.add_argument("--poly", required=True, help="certificate JSON")
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--eps-feas", type=_positive_float, default=None)

    p = sub.add_parser("decompose", help="explicit SOS decomposition of a polynomial")
    p.add_argument("poly", help='JSON {"monomials": [[exponent, coeff], ...], "basis": [...]?}')
    p.add_argument("--eps-feas", type=_positive_float, default=None)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return handlers.EXIT_OK if exc.code == 0 else handlers.EXIT_INPUT

    try:
        SETTINGS.reload()
    except ValueError as e:
        LOGGER.error("Configuration validation failed: %s", e)
        return handlers.EXIT_INPUT
    if args.log_level:
        logging.getLogger().setLevel(args.log_level)

    commands = {
        "bounds": handlers.cmd_bounds,
        "lift": handlers.cmd_lift,
        "sizes": handlers.cmd_sizes,
        "export-sdpa": handlers.cmd_export_sdpa,
        "certify": handlers.cmd_certify,
        "decompose": handlers.cmd_decompose,
    }
    try:
        return commands[args.command](args)
    except InputFormatError as e:
        LOGGER.error("Invalid input: %s", e)
        return handlers.EXIT_INPUT
    except DimensionCapError as e:
        LOGGER.error("Size cap exceeded: %s", e)
        return handlers.EXIT_CAP
    except (NumericalFailure, BracketError) as e:
        LOGGER.error("Numerical failure: %s", e)
        return handlers.EXIT_NUMERICAL
    except ValueError as e:
        LOGGER.error("Invalid argument: %s", e)
        return handlers.EXIT_INPUT
    except Exception:
        LOGGER.exception("Command %s failed", args.command)
        return handlers.EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
