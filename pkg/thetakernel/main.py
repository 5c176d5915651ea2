"""
Command-line entry point for the theta kernel toolkit.
"""
import argparse
import logging
import sys
from typing import List, Optional

from thetakernel.cli import coeffs, elliptic, kernel, verify, zeros
from thetakernel.cli.common import UsageError
from thetakernel.core.config import settings
from thetakernel.core.exceptions import ThetaKernelError
from thetakernel.core.schemas import ErrorResponse


logger = logging.getLogger("thetakernel")

# Command groups, in the order they appear in --help
GROUPS = (kernel, coeffs, zeros, elliptic, verify)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thetakernel",
        description="Reproducing kernels of theta-Fock spaces on lattices",
    )
    parser.add_argument("--version", action="version", version=f"{settings.app_name} {settings.app_version}")
    parser.add_argument(
        "--log-level",
        default=settings.log_level,
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="diagnostics go to stderr",
    )
    subparsers = parser.add_subparsers(dest="group", required=True)
    for module in GROUPS:
        module.register(subparsers)
    return parser


def run(argv: Optional[List[str]] = None) -> int:
    """Parse argv, dispatch to a command handler and return the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    logging.basicConfig(
        stream=sys.stderr,
        level=getattr(logging, args.log_level),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        force=True,
    )

    try:
        return args.func(args)
    except UsageError as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2
    except ThetaKernelError as exc:
        logger.debug("Command failed", exc_info=True)
        print(ErrorResponse(**exc.to_dict()).model_dump_json(exclude_none=True), file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
