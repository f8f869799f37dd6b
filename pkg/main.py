import argparse
import logging
import sys
from typing import Optional, Sequence

from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv(override=False)

from commands import COMMANDS
from core.config import get_settings
from core.logger import configure_logging


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="overhang",
        description="Exact balance checking and overhang-bound verification for block stacks.",
    )
    parser.add_argument("--log-level", default=None, help="override OVERHANG_LOG_LEVEL")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        command.add_parser(subparsers)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    settings = get_settings()
    configure_logging(args.log_level or settings.log_level, settings.log_file)
    logger = logging.getLogger(__name__)
    logger.debug(f"Running '{args.command}' with log level {args.log_level or settings.log_level}")

    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())
