import argparse
from typing import Optional

from commands.runner import FileOutcome, run_stack_files
from core.exceptions import EXIT_DOMAIN, EXIT_OK, handle_errors
from models.stack_model import Stack
from services.harness_service import end_to_end


def add_parser(subparsers) -> None:
    parser = subparsers.add_parser("verify", help="run the end-to-end overhang verification")
    parser.add_argument("files", nargs="+")
    parser.add_argument("--json", action="store_true", help="print reports as JSON")
    parser.add_argument("--batch", action="store_true", help="verify the files concurrently")
    parser.add_argument(
        "--improved", action="store_true", default=None,
        help="add the non-normative improved-constant records",
    )
    parser.set_defaults(handler=run)


def verify_one(stack: Stack, source: str, as_json: bool, improved: Optional[bool]) -> FileOutcome:
    report = end_to_end(stack, improved=improved, subject=source)
    code = EXIT_OK if report.passed else EXIT_DOMAIN
    return FileOutcome(code, report.model_dump_json(indent=2) if as_json else report.render())


@handle_errors
def run(args: argparse.Namespace) -> int:
    def job(stack: Stack, source: str) -> FileOutcome:
        return verify_one(stack, source, args.json, args.improved)

    return run_stack_files("verify", job, args.files, batch=args.batch)
