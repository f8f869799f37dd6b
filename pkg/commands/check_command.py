import argparse

from commands.runner import FileOutcome, run_stack_files
from core.exceptions import EXIT_DOMAIN, EXIT_OK, handle_errors
from models.balance_model import Balanced
from models.stack_model import Stack
from services.balance_service import check_balance
from services.geometry_service import contacts, validate


def add_parser(subparsers) -> None:
    parser = subparsers.add_parser("check", help="decide whether stacks are balanced")
    parser.add_argument("files", nargs="+")
    parser.add_argument("--certificate", action="store_true", help="print the balancing forces")
    parser.add_argument("--json", action="store_true", help="print the verdict as JSON")
    parser.add_argument("--batch", action="store_true", help="check the files concurrently")
    parser.set_defaults(handler=run)


def certificate_lines(stack: Stack, verdict: Balanced) -> list[str]:
    """One "(upper lower position magnitude)" line per nonzero force."""
    found = contacts(stack)
    return [
        f"({found[e.contact].upper} {found[e.contact].lower} {e.position} {e.magnitude})"
        for e in verdict.certificate.entries
    ]


def check_one(stack: Stack, source: str, emit_certificate: bool, as_json: bool) -> FileOutcome:
    canonical = validate(stack)
    verdict = check_balance(canonical)
    code = EXIT_OK if verdict.is_balanced else EXIT_DOMAIN
    if as_json:
        return FileOutcome(code, verdict.model_dump_json())

    lines = [f"{source}: {verdict.kind}"]
    if not verdict.is_balanced:
        lines.append("no admissible force assignment exists")
    elif emit_certificate:
        lines.extend(certificate_lines(canonical, verdict))
    return FileOutcome(code, "\n".join(lines))


@handle_errors
def run(args: argparse.Namespace) -> int:
    def job(stack: Stack, source: str) -> FileOutcome:
        return check_one(stack, source, args.certificate, args.json)

    return run_stack_files("check", job, args.files, batch=args.batch)
