import argparse
import sys

from core.exceptions import InputError, handle_errors
from core.middleware import timed
from core.rational import parse_rational
from repository.stack_file_repository import StackFileRepository
from services.generator_service import GENERATORS
from services.geometry_service import overhang, validate


def add_parser(subparsers) -> None:
    parser = subparsers.add_parser("generate", help="write a named stack construction")
    parser.add_argument("kind", choices=sorted(GENERATORS))
    parser.add_argument("size", type=int)
    parser.add_argument("--out", "-o", default="-", help="output file ('-' for stdout)")
    parser.add_argument("--h", dest="height", default="1", help="block height (rational)")
    parser.set_defaults(handler=run)


@handle_errors
def run(args: argparse.Namespace) -> int:
    try:
        height = parse_rational(args.height)
        stack = GENERATORS[args.kind](args.size, height)
    except ValueError as exc:
        raise InputError(str(exc)) from exc

    with timed("generate", f"{args.kind} {args.size}"):
        stack = validate(stack)
        repository = StackFileRepository()
        summary = f"blocks {stack.n}\noverhang {overhang(stack)}"
        if args.out == "-":
            sys.stdout.write(repository.serialize(stack))
            print(summary, file=sys.stderr)
        else:
            repository.write(args.out, stack)
            print(summary)
    return 0
