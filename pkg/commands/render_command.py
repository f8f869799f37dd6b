import argparse
import sys
from pathlib import Path

from core.config import get_settings
from core.exceptions import handle_errors
from core.middleware import timed
from models.balance_model import Balanced
from repository.move_script_repository import MoveScriptRepository
from repository.stack_file_repository import StackFileRepository
from services.balance_service import check_balance
from services.massmove_service import apply_sequence
from services.render_service import render_stack, render_trace


def add_parser(subparsers) -> None:
    parser = subparsers.add_parser("render", help="draw a stack file or a move script as SVG")
    parser.add_argument("input")
    parser.add_argument("--mode", choices=["stack", "trace"], default="stack")
    parser.add_argument("--out", "-o", default="-", help="output file ('-' for stdout)")
    parser.set_defaults(handler=run)


def _render(args: argparse.Namespace) -> str:
    title = Path(args.input).name
    if args.mode == "trace":
        script = MoveScriptRepository().read(args.input)
        trace = apply_sequence(script.initial, script.actions, script.lines)
        return render_trace(trace, title=title)

    stack = StackFileRepository().read(args.input)
    certificate = None
    if get_settings().render.show_forces:
        verdict = check_balance(stack)
        if isinstance(verdict, Balanced):
            certificate = verdict.certificate
    return render_stack(stack, certificate, title=title)


@handle_errors
def run(args: argparse.Namespace) -> int:
    with timed("render", args.input):
        svg = _render(args)
    if args.out == "-":
        sys.stdout.write(svg)
    else:
        Path(args.out).write_text(svg, encoding="utf-8")
    return 0
