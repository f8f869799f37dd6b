import argparse

from core.exceptions import handle_errors
from core.middleware import timed
from models.move_model import LossyMove, Trace
from repository.move_script_repository import MoveScriptRepository
from services.massmove_service import (
    apply_sequence,
    check_spread_lemma,
    moment,
    spread,
    weight_constraint_scan,
)


def add_parser(subparsers) -> None:
    parser = subparsers.add_parser("simulate", help="apply a move script to its initial distribution")
    parser.add_argument("script")
    parser.add_argument("--report", action="store_true", help="print moments, spread and checks per step")
    parser.set_defaults(handler=run)


def report_lines(trace: Trace) -> list[str]:
    lines = []
    for step, mu in enumerate(trace.distributions):
        lemma = check_spread_lemma(mu)
        lines.append(
            f"step {step}: M0={moment(mu, 0)} M1={moment(mu, 1)} M2={moment(mu, 2)} "
            f"S={spread(mu)} spread_lemma={'ok' if lemma.ok else 'FAILED'}"
        )
    if any(isinstance(action, LossyMove) for action in trace.actions):
        lines.append("weight-constrained: n/a (script has lossy steps)")
    else:
        scan = weight_constraint_scan(trace)
        lines.append(f"weight-constrained: {'yes' if scan.ok else 'no'} ({len(scan.points)} points scanned)")
        if not scan.ok:
            lines.append(f"  fails at a = {scan.violation}")
    return lines


@handle_errors
def run(args: argparse.Namespace) -> int:
    script = MoveScriptRepository().read(args.script)
    with timed("simulate", args.script):
        trace = apply_sequence(script.initial, script.actions, script.lines)
    print(str(trace.final))
    if args.report:
        for line in report_lines(trace):
            print(line)
    return 0
