from fractions import Fraction
from pathlib import Path
from typing import Union

from pydantic import ValidationError

from core.exceptions import InputError, ParseError
from core.logger import get_logger
from core.rational import format_rational
from models.distribution_model import Distribution, SignedDistribution
from models.move_model import Action, ExtremeMove, LossyMove, Move, MoveScript
from repository.stack_file_repository import read_rational, split_tokens, undecodable

logger = get_logger(__name__)

PathLike = Union[str, Path]


def _first_error(exc: ValidationError) -> str:
    return str(exc.errors()[0]["msg"]).removeprefix("Value error, ")


class MoveScriptRepository:
    """Move script reader/writer.

    ::

        init
        0 1
        end
        move -1/2 1/2 : -1/2 1/2, 0 -1, 1/2 1/2
        lossy -1/2 1/2 : ...
        extreme -1/2 1/2

    ``init`` and ``end`` enclose comma-separated ``<x> <m>`` pairs on any
    number of lines. A ``wide`` token before the colon allows a move
    interval of any length.
    """

    def _pairs(self, text: str, column: int, number: int, source: str) -> list[tuple[Fraction, Fraction]]:
        pairs = []
        offset = column
        for chunk in text.split(","):
            tokens = [(offset + c - 1, t) for c, t in split_tokens(chunk)]
            offset += len(chunk) + 1
            if not tokens:
                continue
            if len(tokens) != 2:
                raise ParseError("expected '<x> <m>' pairs separated by commas", number, tokens[0][0], source)
            pairs.append((read_rational(tokens[0], number, source), read_rational(tokens[1], number, source)))
        return pairs

    def _action(self, raw: str, number: int, source: str) -> Action:
        head, colon, tail = raw.split("#", 1)[0].partition(":")
        tokens = split_tokens(head)
        if not tokens:
            raise ParseError("missing step keyword", number, 1, source)
        kind = tokens[0][1]

        if kind == "extreme":
            if colon or len(tokens) != 3:
                raise ParseError("expected 'extreme <a> <b>'", number, tokens[0][0], source)
            a, b = (read_rational(t, number, source) for t in tokens[1:])
            try:
                return ExtremeMove(a=a, b=b)
            except ValidationError as exc:
                raise ParseError(_first_error(exc), number, tokens[1][0], source)

        if kind not in ("move", "lossy"):
            raise ParseError(f"unknown step {kind!r}", number, tokens[0][0], source)
        wide = len(tokens) == 4 and tokens[3][1] == "wide"
        if not colon or len(tokens) != (4 if wide else 3):
            raise ParseError(f"expected '{kind} <a> <b> [wide] : <x> <m>, ...'", number, tokens[0][0], source)
        a, b = (read_rational(t, number, source) for t in tokens[1:3])
        delta = self._pairs(tail, len(head) + 2, number, source)
        try:
            move = Move(a=a, b=b, delta=SignedDistribution.of(delta), wide=wide)
        except ValidationError as exc:
            raise ParseError(_first_error(exc), number, tokens[0][0], source)
        return LossyMove(move=move) if kind == "lossy" else move

    def parse(self, text: str, source: str = "<input>") -> MoveScript:
        """
        Parse a move script.

        Raises:
            ParseError: malformed line, missing ``init``/``end``, or a move whose
                delta breaks the move invariants
        """
        initial: list[tuple[Fraction, Fraction]] = []
        actions: list[Action] = []
        lines: list[int] = []
        state = "start"

        for number, raw in enumerate(text.splitlines(), start=1):
            tokens = split_tokens(raw)
            if not tokens:
                continue
            head = tokens[0][1]

            if state == "start":
                if head != "init":
                    raise ParseError("script must start with 'init'", number, tokens[0][0], source)
                state = "init"
                rest = raw.split("#", 1)[0]
                initial.extend(self._pairs(rest[tokens[0][0] + 3:], tokens[0][0] + 4, number, source))
            elif state == "init":
                if head == "end":
                    state = "steps"
                else:
                    initial.extend(self._pairs(raw.split("#", 1)[0], 1, number, source))
            else:
                actions.append(self._action(raw, number, source))
                lines.append(number)

        if state != "steps":
            raise ParseError("missing 'end' after the initial distribution", max(1, len(text.splitlines())), 1, source)
        try:
            start = Distribution.of(initial)
        except ValidationError as exc:
            raise ParseError(f"initial distribution: {_first_error(exc)}", 1, 1, source)
        logger.debug(f"Parsed {len(actions)} steps from {source}")
        return MoveScript(initial=start, actions=tuple(actions), lines=tuple(lines))

    def serialize(self, script: MoveScript) -> str:
        def pairs(points) -> str:
            return ", ".join(f"{format_rational(x)} {format_rational(m)}" for x, m in points)

        out = ["init", pairs(script.initial.points), "end"] if script.initial.points else ["init", "end"]
        for action in script.actions:
            a, b = format_rational(action.a), format_rational(action.b)
            if isinstance(action, ExtremeMove):
                out.append(f"extreme {a} {b}")
                continue
            move = action.move if isinstance(action, LossyMove) else action
            wide = " wide" if move.wide else ""
            out.append(f"{action.kind} {a} {b}{wide} : {pairs(move.delta.points)}")
        return "\n".join(out) + "\n"

    def read(self, path: PathLike) -> MoveScript:
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc.strerror or exc}") from exc
        except UnicodeDecodeError as exc:
            raise undecodable(exc, str(path)) from exc
        return self.parse(text, source=str(path))

