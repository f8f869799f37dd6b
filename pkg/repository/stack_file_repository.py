from fractions import Fraction
from pathlib import Path
from typing import Optional, Union

import aiofiles
from pydantic import ValidationError

from core.config import get_settings
from core.exceptions import InputError, ParseError
from core.logger import get_logger
from core.rational import format_rational, parse_rational
from models.stack_model import Block, PointWeight, Stack

logger = get_logger(__name__)

PathLike = Union[str, Path]


def split_tokens(line: str) -> list[tuple[int, str]]:
    """Whitespace-separated tokens with their 1-based columns; text after '#' is dropped."""
    content = line.split("#", 1)[0]
    tokens = []
    column = 0
    while column < len(content):
        if content[column].isspace():
            column += 1
            continue
        start = column
        while column < len(content) and not content[column].isspace():
            column += 1
        tokens.append((start + 1, content[start:column]))
    return tokens


def read_rational(token: tuple[int, str], line: int, source: str) -> Fraction:
    column, text = token
    try:
        return parse_rational(text)
    except ValueError:
        raise ParseError(f"expected a rational, got {text!r}", line, column, source)


def undecodable(exc: UnicodeDecodeError, source: str) -> ParseError:
    """ParseError at the line and byte column of the first byte that is not UTF-8."""
    before = exc.object[: exc.start]
    line = before.count(b"\n") + 1
    column = exc.start - (before.rfind(b"\n") + 1) + 1
    return ParseError(f"not valid UTF-8 (byte 0x{exc.object[exc.start]:02x} at offset {exc.start})", line, column, source)


class StackFileRepository:
    """Stack file reader/writer.

    Format: an optional ``h <rational>`` header, one ``<x> <y>`` line per
    block, ``w <x> <y> <mass>`` lines for point weights and ``#`` comments.
    Rationals are written as ``p/q``; decimals are accepted on input.
    """

    def parse(self, text: str, source: str = "<input>", default_h: Optional[Fraction] = None) -> Stack:
        """
        Parse stack file text.

        Args:
            text: file contents
            source: name used in diagnostics
            default_h: block height when there is no header (settings default otherwise)

        Returns:
            Stack in file order (not yet validated)

        Raises:
            ParseError: with the line and column of the offending token
        """
        h: Optional[Fraction] = None
        blocks: list[Block] = []
        weights: list[PointWeight] = []

        for number, raw in enumerate(text.splitlines(), start=1):
            tokens = split_tokens(raw)
            if not tokens:
                continue
            head = tokens[0][1]

            if head == "h":
                if h is not None or blocks or weights:
                    raise ParseError("the 'h' header must come once, before any block", number, tokens[0][0], source)
                if len(tokens) != 2:
                    raise ParseError("expected 'h <rational>'", number, tokens[0][0], source)
                h = read_rational(tokens[1], number, source)
                if h <= 0:
                    raise ParseError("block height must be > 0", number, tokens[1][0], source)
            elif head == "w":
                if len(tokens) != 4:
                    raise ParseError("expected 'w <x> <y> <mass>'", number, tokens[0][0], source)
                x, y, mass = (read_rational(t, number, source) for t in tokens[1:])
                if mass <= 0:
                    raise ParseError("point weight mass must be > 0", number, tokens[3][0], source)
                weights.append(PointWeight(x=x, y=y, mass=mass))
            else:
                if len(tokens) != 2:
                    column = tokens[2][0] if len(tokens) > 2 else tokens[0][0]
                    raise ParseError("expected '<x> <y>'", number, column, source)
                x, y = (read_rational(t, number, source) for t in tokens)
                blocks.append(Block(x=x, y=y))

        if h is None:
            h = default_h if default_h is not None else parse_rational(get_settings().default_block_height)
        try:
            return Stack(blocks=tuple(blocks), h=h, weights=tuple(weights))
        except ValidationError as exc:
            raise ParseError(str(exc.errors()[0]["msg"]), 1, 1, source)

    def serialize(self, stack: Stack) -> str:
        lines = []
        if stack.h != parse_rational(get_settings().default_block_height):
            lines.append(f"h {format_rational(stack.h)}")
        for block in stack.blocks:
            lines.append(f"{format_rational(block.x)} {format_rational(block.y)}")
        for weight in stack.weights:
            lines.append(
                f"w {format_rational(weight.x)} {format_rational(weight.y)} {format_rational(weight.mass)}"
            )
        return "\n".join(lines) + "\n"

    def read(self, path: PathLike) -> Stack:
        path = Path(path)
        logger.debug(f"Reading stack file {path}")
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc.strerror or exc}") from exc
        except UnicodeDecodeError as exc:
            raise undecodable(exc, str(path)) from exc
        return self.parse(text, source=str(path))

    def write(self, path: PathLike, stack: Stack) -> None:
        path = Path(path)
        path.write_text(self.serialize(stack), encoding="utf-8")
        logger.debug(f"Wrote {stack.n} blocks to {path}")

    async def aread(self, path: PathLike) -> Stack:
        """Read for batch runs, without blocking the event loop on file I/O."""
        try:
            async with aiofiles.open(path, mode="r", encoding="utf-8") as f:
                text = await f.read()
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc.strerror or exc}") from exc
        except UnicodeDecodeError as exc:
            raise undecodable(exc, str(path)) from exc
        return self.parse(text, source=str(path))
