import functools
import sys
from typing import Callable, Optional

from core.logger import get_logger

logger = get_logger("exceptions")

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_INPUT = 2
EXIT_INTERNAL = 3


class OverhangError(Exception):
    """Base error. ``exit_code`` is what the command line returns for it."""

    exit_code = EXIT_INTERNAL


class InputError(OverhangError):
    exit_code = EXIT_INPUT


class DomainError(OverhangError):
    exit_code = EXIT_DOMAIN


class ParseError(InputError):
    def __init__(self, message: str, line: int, column: int = 1, source: str = "<input>"):
        self.line = line
        self.column = column
        self.source = source
        super().__init__(f"{source}:{line}:{column}: {message}")


class DimensionMismatch(InputError):
    pass


class OverlapError(InputError):
    """Two block interiors intersect. Index 0 stands for the table."""

    def __init__(self, i: int, j: int, detail: str = ""):
        self.i = i
        self.j = j
        message = f"blocks {i} and {j} overlap" if j else f"block {i} overlaps the table"
        super().__init__(f"{message}{': ' + detail if detail else ''}")


class DanglingWeightError(InputError):
    pass


class EmptyStack(InputError):
    pass


class PreconditionViolated(InputError):
    pass


class NotApplicable(DomainError):
    """A move would leave negative mass somewhere."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class NotBalanced(DomainError):
    pass


class ZeroMass(DomainError):
    pass


class SolverError(OverhangError):
    """The exact solver broke one of its own invariants or ran out of pivots."""

    exit_code = EXIT_INTERNAL


def handle_errors(func: Callable[..., int]) -> Callable[..., int]:
    """Turn ``OverhangError`` into its exit code and a one-line diagnostic on stderr."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs) -> int:
        try:
            return func(*args, **kwargs)
        except OverhangError as exc:
            if exc.exit_code == EXIT_INTERNAL:
                logger.exception("Internal error")
            else:
                logger.info(f"{type(exc).__name__}: {exc}")
            print(f"error: {exc}", file=sys.stderr)
            return exc.exit_code

    return wrapper
