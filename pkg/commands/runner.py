import asyncio
import sys
from typing import Callable, NamedTuple, Sequence

from core.config import get_settings
from core.exceptions import EXIT_OK, OverhangError
from core.middleware import timed
from models.stack_model import Stack
from repository.stack_file_repository import StackFileRepository


class FileOutcome(NamedTuple):
    code: int
    output: str
    error: str = ""


StackJob = Callable[[Stack, str], FileOutcome]


def _isolated(command: str, job: StackJob, stack: Stack, source: str) -> FileOutcome:
    with timed(command, source):
        try:
            return job(stack, source)
        except OverhangError as exc:
            return FileOutcome(exc.exit_code, "", f"error: {exc}")


async def _run_one(command: str, job: StackJob, path: str, repository: StackFileRepository, limit: asyncio.Semaphore) -> FileOutcome:
    async with limit:
        try:
            stack = await repository.aread(path)
        except OverhangError as exc:
            return FileOutcome(exc.exit_code, "", f"error: {exc}")
        return await asyncio.to_thread(_isolated, command, job, stack, path)


async def _run_batch(command: str, job: StackJob, paths: Sequence[str]) -> list[FileOutcome]:
    repository = StackFileRepository()
    limit = asyncio.Semaphore(get_settings().batch_workers)
    return list(await asyncio.gather(*(_run_one(command, job, p, repository, limit) for p in paths)))


def _run_sequential(command: str, job: StackJob, paths: Sequence[str]) -> list[FileOutcome]:
    repository = StackFileRepository()
    outcomes = []
    for path in paths:
        try:
            stack = repository.read(path)
        except OverhangError as exc:
            outcomes.append(FileOutcome(exc.exit_code, "", f"error: {exc}"))
            continue
        outcomes.append(_isolated(command, job, stack, path))
    return outcomes


def run_stack_files(command: str, job: StackJob, paths: Sequence[str], batch: bool = False) -> int:
    """Run ``job`` on every stack file, print outputs in argument order, return the largest exit code.

    With ``batch`` the files are read with aiofiles and processed concurrently,
    each in its own worker thread with no shared state.
    """
    if batch:
        outcomes = asyncio.run(_run_batch(command, job, paths))
    else:
        outcomes = _run_sequential(command, job, paths)

    code = EXIT_OK
    for outcome in outcomes:
        if outcome.output:
            print(outcome.output)
        if outcome.error:
            print(outcome.error, file=sys.stderr)
        code = max(code, outcome.code)
    return code
