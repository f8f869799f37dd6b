import time
import logging
from contextlib import contextmanager
from typing import Iterator

logger = logging.getLogger("middleware")


@contextmanager
def timed(command: str, subject: str = "") -> Iterator[None]:
    """Log how long a command took on one input, at INFO."""
    start_time = time.perf_counter()
    status = "error"
    try:
        yield
        status = "ok"
    finally:
        process_time_ms = (time.perf_counter() - start_time) * 1000
        logger.info(f"{command} {subject} - {status} - {process_time_ms:.2f}ms")
