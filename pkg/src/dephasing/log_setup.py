"""
Logging setup for the command-line entry points.

Call configure() once at start-up. Records go to stderr through tqdm.write,
so they print above any open progress bar instead of breaking it, and are
flushed one by one: the log of an interrupted scan is complete up to the
interruption.
"""

import logging
import sys

from tqdm import tqdm

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"


def configure(quiet: bool = False) -> None:
    """
    Replace the root handlers with a single progress-aware stderr handler.

    quiet raises the level to WARNING (progress bars are disabled separately).
    """
    level = logging.WARNING if quiet else logging.INFO
    handler = _ProgressAwareHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT))
    handler.setLevel(level)
    root = logging.getLogger()
    root.handlers.clear()
    root.addHandler(handler)
    root.setLevel(level)


class _ProgressAwareHandler(logging.StreamHandler):
    """StreamHandler that writes through tqdm and flushes after each record."""

    def emit(self, record: logging.LogRecord) -> None:
        try:
            tqdm.write(self.format(record), file=self.stream)
            self.flush()
        except Exception:
            self.handleError(record)
