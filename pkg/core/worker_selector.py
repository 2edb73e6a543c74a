"""Configuration-driven worker count selection."""

import logging
import os
from typing import Optional


logger = logging.getLogger(__name__)

THREADS_ENV = "MULTICASCADE_THREADS"


class WorkerSelector:
    """Multi-level worker count selection with fallback."""

    def __init__(self):
        self.configured = self._read_env()

    @staticmethod
    def _read_env() -> int:
        raw = os.getenv(THREADS_ENV, "0").strip() or "0"
        try:
            value = int(raw)
        except ValueError:
            logger.warning(f"{THREADS_ENV}={raw!r} is not an integer, using auto")
            return 0
        if value < 0:
            logger.warning(f"{THREADS_ENV}={value} is negative, using auto")
            return 0
        return value

    @staticmethod
    def auto() -> int:
        return max(1, os.cpu_count() or 1)

    def select_workers(self, requested: Optional[int] = None, work_items: Optional[int] = None) -> int:
        """Select the worker count; the environment caps explicit requests."""

        # Level 1: explicit request, capped by the environment when it is set
        if requested is not None and requested > 0:
            workers = min(requested, self.configured) if self.configured else requested
        # Level 2: environment configuration
        elif self.configured:
            workers = self.configured
        # Level 3: auto
        else:
            workers = self.auto()

        if work_items is not None:
            workers = min(workers, max(1, work_items))
        return workers


def select_workers(requested: Optional[int] = None, work_items: Optional[int] = None) -> int:
    """Read the environment afresh and select a worker count."""
    return WorkerSelector().select_workers(requested, work_items)
