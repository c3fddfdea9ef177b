"""Clock abstraction.

Timestamps flow into cases and decision-log entries, so anything that wants
reproducible output (the scenario CLI, the replay tests, the default service
configuration) injects a LogicalClock instead of reading the wall clock.
"""

from __future__ import annotations

from datetime import datetime, timedelta, timezone


def wall_clock() -> str:
    return datetime.now(timezone.utc).isoformat()


class LogicalClock:
    """Deterministic ISO-8601 clock: a fixed epoch advanced by one second per call."""

    def __init__(self, start: str = "2024-01-01T00:00:00+00:00", step_s: int = 1):
        self._current = datetime.fromisoformat(start)
        self._step = timedelta(seconds=step_s)

    def __call__(self) -> str:
        stamp = self._current.isoformat()
        self._current += self._step
        return stamp
