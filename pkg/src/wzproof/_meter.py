"""Per-task operation counters.

The active meter lives in a context variable, so concurrent proof tasks
(threads or asyncio tasks started from separate contexts) never share counts.
"""

from __future__ import annotations

import contextvars
import time
from contextlib import contextmanager
from dataclasses import dataclass, field

_active: contextvars.ContextVar["Meter | None"] = contextvars.ContextVar("wzproof_meter", default=None)


@dataclass
class Meter:
    mults: int = 0
    unknowns: int = 0
    equations: int = 0
    peak_terms: int = 0
    started: float = field(default_factory=time.perf_counter)

    def elapsed_ms(self) -> float:
        return (time.perf_counter() - self.started) * 1000.0


def current() -> Meter | None:
    return _active.get()


def add_mults(count: int) -> None:
    m = _active.get()
    if m is not None:
        m.mults += count


def note_terms(count: int) -> None:
    m = _active.get()
    if m is not None and count > m.peak_terms:
        m.peak_terms = count


def note_system(unknowns: int, equations: int) -> None:
    m = _active.get()
    if m is not None:
        m.unknowns += unknowns
        m.equations += equations


@contextmanager
def metered():
    """Collect counters for the enclosed block into a fresh :class:`Meter`.

    Counts are also folded into an enclosing meter when the block exits, so
    nested measurements never hide work from the outer task.
    """
    outer = _active.get()
    meter = Meter()
    token = _active.set(meter)
    try:
        yield meter
    finally:
        _active.reset(token)
        if outer is not None:
            outer.mults += meter.mults
            outer.unknowns += meter.unknowns
            outer.equations += meter.equations
            outer.peak_terms = max(outer.peak_terms, meter.peak_terms)
