"""Cooperative wall-clock budget checked inside the long-running kernels."""
from __future__ import annotations

import contextvars
import time
from contextlib import contextmanager

_deadline: contextvars.ContextVar[float | None] = contextvars.ContextVar("deadline", default=None)


class BudgetExceeded(RuntimeError):
    pass


def check():
    d = _deadline.get()
    if d is not None and time.monotonic() > d:
        raise BudgetExceeded("time budget exceeded")


@contextmanager
def time_budget(seconds: float | None):
    if seconds is None:
        yield
        return
    token = _deadline.set(time.monotonic() + seconds)
    try:
        yield
    finally:
        _deadline.reset(token)
