"""Global size guard for exhaustive searches.

The default comes from ``PROEQUIP_SIZE_GUARD`` (falling back to 10**6) and
can be overridden per thread/task with :func:`size_guard`.
"""

from __future__ import annotations

import contextlib
import contextvars
import os

from .errors import GuardExceeded

DEFAULT_GUARD = 10**6
ENV_VAR = "PROEQUIP_SIZE_GUARD"

_guard: contextvars.ContextVar[int | None] = contextvars.ContextVar("proequip_guard", default=None)


def _env_default() -> int:
    raw = os.environ.get(ENV_VAR)
    if raw is None:
        return DEFAULT_GUARD
    try:
        value = int(raw)
    except ValueError:
        return DEFAULT_GUARD
    return value if value > 0 else DEFAULT_GUARD


def get_guard(override: int | None = None) -> int:
    if override is not None:
        return override
    current = _guard.get()
    return current if current is not None else _env_default()


@contextlib.contextmanager
def size_guard(bound: int):
    token = _guard.set(bound)
    try:
        yield bound
    finally:
        _guard.reset(token)


def check(what: str, size: int, guard: int | None = None) -> None:
    bound = get_guard(guard)
    if size > bound:
        raise GuardExceeded(what, size, bound)


class Budget:
    """Counts search nodes and raises once the guard is exceeded."""

    __slots__ = ("what", "bound", "used")

    def __init__(self, what: str, guard: int | None = None):
        self.what = what
        self.bound = get_guard(guard)
        self.used = 0

    def tick(self, n: int = 1) -> None:
        self.used += n
        if self.used > self.bound:
            raise GuardExceeded(self.what, self.used, self.bound)
