"""Exception hierarchy shared by every module.

Absence of a universal object (no colimit, no adjoint, no iso) is never an
error; these exceptions are reserved for malformed input and exhausted
search budgets.
"""

from __future__ import annotations


class ProequipError(Exception):
    """Base class for all errors raised by this package."""


class StructuralError(ProequipError):
    """Input data is not well formed (dangling identifiers, partial tables)."""


class BoundaryError(ProequipError):
    """Two things that must share a boundary do not."""


class NotACorrespondenceError(StructuralError):
    """A category over the walking arrow has a morphism from fiber 1 to fiber 0."""


class GuardExceeded(ProequipError):
    """An exhaustive search would exceed the configured size guard."""

    def __init__(self, what: str, size: int, bound: int):
        self.what = what
        self.size = size
        self.bound = bound
        super().__init__(f"{what}: search space {size} exceeds guard {bound}")


class UnsupportedError(ProequipError):
    """The operation is not available for the given equipment instance."""


class InvalidCertificate(ProequipError):
    """A replayed certificate no longer checks out."""


class InterchangeError(ProequipError):
    """Row-first and column-first pasting of a grid disagree."""
