"""Exception hierarchy shared by every module."""

from __future__ import annotations


class SigDimError(Exception):
    """Base class for all structured errors raised by sigdimlab."""


class DimensionError(SigDimError, ValueError):
    """Operands have inconsistent dimensions."""


class DegenerateError(SigDimError, ValueError):
    """Input is degenerate for the requested operation (empty, a point, not spanning...)."""


class SymmetryError(SigDimError):
    """A permutation fails to act as expected (not a symmetry, action leaves the item set)."""


class ParseError(SigDimError, ValueError):
    """Malformed user input (rationals, vertex files, solid names)."""

    def __init__(self, message: str, *, location: str | None = None):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)
