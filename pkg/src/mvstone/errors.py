"""Exception hierarchy shared by every module."""


class MvError(Exception):
    """Base class for all errors raised by mvstone."""


class ChainMismatchError(MvError, ValueError):
    """Operands live on different chains (or signatures)."""


class UniverseMismatchError(MvError, ValueError):
    """Fuzzy subsets or maps disagree on their point sets."""


class InvalidStructureError(MvError, ValueError):
    """An input violates the invariants of the structure it claims to be."""


class ResourceBoundError(MvError):
    """An enumeration would exceed the configured size bound."""


class ConsistencyError(MvError, AssertionError):
    """An internal cross-check failed; this signals a bug, not bad input."""
