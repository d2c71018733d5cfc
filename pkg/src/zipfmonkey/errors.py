"""Shared exception types."""


class ResourceGuardError(RuntimeError):
    """An enumeration would exceed its configured node budget."""


class BoundViolationError(RuntimeError):
    """A computed envelope constant failed at some event interval."""
