"""Shared exception types."""


class PrecisionError(ValueError):
    """A symbolic operation left the configured precision window."""


class StabilizationError(RuntimeError):
    """A filtered computation hit its level cap before stabilizing."""


class SizeCapError(ValueError):
    """A requested finite model exceeds the configured size cap."""
