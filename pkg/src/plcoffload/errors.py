"""Exception hierarchy.

Errors fall into two families so the CLI can map them to exit codes:
``ResolutionError`` for references that do not resolve against the loaded
data, and ``ModelError`` for inputs the model cannot evaluate.
"""

from __future__ import annotations


class OffloadError(Exception):
    """Base class for all package errors."""


class ResolutionError(OffloadError, LookupError):
    """A named entity could not be resolved against the loaded data."""


class NotFoundError(ResolutionError):
    pass


class InterfaceUnsupportedError(ResolutionError):
    """The device has no readings for the requested interface."""


class ConfigError(ResolutionError, ValueError):
    """Malformed or unknown configuration content."""


class ModelError(OffloadError, ValueError):
    """Inputs that the analytical model cannot evaluate."""


class UnsupportedPrecisionError(ModelError):
    pass


class InsufficientDataError(ModelError):
    pass


class MissingStatisticError(ModelError):
    pass


class NoBreakEvenError(ModelError):
    """Offloading never pays off because the edge is not faster per iteration."""


class NoDataError(ModelError):
    """No delivered samples to summarize."""
