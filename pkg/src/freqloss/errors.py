"""Exception types.  All derive from ``ValueError`` so plain callers can catch that."""


class FreqlossError(ValueError):
    """Base class for data errors raised by this package."""


class DimensionError(FreqlossError):
    """Array shapes or channel counts do not match what an operation needs."""


class DomainError(FreqlossError):
    """A value lies outside the domain an operation is defined on."""


class FormatError(FreqlossError):
    """An image file has an unsupported format or bit depth."""


class ArgumentError(FreqlossError):
    """An argument combination is invalid (empty list, oversized ramp, ...)."""
