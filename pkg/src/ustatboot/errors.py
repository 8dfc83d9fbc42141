"""Exception types raised by the library."""


class UstatError(ValueError):
    """Base class for all argument/data errors raised by ustatboot."""


class ArgumentError(UstatError):
    """An argument is out of its admissible range or inconsistent."""


class SizeError(UstatError):
    """The sample is too small for the requested operation."""


class DataError(UstatError):
    """The data contain non-finite values or cannot be processed."""
