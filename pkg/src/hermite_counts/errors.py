"""Exception types shared across the package."""


class HermiteError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(HermiteError, ValueError):
    """A parameter lies outside its admissible domain."""


class DataError(HermiteError, ValueError):
    """Observed data are missing, malformed, or statistically unusable."""


class OverflowGuard(HermiteError, OverflowError):
    """A computation was refused because it would under- or overflow."""


class IterationCap(HermiteError, RuntimeError):
    """An adaptive computation exceeded its hard iteration budget."""
