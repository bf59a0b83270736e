"""Exception hierarchy shared by all modules."""


class SemistabError(Exception):
    """Base class for library errors."""


class DimensionError(SemistabError, ValueError):
    """Inconsistent matrix / vector shapes."""


class ResourceLimitExceeded(SemistabError):
    """An enumeration hit its configured cap; the instance is too large."""


class UndecidedWithinBound(SemistabError):
    """A bounded word-problem search exhausted its degree cap."""


class NotSharpError(SemistabError):
    """Operation requires a sharp monoid."""


class NotIntegralError(SemistabError):
    """Operation requires an integral monoid or homomorphism."""


class NotInMonoidError(SemistabError):
    """An element was expected to lie in a monoid."""


class PreconditionError(SemistabError):
    """Inputs violate a documented precondition."""


class NotAUnitError(SemistabError):
    """Inversion of a series with zero constant term."""


class TruncationTooSmall(SemistabError):
    """The truncation degree cannot certify the requested identity."""
