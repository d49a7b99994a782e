"""Exception hierarchy shared by every omegalab module."""


class OmegaLabError(Exception):
    """Base class for all errors raised by omegalab."""


class ShapeError(OmegaLabError, ValueError):
    """Dimensions, lengths or matrix sizes are incompatible."""


class DomainError(OmegaLabError, ValueError):
    """An argument lies outside the domain where the operation is defined."""


class PreconditionError(OmegaLabError, ValueError):
    """A documented precondition of the operation does not hold."""


class DivergenceError(OmegaLabError, RuntimeError):
    """An orbit closure grew past its cap."""


class ParseError(OmegaLabError, ValueError):
    """A serialized file is malformed; the message names the offending field."""
