"""Exception types raised by spinxfer."""


class SpinxferError(Exception):
    """Base class for all library errors."""


class InvalidSpecError(SpinxferError, ValueError):
    pass


class InvalidArgumentError(SpinxferError, ValueError):
    pass


class PreconditionError(SpinxferError, ValueError):
    pass


class UnsupportedError(SpinxferError, NotImplementedError):
    pass


class NoRealRootsError(SpinxferError, ArithmeticError):
    pass


class NotFoundError(SpinxferError, LookupError):
    """Raised when a root/time search finds nothing in the requested window."""
