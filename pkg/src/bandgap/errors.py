"""Exception types shared across the package."""


class BandgapError(Exception):
    """Base class for every error raised by this package."""


class ParseError(BandgapError, ValueError):
    pass


class Unsupported(BandgapError):
    """An exact operation left the quadratic-field setting it can handle."""


class DivisionByZero(BandgapError, ZeroDivisionError):
    pass


class PeriodNotFound(BandgapError):
    pass


class IndexOutOfRange(BandgapError, IndexError):
    pass


class RationalInput(BandgapError, ValueError):
    pass


class OutOfClass(BandgapError, ValueError):
    pass


class AtDiscontinuity(BandgapError, ValueError):
    pass


class NonpositiveEnergy(BandgapError, ValueError):
    pass


class KirchhoffCase(BandgapError, ValueError):
    pass


class NoCrossing(BandgapError):
    pass


class AlphaOutOfWindow(BandgapError, ValueError):
    pass


class Infeasible(BandgapError):
    pass


class VerificationFailed(BandgapError):
    def __init__(self, message, missing=(), unexpected=()):
        super().__init__(message)
        self.missing = tuple(missing)
        self.unexpected = tuple(unexpected)


class Truncated(UserWarning):
    """A finite continued fraction ran out of coefficients."""
