"""Exception hierarchy.

Every error raised by the package derives from ``SalvError`` so the CLI can
map failures to exit codes with a single ``except`` chain.
"""


class SalvError(Exception):
    """Base class for all package errors."""


class UsageError(SalvError, ValueError):
    pass


class UnsupportedFamily(UsageError):
    pass


class RankOutOfRange(UsageError):
    pass


class MalformedElement(UsageError):
    pass


class ResourceLimit(SalvError):
    """A configured size bound would be exceeded."""


class InconsistencyError(SalvError):
    """An internal cross-check failed; results cannot be trusted."""


class ParityViolation(InconsistencyError):
    pass


class NonCyclotomicFactor(InconsistencyError):
    pass


class NegativeMultiplicity(InconsistencyError):
    pass


class FreeRankNonzero(InconsistencyError):
    pass


class ShiftInvalid(InconsistencyError):
    pass


class PrimeDisagreement(SalvError):
    pass


class RangeViolation(UsageError):
    pass


class DivisionByZero(SalvError, ZeroDivisionError):
    pass


class BothZero(DivisionByZero):
    pass


class InverseOfZero(DivisionByZero):
    pass


class BadPrime(UsageError):
    pass


class OrderMismatch(UsageError):
    pass


class ParseError(SalvError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class CacheCorruption(SalvError):
    pass
