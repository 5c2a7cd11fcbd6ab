"""Exception hierarchy shared across the package.

Two families matter to callers: ``InvalidInput`` (bad data, CLI exit 2) and
``BudgetExceeded`` (a guarded computation would blow up, CLI exit 3).
"""


class BFreeError(Exception):
    """Base class for all package-specific errors."""


class InvalidInput(BFreeError):
    pass


class BudgetExceeded(BFreeError):
    pass


class NotCoprime(InvalidInput):
    def __init__(self, b1: int, b2: int):
        super().__init__(f"elements {b1} and {b2} share a common factor")
        self.pair = (b1, b2)


class ElementBelowTwo(InvalidInput):
    pass


class NotAscending(InvalidInput):
    pass


class KTooLarge(InvalidInput):
    pass


class WindowExceedsCompleteness(InvalidInput):
    pass


class LengthMismatch(InvalidInput):
    pass


class NotAdmissible(InvalidInput):
    pass


class NotExactlyFinite(InvalidInput):
    pass


class WindowTooShort(InvalidInput):
    pass


class QOutOfRange(InvalidInput):
    pass


class PreconditionViolated(InvalidInput):
    pass


class TooManyZeros(BudgetExceeded):
    pass


class PeriodTooLarge(BudgetExceeded):
    pass


class WordTooLong(BudgetExceeded):
    pass


class EnumerationBudgetExceeded(BudgetExceeded):
    pass
