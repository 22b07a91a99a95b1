"""Exception hierarchy shared by every module."""


class HermsolveError(Exception):
    """Base class for all library errors."""


class NotHermitian(HermsolveError, ValueError):
    def __init__(self, what="matrix"):
        super().__init__(f"{what} is not Hermitian")
        self.what = what


class NotPsd(HermsolveError, ValueError):
    def __init__(self, what="matrix"):
        super().__init__(f"{what} is not positive semi-definite")
        self.what = what


class DimensionMismatch(HermsolveError, ValueError):
    """Raised when block or operand shapes do not conform.

    ``where`` carries the offending block coordinates (or operand names).
    """

    def __init__(self, message, where=None):
        if where is not None:
            message = f"{message} at {where}"
        super().__init__(message)
        self.where = where


class Unsolvable(HermsolveError):
    """The equation named in the message has no (Hermitian/PSD) solution."""


class RangeHypothesisViolated(HermsolveError, ValueError):
    pass


class FormulaRangeError(HermsolveError):
    """A closed-form value fell outside [0, n]; some precondition was missed."""


class UnsupportedQuery(HermsolveError, ValueError):
    pass


class RouteDisagreement(HermsolveError):
    """Closed-condition and profile routes returned different verdicts."""


class SingularMatrix(HermsolveError, ValueError):
    pass
