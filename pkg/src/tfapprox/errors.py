"""Exception types raised by tfapprox."""


class TFApproxError(Exception):
    """Base class for all library errors."""


class DivisibilityError(TFApproxError, ValueError):
    pass


class LatticeMembershipError(TFApproxError, ValueError):
    pass


class DimensionMismatch(TFApproxError, ValueError):
    pass


class NotHermitian(TFApproxError, ValueError):
    pass


class InvalidRank(TFApproxError, ValueError):
    pass


class ConfigMismatch(TFApproxError, ValueError):
    pass


class ConvergenceFailure(TFApproxError, RuntimeError):
    pass


class ParseError(TFApproxError, ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class LengthMismatch(TFApproxError, ValueError):
    pass
