"""Exception hierarchy shared by all modules."""


class QDChannelError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatch(QDChannelError, ValueError):
    pass


class NonHermitianInput(QDChannelError, ValueError):
    pass


class NotCPTP(QDChannelError, ValueError):
    pass


class TRangeViolation(QDChannelError, ValueError):
    """Isotropic parameter ``t`` outside the completely positive range."""

    def __init__(self, t, lower, upper, branch):
        self.t = t
        self.lower = lower
        self.upper = upper
        self.branch = branch
        bound = lower if t < lower else upper
        super().__init__(
            f"t={t!r} violates the {branch} branch range "
            f"[{lower!r}, {upper!r}] (bound {bound!r})"
        )


class InvalidPOVM(QDChannelError, ValueError):
    pass


class NotContractive(QDChannelError, ValueError):
    pass


class DegenerateForm(QDChannelError, ValueError):
    """Qubit parameters describe a completely decohering channel instead."""


class NotDecohering(QDChannelError, ValueError):
    pass


class NotDensityMatrix(QDChannelError, ValueError):
    pass


class BallViolation(QDChannelError, ValueError):
    pass


class NotUnitary(QDChannelError, ValueError):
    pass


class UnsupportedDimension(QDChannelError, ValueError):
    pass


class ParseError(QDChannelError, ValueError):
    def __init__(self, message, line=None, offset=None):
        self.line = line
        self.offset = offset
        where = f" (line {line}, offset {offset})" if line is not None else ""
        super().__init__(message + where)
