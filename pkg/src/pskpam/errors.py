"""Exception types carrying a stable machine-readable code."""


class PskPamError(ValueError):
    code = "ERROR"

    def __init__(self, message, code=None):
        super().__init__(message)
        if code is not None:
            self.code = code


class ConstellationError(PskPamError):
    code = "INVALID_CONSTELLATION"


class AnalyticError(PskPamError):
    code = "INVALID_ARGUMENT"


class QuadratureError(AnalyticError):
    code = "QUAD_NONCONVERGED"


class HarnessError(PskPamError):
    code = "HARNESS"
