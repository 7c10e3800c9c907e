"""Exception types shared across the package.

The CLI prints ``type(exc).__name__`` verbatim, so names are part of the
public surface.
"""


class SymMomentsError(Exception):
    pass


class OracleBoundExceeded(SymMomentsError):
    pass


class ExactRangeExceeded(SymMomentsError):
    pass


class FormatError(SymMomentsError, ValueError):
    pass


class InvariantViolation(SymMomentsError):
    def __init__(self, check: str, detail: str = ""):
        self.check = check
        self.detail = detail
        super().__init__(f"{check}: {detail}" if detail else check)


class OutOfRange(SymMomentsError, ValueError):
    pass


class NotPositiveDefinite(SymMomentsError, ValueError):
    pass


class InvalidDiscriminant(SymMomentsError, ValueError):
    pass


class NonFundamentalDiscriminant(SymMomentsError, ValueError):
    pass


class HypothesisViolated(SymMomentsError, ValueError):
    pass


class InsufficientSamples(SymMomentsError, ValueError):
    pass
