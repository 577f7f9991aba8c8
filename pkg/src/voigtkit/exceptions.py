"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input lies outside an operation's mathematical domain.

    ``index`` identifies the offending element for batch inputs,
    ``point`` the offending grid point for scans, when known.
    """

    def __init__(self, message, index=None, point=None):
        super().__init__(message)
        self.index = index
        self.point = point


class ReflectionOverflowError(OverflowError):
    """exp(-z^2) exceeded the binary64 range while reflecting a lower
    half-plane argument; the function value is not representable."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class OracleConvergenceError(RuntimeError):
    """The oracle's independent evaluation routes failed to converge or
    to agree at the certified precision."""


class BenchmarkError(RuntimeError):
    """A timing run is invalid (wrong results, unusable timer resolution,
    or a broken measurement protocol)."""
