"""Exception hierarchy shared by the numeric packages and the CLI."""

from typing import Optional, Sequence


class JsrError(Exception):
    """Base class for every error raised on purpose by this project."""


class SingularMatrixError(JsrError, ValueError):
    pass


class InputFormatError(JsrError, ValueError):
    pass


class DimensionCapError(JsrError):
    """A lifted dimension or a word enumeration exceeds its configured cap."""

    def __init__(self, what: str, size: int, cap: int):
        super().__init__(f"{what} of size {size} exceeds the cap {cap}")
        self.what = what
        self.size = size
        self.cap = cap


class NumericalFailure(JsrError):
    """The interior-point solver stalled, or a bisection probe could not be resolved."""

    def __init__(self, message: str, gamma: Optional[float] = None):
        if gamma is not None:
            message = f"{message} (gamma={gamma!r})"
        super().__init__(message)
        self.gamma = gamma


class BracketError(JsrError):
    """Initial bisection bracket is inverted: lower bound above the upper bound."""

    def __init__(self, lo: float, hi: float):
        super().__init__(f"bisection bracket inverted: lo={lo!r} > hi={hi!r}")
        self.lo = lo
        self.hi = hi


class CertificateError(JsrError):
    """A polynomial is not a valid SOS Lyapunov certificate at the requested gamma."""

    def __init__(self, message: str, status: str = "infeasible", residuals: Sequence = ()):
        super().__init__(message)
        self.status = status
        self.residuals = list(residuals)
