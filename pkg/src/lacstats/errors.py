"""Exception and warning types shared across the library."""


class LacstatsError(Exception):
    """Base class for all library-specific errors."""


class InvalidSpec(LacstatsError, ValueError):
    """Sequence specification violates its own invariants (a1 <= 0, C <= 1, ...)."""


class LacunarityViolation(LacstatsError, ValueError):
    """A generated sequence failed the a_{n+1} >= C * a_n scan."""


class PrecisionExhausted(LacstatsError, RuntimeError):
    """The requested working precision exceeds what the big-float backend supports."""


class OutOfRange(LacstatsError, ValueError):
    """An argument fell outside the supported range of an operation."""


class DimensionTooLarge(LacstatsError, ValueError):
    """Kernel dimension above the supported cap."""


class DegenerateWindow(LacstatsError, ValueError):
    """Window intensity L <= 0."""


class DegenerateScale(LacstatsError, ValueError):
    """Normalization scale vanishes (L = 0 in the CLT rescaling)."""


class CostGuardExceeded(LacstatsError, RuntimeError):
    """Predicted enumeration cost above the documented guard."""


class TolUnreachable(LacstatsError, RuntimeError):
    """Requested tolerance would need a Fourier cutoff beyond the supported maximum."""


class ParseError(LacstatsError, ValueError):
    """Config file is syntactically malformed; carries the offending line number."""

    def __init__(self, message, line_no=None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


class ValidationError(LacstatsError, ValueError):
    """Config parsed fine but violates an invariant; message names the invariant."""


class WindowTooWideWarning(UserWarning):
    """L/N > 1: every center sees every point, with multiplicity from integer shifts."""
