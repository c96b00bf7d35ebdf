"""Exception types raised by knotbound."""


class DomainError(ValueError):
    """An argument lies outside the domain of a function."""


class FeasibilityError(DomainError):
    """A configuration (t, |OP|, |OQ|) violates the admissibility constraints."""


class ConvergenceError(RuntimeError):
    """A bracketed solver exhausted its iteration budget."""


class StructureError(RuntimeError):
    """The detour does not have the four-arc shape q < gamma < pi - p."""


class DisconnectedGraphError(RuntimeError):
    """The oracle's visibility graph has no path from Q to P."""


class NoCrossingError(RuntimeError):
    """``L(t) - (t - 1)`` does not change sign on the requested range.

    ``holds_throughout`` is True when the inequality held at every scanned
    point, in which case ``t_sup`` is the right end of the range.
    """

    def __init__(self, message, holds_throughout=False, t_sup=None):
        super().__init__(message)
        self.holds_throughout = holds_throughout
        self.t_sup = t_sup


class CertificationError(RuntimeError):
    """Fine-grid re-verification of a threshold left no positive margin."""


class CurveFormatError(ValueError):
    """A curve file could not be parsed."""

    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


class DegenerateCurveError(ValueError):
    """A polygonal curve violates its validity invariants."""
