"""Exception hierarchy shared across the package."""


class SlideVaRError(Exception):
    """Base class for every error raised by this package."""


class DomainError(SlideVaRError):
    """An argument lies outside the mathematical domain of an operation."""


class ValidationError(SlideVaRError):
    """A value or configuration violates a construction invariant."""


class AdmissibilityError(SlideVaRError):
    """A risk-aversion function fails positivity, monotonicity or unit norm."""


class AlignmentError(SlideVaRError):
    """Positions do not share a common scenario count."""


class CapabilityError(SlideVaRError):
    """The requested operation is not computable for the given inputs."""


class InputError(SlideVaRError):
    """An input series is unusable, e.g. too short for the requested window."""


class ParseError(SlideVaRError):
    """A configuration or data file could not be parsed."""
