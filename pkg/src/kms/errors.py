"""Exceptions raised by kms.

Each subclasses the builtin that fits, so callers that only know
about ``ValueError`` / ``RuntimeError`` keep working.
"""


class ConfigError(ValueError):
    """Run configuration does not match the schema.

    Message starts with the dotted path of the offending field.
    """


class HypothesisError(ValueError):
    """A precondition that is one of the hypotheses (H0)-(H4) fails."""

    def __init__(self, hypothesis: str, message: str):
        self.hypothesis = hypothesis
        super().__init__(f"({hypothesis}) {message}")


class DegenerateCoefficientError(ValueError):
    """a(alpha) is below the floor a_min."""


class SolverError(RuntimeError):
    """An iterative solver did not converge."""


class MonotonicityError(SolverError):
    """Monotone iterates moved the wrong way."""


class FixedPointError(RuntimeError):
    """Fewer than two fixed points were found in a bump."""

    def __init__(self, message: str, k: int, curve=None, margins=None):
        self.k = k
        self.curve = curve
        self.margins = margins
        super().__init__(message)


class OrderingError(RuntimeError):
    """The masses of the fixed points do not interleave with the knots."""
