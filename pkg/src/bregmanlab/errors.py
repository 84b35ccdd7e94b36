"""Exception taxonomy shared across the laboratory."""


class BregmanLabError(Exception):
    """Base class for all library errors."""


class ParameterError(BregmanLabError, ValueError):
    """An argument violates a documented precondition (bad exponent, domain, ...)."""


class UnsupportedModelError(ParameterError):
    """The requested operation is undefined for this semigroup model."""


class SingularityError(ParameterError):
    """Evaluation was requested exactly at a non-removable singularity."""


class AccuracyError(BregmanLabError, RuntimeError):
    """A numerical routine could not certify its accuracy target.

    Carries the achieved error bound so callers can downgrade a claim to
    "inconclusive" instead of "fail".
    """

    def __init__(self, message, achieved=None, target=None):
        super().__init__(message)
        self.achieved = achieved
        self.target = target


class DegenerateSampleError(BregmanLabError, RuntimeError):
    """A sampling campaign produced no usable samples (e.g. every denominator 0)."""
