"""
Exception hierarchy for the verification engine.

Every failure the engine reports on purpose derives from `EngineError`, so the
command-line front end can map it to an exit code without catching unrelated
exceptions.
"""

from typing import Optional


class EngineError(Exception):
    """Base class for all engine failures."""


class InadmissibleInputError(EngineError, ValueError):
    """An input lies outside the domain an operation accepts."""


class NotASubgroupError(InadmissibleInputError):
    """A coset computation was asked for with a non-subgroup argument."""


class InsufficientPrecisionError(EngineError, ArithmeticError):
    """Interval evaluation could not decide a floor at the maximum precision."""


class ResourceLimitError(EngineError):
    """A configured cap (group order, partition size, exact evaluation) was exceeded."""


class MissingQuotientBoundError(EngineError):
    """No usable bound exists for the quotient degree of a pipeline step."""

    def __init__(self, degree: int, message: Optional[str] = None):
        self.degree = degree
        super().__init__(message or f"no quotient bound available for degree {degree}")
