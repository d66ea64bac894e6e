"""Exception types shared across the package.

Every domain error derives from MultidegError and carries the process exit
code the CLI should use when the error escapes to the top level.
"""

from __future__ import annotations


class MultidegError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1


class ValidationError(MultidegError):
    """Malformed or inconsistent input (bad schema, dimensions, values)."""


class IsobaricError(ValidationError):
    """Exponent rows do not share a common weighted degree.

    ``offending_rows`` lists the 0-based row indices whose weighted sum
    differs from the first row's.
    """

    def __init__(self, message: str, offending_rows: tuple[int, ...]):
        super().__init__(message)
        self.offending_rows = offending_rows


class NonSquareError(MultidegError):
    """A square exponent matrix is required (one monomial per hypersurface)."""

    exit_code = 2


class NotWellPresentedError(MultidegError):
    """The map fails the well-presentedness conditions.

    ``report`` holds the WellPresentedReport with the violations found.
    """

    exit_code = 2

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class DivisionByZeroFormError(MultidegError):
    """A substitution turned a denominator factor into the zero polynomial."""


class PowerEvaluationError(MultidegError):
    """Evaluation of repeated hypersurface factors needs proportional classes.

    Intersection numbers for non-squarefree monomials are only defined for
    the generic projective-space model, where every hypersurface class is a
    multiple of the hyperplane class.
    """


class InternalInvariantError(MultidegError):
    """Cross-checking routes disagreed or an internal consistency check failed."""

    exit_code = 3
