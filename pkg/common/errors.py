"""Error hierarchy shared by every package.

Two branches map onto the command-line exit codes: ``ValidationFailure``
(malformed or invariant-violating input, exit 1) and
``NumericDefectExceeded`` (a numeric tolerance was not met, exit 2).
Each error may carry a ``witness`` mapping naming the offending face, tuple
or quadruple together with the measured defect.
"""

from __future__ import annotations

from typing import Any, Dict, Mapping, Optional


class GerbeLabError(Exception):
    """Base class for all domain errors."""

    exit_code = 1

    def __init__(self, message: str, witness: Optional[Mapping[str, Any]] = None) -> None:
        super().__init__(message)
        self.witness: Dict[str, Any] = dict(witness or {})

    def to_dict(self) -> Dict[str, Any]:
        return {"error": type(self).__name__, "message": str(self), "witness": self.witness}


class ValidationFailure(GerbeLabError):
    exit_code = 1


class NumericDefectExceeded(GerbeLabError):
    exit_code = 2


# cech
class NotACocycle(ValidationFailure):
    pass


class NonIntegralLift(ValidationFailure):
    pass


class NotTrivial(ValidationFailure):
    pass


class ComplexMismatch(ValidationFailure):
    pass


class NotSimplicial(ValidationFailure):
    pass


class DegreeOutOfRange(ValidationFailure):
    pass


# finite gerbes
class NotAssociative(ValidationFailure):
    pass


class NotNormalized(ValidationFailure):
    pass


class NotCompatible(ValidationFailure):
    pass


class NotOverIdentity(ValidationFailure):
    pass


class NotSameFiber(ValidationFailure):
    pass


class NotDescendable(ValidationFailure):
    pass


class NotComposable(ValidationFailure):
    pass


# descent
class CocycleFails(ValidationFailure):
    pass


class NotATrivialization(ValidationFailure):
    pass


# sampled SU(2) calculus
class InvalidGrid(ValidationFailure):
    pass


class EndpointMismatch(ValidationFailure):
    pass


class BoundaryMismatch(ValidationFailure):
    pass


class BoundaryInconsistent(ValidationFailure):
    pass


class NoUnhitPoint(NumericDefectExceeded):
    pass


class PoleTooClose(ValidationFailure):
    pass


# inputs
class SchemaError(ValidationFailure):
    pass
