# app/utils/errors.py — fault hierarchy shared by every module
from __future__ import annotations

from typing import Optional


class ToolkitError(ValueError):
    """Base class for domain/validation faults. `code` is the stable fault name."""

    code = "ToolkitError"

    def __init__(self, message: str = "") -> None:
        super().__init__(message or self.code)


class PointNotInDomain(ToolkitError):
    code = "PointNotInDomain"


class InfinityHasNoEuclideanDistance(ToolkitError):
    code = "InfinityHasNoEuclideanDistance"


class SampleTooSmall(ToolkitError):
    code = "SampleTooSmall"


class DensityUndefinedAtInfinity(ToolkitError):
    code = "DensityUndefinedAtInfinity"


class UnknownCoveringDescriptor(ToolkitError):
    code = "UnknownCoveringDescriptor"


class StepTooLargeForPoint(ToolkitError):
    code = "StepTooLargeForPoint"


class EuclideanKindAtInfinity(ToolkitError):
    code = "EuclideanKindAtInfinity"


class BudgetTooSmall(ToolkitError):
    code = "BudgetTooSmall"


class DegenerateSet(ToolkitError):
    code = "DegenerateSet"


class LevelOutOfRange(ToolkitError):
    code = "LevelOutOfRange"


class BadParameters(ToolkitError):
    code = "BadParameters"


class EmptyCorpus(ToolkitError):
    code = "EmptyCorpus"


class SuiteInapplicable(ToolkitError):
    code = "SuiteInapplicable"


class ParseError(ToolkitError):
    """Malformed text input; `position` is the 0-based character offset."""

    code = "ParseError"

    def __init__(self, message: str, text: str = "", position: Optional[int] = None) -> None:
        self.text = text
        self.position = position
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"{message}{where}: {text!r}" if text else f"{message}{where}")


class PointFormatError(ParseError):
    code = "PointFormatError"


class DomainSpecError(ParseError):
    code = "DomainSpecError"
