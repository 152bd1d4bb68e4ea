from __future__ import annotations

from typing import Optional

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3


class PolarError(Exception):
    """Base class for every error raised by the toolkit."""

    exit_code = EXIT_USAGE


class InvalidArgumentError(PolarError, ValueError):
    pass


class FieldMismatchError(PolarError, ValueError):
    pass


class DomainError(PolarError, ValueError):
    pass


class ResourceCapError(PolarError, RuntimeError):
    def __init__(self, metric: str, size: int, cap: int, unit: str = "n") -> None:
        self.metric = metric
        self.size = size
        self.cap = cap
        super().__init__(f"{metric} skipped: resource cap ({unit}={size} exceeds {cap})")


class FunctionFileError(PolarError, ValueError):
    exit_code = EXIT_IO

    def __init__(self, message: str, *, line: Optional[int] = None, offset: Optional[int] = None) -> None:
        self.line = line
        self.offset = offset
        location = ""
        if line is not None:
            location = f" (line {line}" + (f", offset {offset})" if offset is not None else ")")
        super().__init__(message + location)


class VerificationFailure(PolarError):
    """Raised after a report was emitted when one of its checks failed."""

    exit_code = EXIT_VERIFICATION_FAILED


__all__ = [
    "PolarError",
    "InvalidArgumentError",
    "FieldMismatchError",
    "DomainError",
    "ResourceCapError",
    "FunctionFileError",
    "VerificationFailure",
    "EXIT_OK",
    "EXIT_VERIFICATION_FAILED",
    "EXIT_USAGE",
    "EXIT_IO",
]
