"""Exceptions raised by the library; the CLI maps them to exit codes."""

from typing import Any, Dict, Optional


class BatchColorError(Exception):
    exit_code = 2

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.details = details or {}


class SizeLimitExceeded(BatchColorError):
    """An exact oracle was asked to search a component above its desk-scale cap."""

    exit_code = 3

    def __init__(self, size: int, limit: int, what: str = "oracle"):
        super().__init__(f"{what}: component of {size} vertices exceeds limit {limit}",
                         {"size": size, "limit": limit})
        self.size = size
        self.limit = limit


class ImproperColoring(BatchColorError):
    """An algorithm under test broke the online contract."""


class InconsistentInstance(BatchColorError):
    """An instance or adversary emitted edges or ids that violate the batch model."""


class InfeasibleBatch(BatchColorError):
    """BatchColor_f found no available color under its cap."""


class InvariantViolation(BatchColorError):
    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        super().__init__(message, diagnostics)
        self.diagnostics = diagnostics or {}


class UncoveredPoint(InvariantViolation):
    pass


class NotAForest(BatchColorError):
    pass


class PoolExhausted(BatchColorError):
    """The tree adversary ran out of good trees; its counting argument was broken."""


class ParameterError(BatchColorError):
    exit_code = 1


class InstanceFormatError(BatchColorError):
    exit_code = 1


class ScheduleError(ParameterError):
    pass
