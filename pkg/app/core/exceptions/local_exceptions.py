"""
Custom exception classes for the viaphy toolkit.
"""
import logging
from typing import Any, Dict, Optional

from app.core.exceptions.base_exceptions import ExitCode, ViaphyException
from app.core.exceptions import exception_constants

logger = logging.getLogger(__name__)


class InstanceFormatError(ViaphyException):
    """Positioned syntax error in a tree, web, or instance text"""

    def __init__(
        self,
        user_message: str,
        line: Optional[int] = None,
        column: Optional[int] = None,
        internal_context: Optional[Dict[str, Any]] = None,
    ):
        self.line = line
        self.column = column
        position = {}
        if line is not None:
            position["line"] = line
        if column is not None:
            position["column"] = column

        super().__init__(
            user_message=user_message,
            log_message=_positioned(user_message, line, column),
            public_context=position,
            internal_context=internal_context,
        )

    def __str__(self):
        return f"[{self.error_type}] {_positioned(self.user_message, self.line, self.column)}"


class InvalidInstanceError(ViaphyException):
    """Structurally invalid tree, web, or instance"""

    def __init__(self, user_message=None, internal_context: Optional[dict] = None):
        super().__init__(user_message=user_message, internal_context=internal_context)


class UnknownSpeciesError(ViaphyException):
    """A species name or index is not part of the instance"""

    def __init__(self, name: str):
        super().__init__(
            user_message=exception_constants.UNKNOWN_SPECIES.format(name=name),
            public_context={"species": name},
        )


class SourceFormatError(ViaphyException):
    """Unreadable or invalid reduction source input"""
    pass


class UnsupportedInstanceError(ViaphyException):
    """Operation not defined for this kind of instance"""

    def __init__(self, operation: str):
        super().__init__(
            user_message=exception_constants.AND_NODE_UNSUPPORTED.format(operation=operation),
            internal_context={"operation": operation},
        )


class InfeasibleExtensionError(ViaphyException):
    """No viable superset exists"""

    exit_code = ExitCode.INFEASIBLE

    def __init__(self, internal_context: Optional[dict] = None):
        super().__init__(
            user_message=exception_constants.EXTENSION_INFEASIBLE,
            log_level="error",
            internal_context=internal_context,
        )


class CapacityExceededError(ViaphyException):
    """A configured enumeration or time cap was hit"""

    exit_code = ExitCode.INFEASIBLE

    def __init__(self, limit: str, bound: Any, cap: Any, user_message: Optional[str] = None):
        self.limit = limit
        self.bound = bound
        self.cap = cap

        message = user_message or exception_constants.CAPACITY_EXCEEDED.format(
            limit=limit, bound=bound, cap=cap
        )
        super().__init__(
            user_message=message,
            public_context={"limit": limit, "bound": bound, "cap": cap},
        )


def _positioned(message: str, line: Optional[int], column: Optional[int]) -> str:
    if line is None:
        return message
    if column is None:
        return f"line {line}: {message}"
    return f"line {line}, column {column}: {message}"


class InvalidParameterError(ViaphyException):
    """A solver or decomposition argument is out of range"""

    def __init__(self, user_message: str, internal_context: Optional[dict] = None):
        super().__init__(user_message=user_message, internal_context=internal_context)
