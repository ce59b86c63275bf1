"""
Custom exception base class for the viaphy solver toolkit.

This module defines `ViaphyException`, the base exception from which all
application-specific errors should inherit.

Key responsibilities:
- Clean separation of user-facing messages vs. developer/debugging logs
- Standard structure for error codes, contexts, and process exit-code mapping
- Centralized support for structured CLI output and log formatting

To create a new custom exception:
1. Subclass `ViaphyException` in `local_exceptions.py`
2. Optionally override `exit_code`
3. Pass `user_message`, `log_message`, `error_type`, etc.

Example:
    class SeedCapExceeded(ViaphyException):
        exit_code = ExitCode.INFEASIBLE
        def __init__(self, seeds: int):
            super().__init__(
                user_message="Seed enumeration exceeded its cap.",
                log_message=f"Visited {seeds} seeds before giving up",
                error_type="SEED_CAP",
                internal_context={"seeds": seeds},
            )

These exceptions are caught once, by the command handler, which logs them and
turns them into an exit code.
"""

from enum import IntEnum
from typing import Any, Dict, Optional


class ExitCode(IntEnum):
    SUCCESS = 0
    INPUT_ERROR = 1
    INFEASIBLE = 2


class ViaphyException(Exception):
    """
    Base exception class for viaphy.

    This exception is designed to cleanly separate:
    - What is printed for the **user**
    - What is logged for **developers**
    """

    exit_code = ExitCode.INPUT_ERROR  # Subclasses may override this default

    def __init__(
        self,
        *,
        user_message: str,
        log_message: Optional[str] = None,
        error_type: Optional[str] = None,
        public_context: Optional[Dict[str, Any]] = None,
        internal_context: Optional[Dict[str, Any]] = None,
        exit_code_override: Optional[int] = None,
        log_level: Optional[str] = None,
    ):
        """
        Args:
                user_message: Safe, short message printed on stderr.
                public_context: Optional context printed with the message (e.g., {"line": 3}).

                log_message: Detailed internal message for logs/debugging.
                internal_context: Optional context to include in logs only.

                error_type: Optional machine-readable code.
                exit_code_override: Override the default exit code for this exception.
                log_level: specifies the level of the logging system of exception instance
        """
        super().__init__(user_message)

        self.user_message = user_message
        self.log_message = log_message or user_message
        self.error_type = error_type or self.__class__.__name__.upper()
        self.public_context = public_context or {}
        self.internal_context = internal_context or {}
        self.exit_code = ExitCode(exit_code_override) if exit_code_override is not None else self.exit_code
        self.log_level = log_level.lower() if log_level else "warning"

    def __str__(self):
        return f"[{self.error_type}] {self.user_message}"
