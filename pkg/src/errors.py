"""
Contains the exception hierarchy: TropcyError and its subclasses.

NOTE: this module is private. All functions and objects are available in the main
`tropcy` namespace - use that instead.

"""

from typing import Any, Optional

__all__ = [
    "TropcyError",
    "InputError",
    "FanSupportError",
    "ConditionError",
    "ConvergenceError",
]


class TropcyError(Exception):
    """
    Base class of all errors raised by tropcy.

    Parameters
    ----------
    message : str
        Error message.
    witness : Any, optional
        Offending object (a ray, a cone, a pair of cells...), by default None.

    """

    exit_code: int = 1

    def __init__(self, message: str, witness: Optional[Any] = None) -> None:
        super().__init__(message)
        self.witness = witness


class InputError(TropcyError, ValueError):
    """Raised when the input data is malformed or inconsistent."""


class FanSupportError(InputError):
    """Raised when two fans that should be compared have different supports."""


class ConditionError(TropcyError, ValueError):
    """Raised when a mathematical condition on the data fails."""

    exit_code = 2


class ConvergenceError(TropcyError, RuntimeError):
    """Raised when the transport solver did not reach its tolerance."""

    exit_code = 3


