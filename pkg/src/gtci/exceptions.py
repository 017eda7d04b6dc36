from typing import Dict, Type


class GTCIError(Exception):
    """
    A base class for all errors raised by the package.

    ## Attributes

    `code: int`
        A numeric code identifying the failing check.
    `message: str`
        A human-readable message describing the error.
    `details: str`
        A string containing details about the error.
    `family: str`
        The family (weights, degrees, torsion) being processed, if any.
    """

    def __init__(
        self,
        code: int = 0,
        message: str = "",
        details: str = "",
        family: str = "",
    ):
        super().__init__(message)
        self.code = code
        self.message = message
        self.details = details
        self.family = family

    def __str__(self) -> str:
        return (
            f"{type(self).__name__}("
            + (f"code={self.code}, " if self.code else "")
            + (f"message={self.message}" if self.message else "")
            + (f", details={self.details}" if self.details else "")
            + (f", family={self.family})" if self.family else ")")
        )

    __repr__ = __str__


class InputError(GTCIError):
    """An error raised when degree data or arguments are malformed or inconsistent."""


class OutputError(GTCIError):
    """An error raised when results cannot be written to the requested location."""


class InvariantError(GTCIError):
    """An error raised when an internal consistency check fails for a family."""


class CapacityError(GTCIError):
    """An error raised when a computation exceeds a configured size bound."""


exit_codes: Dict[Type[GTCIError], int] = {  # map error classes to CLI exit codes
    InvariantError: 1,
    CapacityError: 1,
    OutputError: 3,
    InputError: 4,
}


def exit_code(error: GTCIError) -> int:
    for cls in type(error).__mro__:
        if cls in exit_codes:
            return exit_codes[cls]
    return 1
