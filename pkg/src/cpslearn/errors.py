"""Exception types shared across the package."""


class CpsLearnError(Exception):
    """Base class for all cpslearn errors."""


class ParseError(CpsLearnError):
    """Malformed input text; carries the 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InvalidFamilyError(CpsLearnError):
    """Child/parent indices do not form a valid family."""


class ParameterError(CpsLearnError):
    """Argument outside its documented range."""


class CapacityError(CpsLearnError):
    """Problem size exceeds a configured resource cap."""


class MalformedTableError(CpsLearnError):
    """Score table violates a structural invariant."""
