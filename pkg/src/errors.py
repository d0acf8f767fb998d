from typing import Optional


class TradeError(Exception):
    """Base class for every error raised by the scitrade package."""
    exit_code = 3


class InputError(TradeError):
    """Bad input data, arguments or configuration (CLI exit code 2)."""
    exit_code = 2


class ParseError(InputError):
    """A row of a CSV input could not be parsed."""
    def __init__(self, message: str, line: Optional[int] = None, source: Optional[str] = None):
        self.line = line
        self.source = source
        where = ""
        if source:
            where += f"{source}: "
        if line is not None:
            where += f"line {line}: "
        super().__init__(f"{where}{message}")


class DataValidationError(InputError):
    """Parsed data violates a domain invariant (negative count, empty map, ...)."""


class UnmappedJournalError(DataValidationError):
    """An edge references a journal missing from the category map (strict mode)."""
    def __init__(self, journal: str, year: int):
        self.journal = journal
        self.year = year
        super().__init__(f"journal {journal!r} (year {year}) has no category assignment")


class ConfigError(InputError):
    """Configuration or synthetic spec is invalid."""


class UnknownFieldError(InputError, LookupError):
    """A field identifier is not part of the matrix universe."""
    def __init__(self, field: str):
        self.field = field
        super().__init__(f"unknown field {field!r}")


class DomainError(InputError, ValueError):
    """An operation was called outside its mathematical domain."""


class InvariantViolation(TradeError):
    """An internal consistency check failed (CLI exit code 3)."""
    exit_code = 3
