"""Exception types shared across the package.

The CLI maps these onto exit codes: usage errors exit 2 (argparse),
anything raised here exits 3, plain OSError exits 4.
"""


class BrewvecError(Exception):
    """Base class for all brewvec errors."""


class ParseError(BrewvecError):
    """A check-in line could not be parsed; carries the 1-based line number."""

    def __init__(self, line_number: int, message: str):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class ValidationError(BrewvecError):
    """A value violates a documented contract (rating range, weight sum, NaN)."""


class NotFoundError(BrewvecError):
    """A beer id or flavor tag is not in the model's vocabulary."""


class DataError(BrewvecError):
    """The input data cannot support the requested operation."""


class FormatError(BrewvecError):
    """A model file is malformed (bad magic, truncated payload, bad header)."""


class TrainingError(BrewvecError):
    """Training produced non-finite values and was aborted."""
