from typing import Optional


class XbowError(Exception):
    """Base class for all errors raised by the toolkit"""

    exit_code = 2

    def __init__(self, message: str, stage: Optional[str] = None, line: Optional[int] = None):
        super().__init__(message)
        self.message = message
        self.stage = stage
        self.line = line

    def __str__(self):
        text = self.message
        if self.line is not None:
            text = f"line {self.line}: {text}"
        if self.stage:
            text = f"[{self.stage}] {text}"
        return text

    def in_stage(self, stage: str) -> 'XbowError':
        """Tag the error with a pipeline stage unless one is already set"""
        if not self.stage:
            self.stage = stage
        return self


class UsageError(XbowError):
    """Invalid command line"""

    exit_code = 1


class SpecError(XbowError):
    """Invalid attribute specification"""


class DataFormatError(XbowError):
    """Malformed input file"""


class DimensionMismatchError(XbowError):
    """Vector, codebook or parameter dimensionalities disagree"""


class MissingLabelError(XbowError):
    """A label required for a bag is not present in the labels table"""


class CodebookError(XbowError):
    """Codebook cannot be learned, saved or loaded"""
