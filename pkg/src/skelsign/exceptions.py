"""Exception types raised by skelsign.

Each error also derives from the closest builtin so that callers which only know about ``ValueError`` or
``KeyError`` keep working.
"""


class SkelsignError(Exception):
    "Base class for all skelsign errors."


class ShapeError(SkelsignError, ValueError):
    "Array dimensions are inconsistent with an operation."


class ContractError(SkelsignError, ValueError):
    "A caller violated the precondition of an operation."


class ParseError(SkelsignError, ValueError):
    """A cell of a skeleton file could not be read as a finite number, or the file is not UTF-8 text.

    Attributes:
        row: Zero-based row index in the file (header included).
        col: Zero-based column index.
    """

    def __init__(self, message, row, col):
        super().__init__("{} (row {}, column {})".format(message, row, col))
        self.row = row
        self.col = col


class FormatError(SkelsignError, ValueError):
    "A file does not have the expected layout."


class LengthError(SkelsignError, ValueError):
    "A sequence is longer than the padded length."


class LabelingError(SkelsignError, KeyError):
    "A sample has no entry in the label file."

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class InsufficientDataError(SkelsignError, ValueError):
    "Not enough samples to build the requested dataset split."


class SpecError(SkelsignError, ValueError):
    "A model specification or a set of hyperparameters is invalid."


class CheckpointError(SkelsignError, ValueError):
    "A checkpoint could not be read."
