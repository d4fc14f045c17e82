"""Exception hierarchy shared by every module."""


class ScrambleError(Exception):
    """Base class for all errors raised by scramblemetry."""


class DimensionError(ScrambleError, ValueError):
    """Operands act on different numbers of qubits."""


class LimitError(ScrambleError):
    """A size limit (``n_max`` or ``ptm_n_max``) would be exceeded."""


class NotUnitaryError(ScrambleError, ValueError):
    """An operator expected to be unitary is not, within tolerance."""


class NormalizationError(ScrambleError, ValueError):
    """A spectrum is not normalized, or cannot be."""


class ParseError(ScrambleError):
    """Malformed circuit or operator text.

    Attributes:
        line: 1-based line number of the offending token.
        column: 1-based column of the offending token.
    """

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
