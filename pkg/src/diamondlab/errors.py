"""Exception hierarchy.  Every error here maps to CLI exit code 2 unless noted."""


class DiamondLabError(Exception):
    pass


class ModulusError(DiamondLabError, ValueError):
    """A modulus that is not prime (or not a prime power where one is needed)."""


class DomainError(DiamondLabError, ValueError):
    """An argument outside the documented domain of an operation."""


class TruncationError(DiamondLabError):
    """A bracket whose output degree lies beyond the stored window."""


class SchemaError(DiamondLabError, ValueError):
    """Malformed or inconsistent algebra / report data."""


class UnknownGeneratorError(DiamondLabError, KeyError):
    pass


class PresentationSyntaxError(DiamondLabError, ValueError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


class NotNottinghamError(DiamondLabError):
    """The input fails a structural precondition of the diamond analyzer."""
