"""Exception hierarchy shared by all modules."""


class TcplogError(Exception):
    """Base class for every error raised by this package."""


class ProgramError(TcplogError):
    """A program violates a structural invariant.

    ``code`` is a short stable identifier (``range-restriction``,
    ``predicate-overlap``, ``arity-conflict``, ...) that callers can
    dispatch on without parsing the message.
    """

    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


class ParseError(ProgramError):
    """Syntax or load-time validation error with a source position."""

    def __init__(self, code, message, line=None, column=None):
        where = f"{line}:{column}: " if line is not None else ""
        super().__init__(code, where + message)
        self.line = line
        self.column = column


class UnknownPredicate(TcplogError):
    pass


class ManagerMismatch(TcplogError):
    """Formula handles from two different managers were combined."""


class UnregisteredVariable(TcplogError):
    pass


class WeightError(TcplogError):
    """Missing weight, or a weight pair that does not sum to one."""


class CompilationBlowup(TcplogError):
    """The decision diagram grew past the configured node ceiling."""

    def __init__(self, limit):
        super().__init__(f"decision diagram exceeded node limit of {limit}")
        self.limit = limit


class EnumerationCapExceeded(TcplogError):
    def __init__(self, size, cap):
        super().__init__(f"{size} variables exceeds enumeration cap of {cap}")
        self.size = size
        self.cap = cap
