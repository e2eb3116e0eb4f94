"""Exception hierarchy."""


class RigMatchError(Exception):
    """Base class for all errors raised by rigmatch."""


class ParseError(RigMatchError, ValueError):
    """A graph or query file line could not be parsed."""

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class FormatError(ParseError):
    """Input parsed but violates the file format (missing labels, counts...)."""


class GraphRangeError(RigMatchError, IndexError):
    """A node id lies outside ``[0, num_nodes)``."""


class ValidationError(RigMatchError, ValueError):
    """A query is structurally invalid (disconnected, conflicting edges...)."""


class PreconditionError(RigMatchError, ValueError):
    """An operation was called on input it does not accept."""


class OracleGuardError(RigMatchError):
    """The brute-force oracle refused an instance that is too large."""

    def __init__(self, estimate, guard):
        self.estimate = estimate
        self.guard = guard
        super().__init__(f"search space estimate {estimate} exceeds oracle guard {guard}")


class EmptyRIGError(RigMatchError, ValueError):
    """A search order was requested for an empty runtime index graph."""
