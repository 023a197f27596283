"""Exception hierarchy shared by the library and the CLI."""


class LagrootError(Exception):
    """Base class for all library errors."""


class ParseError(LagrootError, ValueError):
    """Malformed text or JSON input."""


class PreconditionError(LagrootError, ValueError):
    """An operation was called outside its domain (constant polynomial, critical center, ...)."""


class NotRealRootError(PreconditionError):
    """The selected root is not real, so its binary digits are undefined."""


class InvariantError(LagrootError, RuntimeError):
    """A certified step failed a check that the theory says cannot fail."""


class OracleError(LagrootError, RuntimeError):
    """The reference root finder could not certify its output."""
