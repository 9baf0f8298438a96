"""Exception types shared across the package."""


class QcdError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(QcdError):
    """Invalid configuration (qubit count, depth budget, target mismatch)."""


class InvalidActionError(QcdError):
    """Gate/qubit arity or index errors that callers must prevent."""


class InvalidStateError(QcdError):
    """Operation on a finished episode or terminated circuit."""


class ParseError(QcdError):
    """Malformed challenge spec string or serialized array/circuit file."""
