"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """Input outside a function's documented domain (non-prime, out of range)."""


class InvariantViolation(RuntimeError):
    """An internal consistency check failed; indicates a bug, not bad input."""


class MalformedRecordError(ValueError):
    """A persisted result line could not be parsed or has an unknown schema."""
