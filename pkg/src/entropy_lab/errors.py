class EntropyLabError(Exception):
    """Root of all errors raised by `entropy_lab`."""


class InvalidInputError(EntropyLabError, ValueError):
    """An input violates a structural invariant (shape, Hermiticity, normalization)."""


class DomainError(EntropyLabError, ValueError):
    """A function is undefined on the spectrum or parameter it was given."""
