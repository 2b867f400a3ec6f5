"""Exception types shared across genrep."""


class GenrepError(Exception):
    """Base class."""


class SpecError(GenrepError, ValueError):
    """A malformed ring/module description or argument."""


class CapExceeded(GenrepError):
    """An enumeration would exceed a configured size cap."""


class InvariantViolation(GenrepError):
    """An internal consistency check failed; carries a counterexample."""

    def __init__(self, message, counterexample=None):
        super().__init__(message)
        self.counterexample = counterexample
