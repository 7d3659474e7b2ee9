"""Exception types shared across the package."""


class UsageError(ValueError):
    """Bad argument: unknown point handle, empty sample, out-of-range parameter."""


class UnsupportedModelError(RuntimeError):
    """The requested operation needs a service this space model does not provide."""


class ModelError(RuntimeError):
    """A model-level invariant failed; carries a witness of the violation."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class UnresolvedError(RuntimeError):
    """The question cannot be decided at the available truncation depth."""


class CoverageError(ModelError):
    """A claimed covering misses a point; witness is an uncovered cell."""
